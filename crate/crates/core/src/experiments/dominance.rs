use serde::{Deserialize, Serialize};

use super::{StudyConfig, StudyId, StudyResult};
use crate::error::Result;
use crate::inequality::{lorenz_compare, Dominance};
use crate::netmodel::BlockModel;
use crate::spectral::block_centrality;
use crate::statics::group_size_threshold;

/// One two-group configuration: majority share and link probabilities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoGroupPoint {
    pub s1: f64,
    pub p_s: f64,
    pub p_d: f64,
}

impl TwoGroupPoint {
    fn model(self) -> Result<BlockModel> {
        BlockModel::homophily(vec![self.s1, 1.0 - self.s1], self.p_s, self.p_d)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DominanceParams {
    pub n: usize,
    /// Katz decay; the eigenvector sweep always runs, the Katz sweep only
    /// when this is set.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi: Option<f64>,
    pub p_s_values: Vec<f64>,
    pub p_d_values: Vec<f64>,
    pub s1_values: Vec<f64>,
    /// Majority shares swept below the threshold for each `(p_s, p_d)`.
    pub share_values: Vec<f64>,
    /// Katz pair where the second configuration must dominate the first.
    pub katz_pair: [TwoGroupPoint; 2],
    /// Eigenvector pair expected to be incomparable.
    pub incomparable_pair: [TwoGroupPoint; 2],
    pub incomparable_n: usize,
}

impl Default for DominanceParams {
    fn default() -> Self {
        let pt = |s1, p_s, p_d| TwoGroupPoint { s1, p_s, p_d };
        DominanceParams {
            n: 100,
            phi: Some(0.02),
            p_s_values: vec![0.4, 0.5],
            p_d_values: vec![0.05, 0.1],
            s1_values: vec![0.75],
            share_values: vec![0.5, 0.55, 0.6, 0.62, 0.64],
            katz_pair: [pt(0.75, 0.5, 0.05), pt(0.75, 0.4, 0.1)],
            incomparable_pair: [pt(0.65, 0.5, 0.1), pt(0.8, 0.5, 0.1)],
            incomparable_n: 1000,
        }
    }
}

fn agent_scores(point: TwoGroupPoint, n: usize, phi: Option<f64>) -> Result<Vec<f64>> {
    let model = point.model()?;
    let per_group = block_centrality(&model, n, phi)?;
    Ok(model.blocks(n)?.expand(&per_group))
}

fn verdict_name(d: Dominance) -> &'static str {
    match d {
        Dominance::XDominates => "x_dominates",
        Dominance::YDominates => "y_dominates",
        Dominance::Equal => "equal",
        Dominance::Incomparable => "incomparable",
    }
}

/// Lorenz comparisons of mean-field centralities across a grid of
/// two-group configurations.
///
/// With equal shares, less homophily (lower within, higher between
/// probability) must dominate. For eigenvector centrality at fixed link
/// probabilities, a smaller majority must dominate while both majorities
/// stay at or below the threshold share.
pub fn run_dominance_sweep(p: &DominanceParams, cfg: &StudyConfig) -> Result<StudyResult> {
    let mut result = StudyResult::new(StudyId::Dominance, cfg.seed);
    let mut points = Vec::new();
    for &s1 in &p.s1_values {
        for &p_s in &p.p_s_values {
            for &p_d in &p.p_d_values {
                if p_s > p_d {
                    points.push(TwoGroupPoint { s1, p_s, p_d });
                }
            }
        }
    }
    let mut kinds: Vec<(&str, Option<f64>)> = vec![("eig", None)];
    if let Some(phi) = p.phi {
        kinds.push(("katz", Some(phi)));
    }

    let mut compared = 0;
    let mut violations = Vec::new();
    for &(kind, phi) in &kinds {
        for a in &points {
            for b in &points {
                let less_homophilous = a.s1 == b.s1 && b.p_s >= a.p_s && b.p_d <= a.p_d && a != b;
                if !less_homophilous {
                    continue;
                }
                let verdict = lorenz_compare(&agent_scores(*a, p.n, phi)?, &agent_scores(*b, p.n, phi)?)?;
                compared += 1;
                if !matches!(verdict, Dominance::XDominates | Dominance::Equal) {
                    violations.push(format!("{kind}: {a:?} vs {b:?} gave {}", verdict_name(verdict)));
                }
            }
        }
    }
    let pairs: Vec<(f64, f64)> = {
        let mut v: Vec<(f64, f64)> = points.iter().map(|q| (q.p_s, q.p_d)).collect();
        v.dedup();
        v
    };
    for (p_s, p_d) in pairs {
        let threshold = group_size_threshold(p_s, p_d)?;
        let shares: Vec<f64> = p.share_values.iter().copied().filter(|&s| s <= threshold).collect();
        for (i, &s) in shares.iter().enumerate() {
            for &t in &shares[i + 1..] {
                let x = agent_scores(TwoGroupPoint { s1: s, p_s, p_d }, p.n, None)?;
                let y = agent_scores(TwoGroupPoint { s1: t, p_s, p_d }, p.n, None)?;
                let verdict = lorenz_compare(&x, &y)?;
                compared += 1;
                if !matches!(verdict, Dominance::XDominates | Dominance::Equal) {
                    violations.push(format!(
                        "eig shares: s1 {s} vs {t} at ({p_s}, {p_d}) gave {}",
                        verdict_name(verdict)
                    ));
                }
            }
        }
    }
    result.push_rows(p.n, "comparisons", &[compared as f64]);
    result.push_rows(p.n, "violations", &[violations.len() as f64]);
    result.push_check(
        "sweep_violations",
        violations.is_empty(),
        if violations.is_empty() {
            format!("0 violations in {compared} comparisons")
        } else {
            violations.join("; ")
        },
    );

    if let Some(phi) = p.phi {
        let [a, b] = p.katz_pair;
        let verdict = lorenz_compare(&agent_scores(a, p.n, Some(phi))?, &agent_scores(b, p.n, Some(phi))?)?;
        result.push_check(
            "katz_pair_second_dominates",
            verdict == Dominance::YDominates,
            format!("{a:?} vs {b:?} at phi = {phi}: {}", verdict_name(verdict)),
        );
    }
    let [a, b] = p.incomparable_pair;
    let verdict = lorenz_compare(
        &agent_scores(a, p.incomparable_n, None)?,
        &agent_scores(b, p.incomparable_n, None)?,
    )?;
    result.push_check(
        "eig_pair_incomparable",
        verdict == Dominance::Incomparable,
        format!("{a:?} vs {b:?}: {}", verdict_name(verdict)),
    );
    Ok(result)
}

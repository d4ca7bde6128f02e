use serde::{Deserialize, Serialize};

use super::{check_nonconvergence, converged, replicate, StudyConfig, StudyId, StudyResult};
use crate::error::Result;
use crate::netmodel::ModelSpec;
use crate::seeding::replication_seed;
use crate::spectral::{diagnostics, katz_bonacich_with_lambda1, top_eigenpair, PhiRule};

/// Acceptance interval for the mean of one quantity at one population.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Band {
    pub n: usize,
    pub quantity: String,
    pub low: f64,
    pub high: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConvergenceParams {
    pub model: ModelSpec,
    pub n_values: Vec<usize>,
    pub reps: usize,
    pub phi: PhiRule,
    #[serde(default)]
    pub bands: Vec<Band>,
}

impl Default for ConvergenceParams {
    fn default() -> Self {
        let band = |n, q: &str, low, high| Band {
            n,
            quantity: q.to_string(),
            low,
            high,
        };
        ConvergenceParams {
            model: ModelSpec::ErdosRenyi { p: 0.25 },
            n_values: vec![500, 1000],
            reps: 100,
            phi: PhiRule::HalfInverseLambda1,
            bands: vec![
                band(500, "eig_distance", 0.066, 0.089),
                band(500, "katz_distance", 1.49, 2.02),
                band(1000, "eig_distance", 0.047, 0.063),
                band(1000, "katz_distance", 1.48, 2.01),
            ],
        }
    }
}

fn distance(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt()
}

/// Realized against mean-field eigenvector and Katz centrality, per
/// replication, for each population.
pub fn run_convergence_study(p: &ConvergenceParams, cfg: &StudyConfig) -> Result<StudyResult> {
    let opts = cfg.solver;
    let model = p.model.resolve()?;
    let mut result = StudyResult::new(StudyId::Convergence, cfg.seed);
    let mut worst_residual: f64 = 0.0;
    for &n in &p.n_values {
        let exp = model.expected(n)?;
        let mean_eig = top_eigenpair(&exp, opts.tol, opts.max_iter)?;
        let phi = p.phi.resolve(mean_eig.value);
        let mean_katz = katz_bonacich_with_lambda1(&exp, phi, mean_eig.value, &opts)?;
        let outcomes = replicate(p.reps, cfg.parallel, |rep| -> Result<[f64; 3]> {
            let g = model.sample(n, replication_seed(cfg.seed, n, rep))?;
            let eig = top_eigenpair(&g, opts.tol, opts.max_iter)?;
            let katz = katz_bonacich_with_lambda1(&g, phi, eig.value, &opts)?;
            Ok([
                distance(&eig.vector, &mean_eig.vector),
                distance(&katz.scores, &mean_katz.scores),
                eig.residual.max(katz.residual),
            ])
        });
        let (values, dropped) = converged(outcomes)?;
        check_nonconvergence(&mut result, &format!("n{n}"), dropped, p.reps);
        let column = |k: usize| values.iter().map(|v| v[k]).collect::<Vec<_>>();
        result.record(n, "eig_distance", &column(0));
        result.record(n, "katz_distance", &column(1));
        worst_residual = column(2)
            .into_iter()
            .fold(worst_residual.max(mean_eig.residual).max(mean_katz.residual), f64::max);
    }
    for band in &p.bands {
        let Some(s) = result.summary(band.n, &band.quantity).cloned() else {
            continue;
        };
        result.push_check(
            format!("{}_n{}", band.quantity, band.n),
            (band.low..=band.high).contains(&s.mean),
            format!("mean {:.5} (se {:.5}) over {} reps, band [{}, {}]", s.mean, s.std_err, s.count, band.low, band.high),
        );
    }
    result.push_check(
        "residuals",
        worst_residual <= opts.tol.max(opts.katz_tol),
        format!("largest solver residual {worst_residual:e}"),
    );
    Ok(result)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RateParams {
    pub model: ModelSpec,
    pub n_values: Vec<usize>,
    pub reps: usize,
}

impl Default for RateParams {
    fn default() -> Self {
        RateParams {
            model: ModelSpec::ErdosRenyi { p: 0.25 },
            n_values: vec![250, 500, 1000],
            reps: 50,
        }
    }
}

/// Realized eigenvector distance against the bound `8 f(n) / delta`, with
/// `f(n) = sqrt(max degree * ln n) / lambda1` and `delta` the spectral gap
/// ratio of the expected matrix.
pub fn run_rate_study(p: &RateParams, cfg: &StudyConfig) -> Result<StudyResult> {
    let opts = cfg.solver;
    let model = p.model.resolve()?;
    let mut result = StudyResult::new(StudyId::Rate, cfg.seed);
    let mut bounds = Vec::new();
    for &n in &p.n_values {
        let exp = model.expected(n)?;
        let diag = diagnostics(&exp, &opts)?;
        let mean_eig = top_eigenpair(&exp, opts.tol, opts.max_iter)?;
        let delta = diag.gap_ratio;
        let f = (diag.max_expected_degree * (n as f64).ln()).sqrt() / diag.lambda1;
        let bound = 8.0 * f / delta;
        let tight = 8.0 * (f - f * f) / (2.0 * delta - delta * delta);
        bounds.push(bound);
        result.push_rows(n, "bound", &[bound]);
        result.push_rows(n, "tight_bound", &[tight]);
        let outcomes = replicate(p.reps, cfg.parallel, |rep| -> Result<f64> {
            let g = model.sample(n, replication_seed(cfg.seed, n, rep))?;
            let eig = top_eigenpair(&g, opts.tol, opts.max_iter)?;
            Ok(distance(&eig.vector, &mean_eig.vector))
        });
        let (dist, dropped) = converged(outcomes)?;
        check_nonconvergence(&mut result, &format!("n{n}"), dropped, p.reps);
        let s = result.record(n, "eig_distance", &dist);
        let violations = dist.iter().filter(|&&d| d >= bound).count();
        result.push_check(
            format!("bound_n{n}"),
            violations == 0,
            format!("{violations} of {} distances reach the bound {bound:.5} (max distance {:.5})", s.count, s.max),
        );
    }
    let decreasing = bounds.windows(2).all(|w| w[1] < w[0]);
    result.push_check("bound_decreasing", decreasing, format!("bounds {bounds:?}"));
    Ok(result)
}

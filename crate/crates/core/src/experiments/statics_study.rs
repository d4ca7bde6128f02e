use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{replicate, Row, StudyConfig, StudyId, StudyResult};
use crate::error::{Error, Result};
use crate::netmodel::BlockModel;
use crate::seeding::{derive_seed, stream_rng};
use crate::spectral::block_lambda1;
use crate::statics::{derivative_report, katz_derivative_closed, LinkParam};

/// Three equal groups: group 0 is tightly knit, group 1 links weakly to
/// group 0, and every other link has a tiny probability `eps`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CrossingParams {
    pub delta: f64,
    pub eps: f64,
    pub n: usize,
    /// Decay factors to scan, as fractions of `1 / lambda1`.
    pub phi_fractions: [f64; 2],
    pub phi_points: usize,
}

pub fn crossing_model(delta: f64, eps: f64) -> Result<BlockModel> {
    let third = 1.0 / 3.0;
    BlockModel::new(
        vec![third, third, third],
        vec![vec![1.0, delta, eps], vec![delta, eps, eps], vec![eps, eps, eps]],
    )
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StaticsParams {
    pub shares: Vec<f64>,
    pub p_s: f64,
    pub p_d: f64,
    pub n: usize,
    /// Log-spaced scan over `[low, high] / lambda1`.
    pub grid_points: usize,
    pub grid_range: [f64; 2],
    /// Fractions of `1 / lambda1` checked for the small- and large-decay
    /// orderings, besides the grid ends.
    pub low_fraction: f64,
    pub high_fraction: f64,
    pub crossing: CrossingParams,
    pub random_instances: usize,
    pub agreement_tol: f64,
}

impl Default for StaticsParams {
    fn default() -> Self {
        StaticsParams {
            shares: vec![0.5, 0.3, 0.2],
            p_s: 0.5,
            p_d: 0.1,
            n: 300,
            grid_points: 50,
            grid_range: [1e-3, 1.0 - 1e-3],
            low_fraction: 0.01,
            high_fraction: 0.99,
            crossing: CrossingParams {
                delta: 0.01,
                eps: 1e-6,
                n: 300,
                phi_fractions: [0.5, 1.0 - 1e-5],
                phi_points: 60,
            },
            random_instances: 20,
            agreement_tol: 1e-5,
        }
    }
}

fn log_grid(lo: f64, hi: f64, k: usize) -> Vec<f64> {
    if k == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..k).map(|i| (a + (b - a) * i as f64 / (k - 1) as f64).exp()).collect()
}

/// Grid approaching 1 geometrically: `1 - (1 - lo) r^i`, ending at `hi`.
fn grid_to_one(lo: f64, hi: f64, k: usize) -> Vec<f64> {
    log_grid(1.0 - lo, 1.0 - hi, k).into_iter().map(|g| 1.0 - g).collect()
}

/// Groups sorted by size, smallest first, with their derivative values.
fn ordered_by_size(sizes: &[usize], values: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..sizes.len()).collect();
    idx.sort_by_key(|&g| sizes[g]);
    idx.into_iter().map(|g| values[g]).collect()
}

fn strictly(values: &[f64], increasing: bool) -> bool {
    values.windows(2).all(|w| if increasing { w[1] > w[0] } else { w[1] < w[0] })
}

/// Katz derivatives with respect to the between-group probability across
/// decay factors, the three-group crossing example, and agreement of the
/// three derivative routes on random block models.
pub fn run_statics_regime_study(p: &StaticsParams, cfg: &StudyConfig) -> Result<StudyResult> {
    let mut result = StudyResult::new(StudyId::Statics, cfg.seed);
    let model = BlockModel::homophily(p.shares.clone(), p.p_s, p.p_d)?;
    let blocks = model.blocks(p.n)?;
    let sizes = blocks.sizes().to_vec();
    let lambda1 = block_lambda1(&blocks);
    let derivs = |frac: f64| -> Result<Vec<f64>> {
        (0..model.groups())
            .map(|g| katz_derivative_closed(&model, p.n, g, LinkParam::Between, frac / lambda1))
            .collect()
    };

    let grid = log_grid(p.grid_range[0], p.grid_range[1], p.grid_points);
    let scans = replicate(grid.len(), cfg.parallel, |i| derivs(grid[i]));
    for (i, scan) in scans.into_iter().enumerate() {
        let values = std::iter::once(("phi_lambda1".to_string(), grid[i]))
            .chain(scan?.into_iter().enumerate().map(|(g, d)| (format!("d_between_group{g}"), d)));
        for (quantity, value) in values {
            result.rows.push(Row {
                n: p.n,
                rep: i,
                quantity,
                value,
            });
        }
    }
    let mut checks = vec![("low", p.low_fraction, false), ("high", p.high_fraction, true)];
    checks.push(("grid_low", grid[0], false));
    checks.push(("grid_high", grid[grid.len() - 1], true));
    for (label, frac, increasing) in checks {
        let by_size = ordered_by_size(&sizes, &derivs(frac)?);
        let trend = if increasing { "increasing" } else { "decreasing" };
        result.push_check(
            format!("between_derivative_{trend}_in_size_{label}"),
            strictly(&by_size, increasing),
            format!("phi lambda1 = {frac}: derivatives by group size ascending {by_size:?}"),
        );
    }

    let three_groups = crossing_model(p.crossing.delta, p.crossing.eps)?;
    let crossing_lambda1 = block_lambda1(&three_groups.blocks(p.crossing.n)?);
    let fractions = grid_to_one(p.crossing.phi_fractions[0], p.crossing.phi_fractions[1], p.crossing.phi_points);
    let mut crossing = None;
    for (i, &frac) in fractions.iter().enumerate() {
        let phi = frac / crossing_lambda1;
        let d0 = katz_derivative_closed(&three_groups, p.crossing.n, 0, LinkParam::Pair(1, 2), phi)?;
        let d1 = katz_derivative_closed(&three_groups, p.crossing.n, 1, LinkParam::Pair(1, 2), phi)?;
        for (q, v) in [("crossing_phi_lambda1", frac), ("crossing_d_group0", d0), ("crossing_d_group1", d1)] {
            result.rows.push(Row {
                n: p.crossing.n,
                rep: i,
                quantity: q.to_string(),
                value: v,
            });
        }
        if crossing.is_none() && d0 > d1 {
            crossing = Some((frac, d0, d1));
        }
    }
    result.push_check(
        "derivative_crossing",
        crossing.is_some(),
        match crossing {
            Some((f, d0, d1)) => format!("first at phi lambda1 = {f:.6}: group 0 {d0:.6} > group 1 {d1:.6}"),
            None => "outsider derivative never exceeds the link-forming group's".to_string(),
        },
    );

    let reports = replicate(p.random_instances, cfg.parallel, |i| random_agreement(cfg.seed, i));
    let mut worst: f64 = 0.0;
    let mut failures = Vec::new();
    for (i, r) in reports.into_iter().enumerate() {
        match r {
            Ok(a) => {
                worst = worst.max(a);
                result.rows.push(Row {
                    n: 0,
                    rep: i,
                    quantity: "derivative_agreement".to_string(),
                    value: a,
                });
            }
            Err(Error::DerivativeDisagreement { agreement }) => {
                worst = worst.max(agreement);
                failures.push(i);
            }
            Err(e) => return Err(e),
        }
    }
    result.push_check(
        "derivative_routes_agree",
        failures.is_empty() && worst <= p.agreement_tol,
        format!("worst relative disagreement {worst:e} over {} instances", p.random_instances),
    );
    Ok(result)
}

/// Agreement of the three derivative routes on one random block model.
/// Instances cycle through 2, 3 and 4 groups.
fn random_agreement(seed: u64, instance: usize) -> Result<f64> {
    let mut rng = stream_rng(derive_seed(seed, 0x57a7, instance as u64), 0);
    let m = 2 + instance % 3;
    let weights: Vec<f64> = (0..m).map(|_| rng.random_range(0.2..1.0)).collect();
    let total: f64 = weights.iter().sum();
    let mut shares: Vec<f64> = weights.iter().map(|w| w / total).collect();
    let head: f64 = shares[..m - 1].iter().sum();
    shares[m - 1] = 1.0 - head;
    let mut probs = vec![vec![0.0; m]; m];
    for i in 0..m {
        for j in i..m {
            let v = rng.random_range(0.05..1.0);
            probs[i][j] = v;
            probs[j][i] = v;
        }
    }
    let model = BlockModel::new(shares, probs)?;
    let n = rng.random_range(40..300);
    let frac = rng.random_range(0.05..0.95);
    let target = rng.random_range(0..m);
    let i = rng.random_range(0..m);
    let j = rng.random_range(0..m);
    let phi = frac / block_lambda1(&model.blocks(n)?);
    Ok(derivative_report(&model, n, target, LinkParam::Pair(i, j), phi)?.agreement)
}

use serde::{Deserialize, Serialize};

use super::{StudyConfig, StudyId, StudyResult};
use crate::error::Result;
use crate::netmodel::{build_spatial_grid, Network, SpatialGridModel};
use crate::spectral::{katz_bonacich_with_lambda1, top_eigenpair, PhiRule};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpatialParams {
    pub k: usize,
    pub phi: PhiRule,
    /// Decay exponents tabulated in the ranking table.
    pub rho_values: Vec<f64>,
    /// Exponents at which the edge-midpoint agent `(0, k/2)` must outrank
    /// the interior agent `(3, 3)`.
    pub edge_wins_at: Vec<f64>,
    /// Exponents at which the interior agent must outrank the edge agent.
    pub interior_wins_at: Vec<f64>,
    /// Near-zero exponent at which every agent is about equally central.
    pub flat_rho: f64,
    pub flat_tol: f64,
    pub ratio_k_values: Vec<usize>,
    pub ratio_rho_values: Vec<f64>,
}

impl Default for SpatialParams {
    fn default() -> Self {
        SpatialParams {
            k: 20,
            phi: PhiRule::InverseLambda1Fraction(0.1),
            rho_values: vec![1e-4, 0.1, 0.25, 0.5, 0.75, 0.9, 0.95, 1.0],
            edge_wins_at: vec![0.5],
            interior_wins_at: vec![0.95],
            flat_rho: 1e-4,
            flat_tol: 1e-3,
            ratio_k_values: vec![5, 10, 20, 40],
            ratio_rho_values: vec![0.5, 1.0],
        }
    }
}

struct Ranking {
    edge: f64,
    interior: f64,
    spread: f64,
}

fn ranking(k: usize, rho: f64, phi: PhiRule, cfg: &StudyConfig) -> Result<Ranking> {
    let opts = cfg.solver;
    let model = SpatialGridModel::new(k, rho)?;
    let a = build_spatial_grid(&model)?;
    let lambda1 = top_eigenpair(&a, opts.tol, opts.max_iter)?.value;
    let c = katz_bonacich_with_lambda1(&a, phi.resolve(lambda1), lambda1, &opts)?.scores;
    let max = c.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = c.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(Ranking {
        edge: c[model.index(0, k / 2)],
        interior: c[model.index(3, 3)],
        spread: max / min,
    })
}

/// Katz ranking of an edge agent against an interior agent on the spatial
/// grid, and growth of the large-eigenvalue ratio with the grid size.
pub fn run_spatial_ranking_study(p: &SpatialParams, cfg: &StudyConfig) -> Result<StudyResult> {
    let opts = cfg.solver;
    let mut result = StudyResult::new(StudyId::Spatial, cfg.seed);
    let n = (p.k + 1) * (p.k + 1);
    let mut rhos = p.rho_values.clone();
    for r in p.edge_wins_at.iter().chain(&p.interior_wins_at).chain([&p.flat_rho]) {
        if !rhos.contains(r) {
            rhos.push(*r);
        }
    }
    let mut table = Vec::new();
    for (idx, &rho) in rhos.iter().enumerate() {
        let r = ranking(p.k, rho, p.phi, cfg)?;
        for (q, v) in [("rho", rho), ("katz_edge", r.edge), ("katz_interior", r.interior), ("max_min_ratio", r.spread)] {
            result.rows.push(super::Row {
                n,
                rep: idx,
                quantity: q.to_string(),
                value: v,
            });
        }
        table.push((rho, r));
    }
    let lookup = |rho: f64| table.iter().find(|(r, _)| *r == rho).map(|(_, x)| x).expect("tabulated");
    for &rho in &p.edge_wins_at {
        let r = lookup(rho);
        result.push_check(
            format!("edge_outranks_interior_rho{rho}"),
            r.edge > r.interior,
            format!("c(0,{}) = {:.10}, c(3,3) = {:.10}", p.k / 2, r.edge, r.interior),
        );
    }
    for &rho in &p.interior_wins_at {
        let r = lookup(rho);
        result.push_check(
            format!("interior_outranks_edge_rho{rho}"),
            r.interior > r.edge,
            format!("c(3,3) = {:.10}, c(0,{}) = {:.10}", r.interior, p.k / 2, r.edge),
        );
    }
    let flat = lookup(p.flat_rho);
    result.push_check(
        "flat_limit",
        (flat.spread - 1.0).abs() <= p.flat_tol,
        format!("max/min centrality {:.10} at rho = {}", flat.spread, p.flat_rho),
    );

    for &rho in &p.ratio_rho_values {
        let mut ratios = Vec::new();
        for &k in &p.ratio_k_values {
            let a = build_spatial_grid(&SpatialGridModel::new(k, rho)?)?;
            let lambda1 = top_eigenpair(&a, opts.tol, opts.max_iter)?.value;
            let size = a.n() as f64;
            let ratio = lambda1 / (a.max_row_sum() * size.ln()).sqrt();
            result.rows.push(super::Row {
                n: a.n(),
                rep: 0,
                quantity: format!("large_eig_ratio_rho{rho}"),
                value: ratio,
            });
            ratios.push(ratio);
        }
        result.push_check(
            format!("large_eig_ratio_increasing_rho{rho}"),
            ratios.windows(2).all(|w| w[1] > w[0]),
            format!("ratios {ratios:?} over k = {:?}", p.ratio_k_values),
        );
    }
    Ok(result)
}

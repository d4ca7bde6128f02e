//! Comparative statics of mean-field centrality in block models.
//!
//! Katz derivatives are computed three independent ways: a walk-sum over
//! group sequences, the resolvent formula, and central finite differences of
//! the exact reduced solve. `DerivativeReport` runs all three.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::netmodel::{BlockModel, BlockStructure};
use crate::spectral::{block_centrality_of, block_lambda1, resolvent, SolverOptions};

const AGREEMENT_TOL: f64 = 1e-5;
const FD_RELATIVE_STEP: f64 = 1e-6;

/// The link probability a derivative is taken with respect to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LinkParam {
    /// `p_ij` between groups `i` and `j` (`i == j` for within-group).
    Pair(usize, usize),
    /// The common within-group probability of a two-probability model.
    Within,
    /// The common between-group probability of a two-probability model.
    Between,
}

impl LinkParam {
    /// The `(i, j)` pairs, `i <= j`, whose probability moves.
    fn pairs(self, m: usize) -> Vec<(usize, usize)> {
        match self {
            LinkParam::Pair(i, j) => vec![(i.min(j), i.max(j))],
            LinkParam::Within => (0..m).map(|i| (i, i)).collect(),
            LinkParam::Between => (0..m)
                .flat_map(|i| (i + 1..m).map(move |j| (i, j)))
                .collect(),
        }
    }

    fn check(self, model: &BlockModel) -> Result<()> {
        let m = model.groups();
        match self {
            LinkParam::Pair(i, j) if i >= m || j >= m => Err(Error::invalid(
                "wrt",
                format!("pair ({i}, {j}) is out of range for {m} groups"),
            )),
            LinkParam::Pair(..) => Ok(()),
            _ if model.homophily_params().is_none() => Err(Error::invalid(
                "wrt",
                "within/between parameters need a two-probability model",
            )),
            LinkParam::Between if m < 2 => Err(Error::invalid("wrt", "a single group has no between-group links")),
            _ => Ok(()),
        }
    }

    fn value(self, model: &BlockModel) -> f64 {
        let (i, j) = self.pairs(model.groups())[0];
        model.prob(i, j)
    }
}

fn check_group(model: &BlockModel, l: usize) -> Result<()> {
    if l >= model.groups() {
        return Err(Error::invalid("target", format!("group {l} out of range")));
    }
    Ok(())
}

fn homophily(model: &BlockModel) -> Result<(f64, f64)> {
    model.homophily_params().ok_or_else(|| {
        Error::invalid("probs", "the closed form needs equal within- and equal between-group probabilities")
    })
}

fn feasible(b: &BlockStructure, phi: f64) -> Result<f64> {
    let lambda1 = block_lambda1(b);
    if !(phi >= 0.0 && phi.is_finite()) {
        return Err(Error::invalid("phi", format!("{phi} must be finite and nonnegative")));
    }
    if phi * lambda1 > 1.0 - SolverOptions::default().margin {
        return Err(Error::infeasible(phi, lambda1));
    }
    Ok(lambda1)
}

/// Centrality of a member of group `l` over that of a member of group `lp`,
/// from the two-probability closed form. Without `phi` this is the
/// eigenvector ratio, with `phi` the Katz ratio.
pub fn group_centrality_ratio(model: &BlockModel, n: usize, groups: (usize, usize), phi: Option<f64>) -> Result<f64> {
    let (p_s, p_d) = homophily(model)?;
    let (l, lp) = groups;
    check_group(model, l)?;
    check_group(model, lp)?;
    let b = model.blocks(n)?;
    let size = |g: usize| b.sizes()[g] as f64;
    // eigenvector: 1/lambda1 plays the role of phi
    let rate = match phi {
        None => 1.0 / block_lambda1(&b),
        Some(phi) => {
            feasible(&b, phi)?;
            phi
        }
    };
    let delta = p_s - p_d;
    Ok((1.0 - rate * size(lp) * delta) / (1.0 - rate * size(l) * delta))
}

/// Derivative of [`group_centrality_ratio`] with respect to the within- or
/// between-group probability. For the eigenvector ratio `lambda1` is held at
/// its current value.
pub fn ratio_elasticity(
    model: &BlockModel,
    n: usize,
    groups: (usize, usize),
    wrt: LinkParam,
    phi: Option<f64>,
) -> Result<f64> {
    let (p_s, p_d) = homophily(model)?;
    let (l, lp) = groups;
    check_group(model, l)?;
    check_group(model, lp)?;
    let b = model.blocks(n)?;
    let rate = match phi {
        None => 1.0 / block_lambda1(&b),
        Some(phi) => {
            feasible(&b, phi)?;
            phi
        }
    };
    let sign = match wrt {
        LinkParam::Within => 1.0,
        LinkParam::Between => -1.0,
        LinkParam::Pair(..) => {
            return Err(Error::invalid("wrt", "elasticities are defined for within or between only"))
        }
    };
    Ok(sign * frozen_ratio_slope(b.sizes()[l] as f64, b.sizes()[lp] as f64, p_s - p_d, rate))
}

/// `d/d(delta)` of `(1 - r s' delta) / (1 - r s delta)` at fixed `r`.
fn frozen_ratio_slope(size_l: f64, size_lp: f64, delta: f64, rate: f64) -> f64 {
    rate * (size_l - size_lp) / (1.0 - rate * size_l * delta).powi(2)
}

/// Katz derivative of a group-`l` member's centrality, summed over walks.
///
/// Walk weights depend only on the sequence of groups visited, so a dynamic
/// program over group states carries two accumulators per group: the total
/// weight of walks of length `k` ending there, and the same weighted by the
/// number of steps that use the varied probability.
pub fn katz_derivative_walks(model: &BlockModel, n: usize, l: usize, wrt: LinkParam, phi: f64, tol: f64) -> Result<f64> {
    check_group(model, l)?;
    wrt.check(model)?;
    let m = model.groups();
    let pairs = wrt.pairs(m);
    if let Some(&(i, j)) = pairs.iter().find(|&&(i, j)| model.prob(i, j) == 0.0) {
        return Err(Error::ZeroProbability { i, j });
    }
    if pairs.len() > 1 {
        return pairs
            .into_iter()
            .map(|(i, j)| katz_derivative_walks(model, n, l, LinkParam::Pair(i, j), phi, tol))
            .sum();
    }
    let (i, j) = pairs[0];
    let b = model.blocks(n)?;
    let lambda1 = feasible(&b, phi)?;
    let p = b.reduced_matrix();
    let steps = walk_terms(phi * lambda1, n, model.prob(i, j), tol);
    let hits = |g: usize, h: usize| (g == i && h == j) || (g == j && h == i);

    let mut weight = vec![0.0; m];
    weight[l] = 1.0;
    let mut counted = vec![0.0; m];
    let mut total = 0.0;
    let mut discount = 1.0;
    for _ in 0..steps {
        let mut next_weight = vec![0.0; m];
        let mut next_counted = vec![0.0; m];
        for g in 0..m {
            for h in 0..m {
                let step = p[g][h];
                next_weight[h] += weight[g] * step;
                let hit = if hits(g, h) { weight[g] } else { 0.0 };
                next_counted[h] += (counted[g] + hit) * step;
            }
        }
        weight = next_weight;
        counted = next_counted;
        discount *= phi;
        total += discount * counted.iter().sum::<f64>();
    }
    Ok(total / model.prob(i, j))
}

/// Smallest `K` with `sum_{k > K} k x^k * sqrt(n) / p < tol`.
fn walk_terms(x: f64, n: usize, p: f64, tol: f64) -> usize {
    if x <= 0.0 {
        return 0;
    }
    let scale = (n as f64).sqrt() / p;
    let tail = |k: f64| x.powf(k + 1.0) * (k + 1.0 - k * x) / (1.0 - x).powi(2) * scale;
    let mut k = 0usize;
    let mut stride = 1usize;
    // doubling search, then bisection; the tail is decreasing once k x < 1 - x
    while tail((k + stride) as f64) >= tol {
        k += stride;
        stride *= 2;
    }
    let (mut lo, mut hi) = (k, k + stride);
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if tail(mid as f64) >= tol {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if tail(lo as f64) < tol {
        lo
    } else {
        hi
    }
}

/// Katz derivative of a group-`l` member's centrality from the resolvent
/// `M = (I - phi P)^{-1}`:
/// `phi (M_li size_j c_j + M_lj size_i c_i)` for `i != j`, and the single
/// term `phi M_li size_i c_i` for `i == j`.
pub fn katz_derivative_closed(model: &BlockModel, n: usize, l: usize, wrt: LinkParam, phi: f64) -> Result<f64> {
    check_group(model, l)?;
    wrt.check(model)?;
    let b = model.blocks(n)?;
    feasible(&b, phi)?;
    let m = b.groups();
    let inv = resolvent(&b, phi)?;
    let c: Vec<f64> = (0..m).map(|g| inv.row(g).sum()).collect();
    let size = |g: usize| b.sizes()[g] as f64;
    Ok(wrt
        .pairs(m)
        .into_iter()
        .map(|(i, j)| {
            if i == j {
                phi * inv[(l, i)] * size(i) * c[i]
            } else {
                phi * (inv[(l, i)] * size(j) * c[j] + inv[(l, j)] * size(i) * c[i])
            }
        })
        .sum())
}

/// Central difference of the exact Katz solve for group `l`, moving every
/// probability covered by `wrt` by `step`.
pub fn finite_difference_derivative(model: &BlockModel, n: usize, l: usize, wrt: LinkParam, phi: f64, step: f64) -> Result<f64> {
    check_group(model, l)?;
    wrt.check(model)?;
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::invalid("step", format!("{step} must be positive and finite")));
    }
    let m = model.groups();
    let pairs = wrt.pairs(m);
    let shifted = |by: f64| -> Result<f64> {
        let mut probs = model.probs().to_vec();
        for &(i, j) in &pairs {
            probs[i][j] += by;
            if i != j {
                probs[j][i] += by;
            }
        }
        let b = model.with_probs_unchecked(probs).blocks(n)?;
        Ok(block_centrality_of(&b, Some(phi))?[l])
    };
    Ok((shifted(step)? - shifted(-step)?) / (2.0 * step))
}

/// One Katz derivative computed three ways.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DerivativeReport {
    /// Group whose members' centrality is differentiated.
    pub target: usize,
    pub parameter: LinkParam,
    pub phi: f64,
    pub walk_sum_value: f64,
    pub closed_form_value: f64,
    pub finite_diff_value: f64,
    /// Largest pairwise relative difference of the three values.
    pub agreement: f64,
}

fn relative_gap(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

/// Run all three derivative routes; fails when they disagree beyond 1e-5.
pub fn derivative_report(model: &BlockModel, n: usize, l: usize, wrt: LinkParam, phi: f64) -> Result<DerivativeReport> {
    wrt.check(model)?;
    let walk_sum_value = katz_derivative_walks(model, n, l, wrt, phi, 1e-12)?;
    let closed_form_value = katz_derivative_closed(model, n, l, wrt, phi)?;
    let step = FD_RELATIVE_STEP * wrt.value(model);
    let finite_diff_value = finite_difference_derivative(model, n, l, wrt, phi, step)?;
    let agreement = relative_gap(walk_sum_value, closed_form_value)
        .max(relative_gap(walk_sum_value, finite_diff_value))
        .max(relative_gap(closed_form_value, finite_diff_value));
    if agreement > AGREEMENT_TOL {
        return Err(Error::DerivativeDisagreement { agreement });
    }
    Ok(DerivativeReport {
        target: l,
        parameter: wrt,
        phi,
        walk_sum_value,
        closed_form_value,
        finite_diff_value,
        agreement,
    })
}

/// Two groups with a majority share `s1` and two link probabilities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoGroupSpec {
    pub s1: f64,
    pub p_s: f64,
    pub p_d: f64,
    pub n: usize,
}

impl TwoGroupSpec {
    pub fn new(s1: f64, p_s: f64, p_d: f64, n: usize) -> Result<Self> {
        if !(0.5..1.0).contains(&s1) {
            return Err(Error::invalid("s1", format!("{s1} must lie in [1/2, 1)")));
        }
        if !(p_d > 0.0 && p_s >= p_d && p_s <= 1.0) {
            return Err(Error::invalid("p_s", format!("need 0 < p_d <= p_s <= 1, got p_s = {p_s}, p_d = {p_d}")));
        }
        Ok(TwoGroupSpec { s1, p_s, p_d, n })
    }
}

/// Minority-to-majority eigenvector entry ratio `r`, and the total
/// centrality `s1 n + (1 - s1) n r` of the eigenvector scaled so majority
/// members score 1. Shares are used unrounded.
pub fn two_group_eigvec_closed_form(spec: &TwoGroupSpec) -> (f64, f64) {
    let TwoGroupSpec { s1, p_s, p_d, n } = *spec;
    let a = (1.0 - 2.0 * s1) * p_s;
    let r = (a + (a * a + 4.0 * s1 * (1.0 - s1) * p_d * p_d).sqrt()) / ((2.0 - 2.0 * s1) * p_d);
    let n = n as f64;
    (r, s1 * n + (1.0 - s1) * n * r)
}

/// Majority share at which the scaled total centrality turns around.
pub fn group_size_threshold(p_s: f64, p_d: f64) -> Result<f64> {
    if p_d.is_nan() || p_d <= 0.0 {
        return Err(Error::invalid("p_d", format!("{p_d} must be positive")));
    }
    if p_s < p_d {
        return Err(Error::invalid("p_s", format!("{p_s} must be at least p_d = {p_d}")));
    }
    Ok(0.5 + p_d / (2.0 * (2.0 * p_d * p_d + 2.0 * p_s * p_d).sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::block_centrality;
    use nalgebra::{DMatrix, DVector};

    fn three_groups() -> BlockModel {
        BlockModel::new(
            vec![0.5, 0.3, 0.2],
            vec![vec![0.4, 0.1, 0.2], vec![0.1, 0.3, 0.05], vec![0.2, 0.05, 0.6]],
        )
        .unwrap()
    }

    fn phi_at(model: &BlockModel, n: usize, frac: f64) -> f64 {
        frac / block_lambda1(&model.blocks(n).unwrap())
    }

    #[test]
    fn ratio_is_one_in_symmetric_cases() {
        let eq = BlockModel::homophily(vec![0.5, 0.5], 0.5, 0.1).unwrap();
        assert!((group_centrality_ratio(&eq, 100, (0, 1), None).unwrap() - 1.0).abs() < 1e-15);
        let flat = BlockModel::homophily(vec![0.7, 0.3], 0.2, 0.2).unwrap();
        assert_eq!(group_centrality_ratio(&flat, 100, (0, 1), None).unwrap(), 1.0);
    }

    #[test]
    fn ratio_matches_block_solve() {
        let m = BlockModel::homophily(vec![0.65, 0.35], 0.5, 0.1).unwrap();
        let v = block_centrality(&m, 1000, None).unwrap();
        let r = group_centrality_ratio(&m, 1000, (0, 1), None).unwrap();
        assert!(r > 1.0);
        assert!((r - v[0] / v[1]).abs() < 1e-9);
        let phi = phi_at(&m, 1000, 0.5);
        let c = block_centrality(&m, 1000, Some(phi)).unwrap();
        let r = group_centrality_ratio(&m, 1000, (0, 1), Some(phi)).unwrap();
        assert!((r - c[0] / c[1]).abs() < 1e-9);
    }

    #[test]
    fn ratio_rejects_general_probs() {
        assert!(group_centrality_ratio(&three_groups(), 100, (0, 1), None).is_err());
    }

    #[test]
    fn elasticities() {
        let m = BlockModel::homophily(vec![0.65, 0.35], 0.5, 0.1).unwrap();
        let n = 1000;
        let phi = phi_at(&m, n, 0.5);
        let up = ratio_elasticity(&m, n, (0, 1), LinkParam::Within, Some(phi)).unwrap();
        let down = ratio_elasticity(&m, n, (0, 1), LinkParam::Between, Some(phi)).unwrap();
        assert!(up > 0.0);
        assert_eq!(up, -down);
        let eq = BlockModel::homophily(vec![0.5, 0.5], 0.5, 0.1).unwrap();
        assert_eq!(ratio_elasticity(&eq, 100, (0, 1), LinkParam::Within, None).unwrap(), 0.0);
    }

    #[test]
    fn elasticities_match_finite_differences() {
        let n = 1000;
        let (s_l, s_lp) = (650.0, 350.0);
        let m = BlockModel::homophily(vec![0.65, 0.35], 0.5, 0.1).unwrap();
        let lambda1 = block_lambda1(&m.blocks(n).unwrap());
        let phi = 0.5 / lambda1;
        // Katz: the ratio depends on delta only through phi * delta
        let ratio = |delta: f64, rate: f64| (1.0 - rate * s_lp * delta) / (1.0 - rate * s_l * delta);
        for (rate, wrt_phi) in [(phi, Some(phi)), (1.0 / lambda1, None)] {
            let h = 1e-6 * 0.5;
            let fd = (ratio(0.4 + h, rate) - ratio(0.4 - h, rate)) / (2.0 * h);
            let exact = ratio_elasticity(&m, n, (0, 1), LinkParam::Within, wrt_phi).unwrap();
            assert!((fd - exact).abs() / exact.abs() < 1e-6, "{fd} vs {exact}");
        }
    }

    #[test]
    fn single_group_derivatives_match_closed_form() {
        let (p, n) = (0.2, 50);
        let m = BlockModel::erdos_renyi(p).unwrap();
        let phi = 0.5 / (n as f64 * p);
        let want = phi * n as f64 / (1.0 - phi * n as f64 * p).powi(2);
        let walk = katz_derivative_walks(&m, n, 0, LinkParam::Pair(0, 0), phi, 1e-12).unwrap();
        let closed = katz_derivative_closed(&m, n, 0, LinkParam::Pair(0, 0), phi).unwrap();
        assert!((walk - want).abs() / want < 1e-10);
        assert!((closed - want).abs() / want < 1e-12);
        assert_eq!(katz_derivative_walks(&m, n, 0, LinkParam::Pair(0, 0), 0.0, 1e-12).unwrap(), 0.0);
    }

    #[test]
    fn three_routes_agree() {
        let m = three_groups();
        let phi = phi_at(&m, 90, 0.7);
        for wrt in [LinkParam::Pair(0, 1), LinkParam::Pair(1, 2), LinkParam::Pair(2, 2)] {
            for l in 0..3 {
                let r = derivative_report(&m, 90, l, wrt, phi).unwrap();
                assert!(r.agreement < 1e-6, "{r:?}");
            }
        }
    }

    #[test]
    fn aggregated_parameters_sum_pairs() {
        let m = BlockModel::homophily(vec![0.5, 0.3, 0.2], 0.5, 0.1).unwrap();
        let phi = phi_at(&m, 300, 0.6);
        let r = derivative_report(&m, 300, 2, LinkParam::Between, phi).unwrap();
        let by_pair: f64 = [(0, 1), (0, 2), (1, 2)]
            .iter()
            .map(|&(i, j)| katz_derivative_closed(&m, 300, 2, LinkParam::Pair(i, j), phi).unwrap())
            .sum();
        assert!((r.closed_form_value - by_pair).abs() < 1e-12 * by_pair);
        assert!(derivative_report(&three_groups(), 90, 0, LinkParam::Within, 0.001).is_err());
    }

    #[test]
    fn finite_difference_step_must_be_positive() {
        let m = three_groups();
        assert!(finite_difference_derivative(&m, 90, 0, LinkParam::Pair(0, 1), 0.01, 0.0).is_err());
    }

    #[test]
    fn derivative_rejects_infeasible_phi() {
        let m = three_groups();
        let phi = phi_at(&m, 90, 1.01);
        let err = katz_derivative_closed(&m, 90, 0, LinkParam::Pair(0, 1), phi).unwrap_err();
        assert!(matches!(err, Error::InfeasiblePhi { .. }));
    }

    #[test]
    fn two_group_closed_form() {
        let (r, t) = two_group_eigvec_closed_form(&TwoGroupSpec::new(0.5, 0.5, 0.1, 100).unwrap());
        assert!((r - 1.0).abs() < 1e-15);
        assert!((t - 100.0).abs() < 1e-12);
        let (r, _) = two_group_eigvec_closed_form(&TwoGroupSpec::new(0.7, 0.3, 0.3, 100).unwrap());
        assert!((r - 1.0).abs() < 1e-14);

        let (s, p_s, p_d, n) = (0.65, 0.5, 0.1, 1000.0);
        let (r, _) = two_group_eigvec_closed_form(&TwoGroupSpec::new(s, p_s, p_d, 1000).unwrap());
        let p = DMatrix::from_row_slice(2, 2, &[s * n * p_s, (1.0 - s) * n * p_d, s * n * p_d, (1.0 - s) * n * p_s]);
        let eig = p.clone().complex_eigenvalues();
        let lambda = eig.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max);
        let v = DVector::from_vec(vec![1.0, r]);
        let resid = (&p * &v - lambda * &v).norm();
        assert!(resid < 1e-10 * lambda, "residual {resid}");
    }

    #[test]
    fn threshold_values() {
        assert!((group_size_threshold(0.3, 0.3).unwrap() - 0.75).abs() < 1e-15);
        assert!((group_size_threshold(0.5, 0.1).unwrap() - 0.644_337_567).abs() < 1e-8);
        assert!(group_size_threshold(0.5, 1e-12).unwrap() - 0.5 < 1e-5);
        assert!(group_size_threshold(0.5, 0.0).is_err());
        assert!(group_size_threshold(0.1, 0.5).is_err());
    }
}

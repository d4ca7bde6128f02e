//! Eigenvector and Katz-Bonacich centrality, plus the spectral quantities
//! that decide whether realized centralities track their mean-field values.
//!
//! Block-constant expected matrices are solved in the reduced group space:
//! with `D = diag(sizes)` and `V` the block values, `S = D^{1/2} V D^{1/2}` is
//! symmetric and carries every nonzero eigenvalue of the `n x n` matrix. A
//! unit eigenvector `y` of `S` expands to the agent vector `y_g / sqrt(size_g)`
//! with the same norm and the same residual.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::netmodel::{BlockModel, BlockStructure, ExpectedMatrix, Network};
use crate::seeding::stream_rng;

const DEFLATION_SEED: u64 = 0x5eed_1a2b;
const DEFLATION_RESTARTS: usize = 3;
/// Relative size of the shift added to the matrix so that an eigenvalue at
/// `-lambda1` cannot stall power iteration.
const SHIFT_FRACTION: f64 = 0.05;

/// Solver settings shared by the eigen and Katz routines.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverOptions {
    /// Bound on `||Av - lambda v||` for eigenpairs.
    pub tol: f64,
    pub max_iter: usize,
    /// Bound on the truncation error of the Katz series.
    pub katz_tol: f64,
    pub max_terms: usize,
    /// `phi * lambda1` must stay at or below `1 - margin`.
    pub margin: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            tol: 1e-10,
            max_iter: 100_000,
            katz_tol: 1e-10,
            max_terms: 10_000_000,
            margin: 1e-6,
        }
    }
}

/// How a study picks the Katz decay factor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PhiRule {
    Fixed(f64),
    /// `1 / (2 lambda1)` of the expected matrix.
    HalfInverseLambda1,
    /// `fraction / lambda1` of the expected matrix.
    InverseLambda1Fraction(f64),
}

impl PhiRule {
    pub fn resolve(self, lambda1: f64) -> f64 {
        match self {
            PhiRule::Fixed(phi) => phi,
            PhiRule::HalfInverseLambda1 => 0.5 / lambda1,
            PhiRule::InverseLambda1Fraction(f) => f / lambda1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenPair {
    pub value: f64,
    /// Unit Euclidean norm, oriented so the entry sum is nonnegative.
    pub vector: Vec<f64>,
    pub residual: f64,
    pub iterations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KatzResult {
    pub phi: f64,
    pub scores: Vec<f64>,
    /// `||c - phi A c - 1||`.
    pub residual: f64,
    pub terms: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralDiagnostics {
    pub lambda1: f64,
    /// Absolute value of the second eigenvalue by modulus.
    pub lambda2: f64,
    pub gap_ratio: f64,
    pub max_expected_degree: f64,
    /// `lambda1 / sqrt(max_expected_degree * ln n)`.
    pub large_eig_ratio: f64,
    /// `lambda1^2`.
    pub lambda1_squared: f64,
    /// `min entry * sum of entries`; never above `lambda1_squared`.
    pub min_entry_times_sum: f64,
}

impl SpectralDiagnostics {
    pub fn lambda1_lower_bound_holds(&self) -> bool {
        self.lambda1_squared >= self.min_entry_times_sum * (1.0 - 1e-9)
    }
}

fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

fn norm(x: &[f64]) -> f64 {
    dot(x, x).sqrt()
}

fn scale(x: &mut [f64], by: f64) {
    x.iter_mut().for_each(|v| *v *= by);
}

/// Shifted power iteration from `x` (normalized here). Returns eigenvalue,
/// vector, residual and iterations once the residual drops to `tol`.
fn power_iterate<F>(
    apply: F,
    mut x: Vec<f64>,
    shift: f64,
    tol: f64,
    max_iter: usize,
) -> Result<(f64, Vec<f64>, f64, usize)>
where
    F: Fn(&[f64], &mut [f64]),
{
    let n = x.len();
    let s = norm(&x);
    scale(&mut x, 1.0 / s);
    let mut ax = vec![0.0; n];
    let mut residual = f64::INFINITY;
    for it in 1..=max_iter {
        apply(&x, &mut ax);
        let lambda = dot(&x, &ax);
        residual = ax
            .iter()
            .zip(&x)
            .map(|(a, v)| (a - lambda * v).powi(2))
            .sum::<f64>()
            .sqrt();
        if residual <= tol {
            return Ok((lambda, x, residual, it));
        }
        for (a, v) in ax.iter_mut().zip(&x) {
            *a += shift * v;
        }
        let s = norm(&ax);
        if s == 0.0 {
            return Ok((0.0, x, 0.0, it));
        }
        for (v, a) in x.iter_mut().zip(&ax) {
            *v = a / s;
        }
    }
    Err(Error::NonConvergence {
        iterations: max_iter,
        residual,
    })
}

fn orient(v: &mut [f64]) {
    let sum: f64 = v.iter().sum();
    let flip = if sum != 0.0 {
        sum < 0.0
    } else {
        v.iter().find(|&&x| x != 0.0).is_some_and(|&x| x < 0.0)
    };
    if flip {
        scale(v, -1.0);
    }
}

fn small_mat_vec(m: &[Vec<f64>]) -> impl Fn(&[f64], &mut [f64]) + '_ {
    move |x, out| {
        for (o, row) in out.iter_mut().zip(m) {
            *o = dot(row, x);
        }
    }
}

/// Top eigenpair of the reduced symmetric matrix, in reduced coordinates.
fn reduced_top(b: &BlockStructure, tol: f64, max_iter: usize) -> Result<(f64, Vec<f64>, f64, usize)> {
    let s = b.symmetrized();
    let shift = SHIFT_FRACTION * b.reduced_matrix().iter().map(|r| r.iter().sum::<f64>()).fold(0.0, f64::max);
    let start = b.sizes().iter().map(|&k| (k as f64).sqrt()).collect();
    power_iterate(small_mat_vec(&s), start, shift, tol, max_iter)
}

fn expand_reduced(b: &BlockStructure, y: &[f64]) -> Vec<f64> {
    let per_group: Vec<f64> = y
        .iter()
        .zip(b.sizes())
        .map(|(v, &k)| v / (k as f64).sqrt())
        .collect();
    b.expand(&per_group)
}

/// Largest eigenvalue and its unit eigenvector.
pub fn top_eigenpair<N: Network + ?Sized>(matrix: &N, tol: f64, max_iter: usize) -> Result<EigenPair> {
    if matrix.entry_sum() <= 0.0 {
        return Err(Error::AllZero);
    }
    let (value, mut vector, residual, iterations) = match matrix.blocks() {
        Some(b) => {
            let (value, y, residual, it) = reduced_top(b, tol, max_iter)?;
            (value, expand_reduced(b, &y), residual, it)
        }
        None => {
            let n = matrix.size();
            let shift = SHIFT_FRACTION * matrix.max_row_sum();
            power_iterate(|x, out| matrix.mat_vec(x, out), vec![1.0; n], shift, tol, max_iter)?
        }
    };
    orient(&mut vector);
    Ok(EigenPair {
        value,
        vector,
        residual,
        iterations,
    })
}

pub fn eigenvector_centrality<N: Network + ?Sized>(matrix: &N, tol: f64, max_iter: usize) -> Result<Vec<f64>> {
    Ok(top_eigenpair(matrix, tol, max_iter)?.vector)
}

/// Modulus of the second eigenvalue, by power iteration on the square of
/// the deflated matrix `B = A - lambda1 v v^T`.
pub fn second_eigenvalue<N: Network + ?Sized>(matrix: &N, tol: f64, max_iter: usize) -> Result<f64> {
    match matrix.blocks() {
        Some(b) => {
            let (lambda1, y, _, _) = reduced_top(b, tol, max_iter)?;
            let s = b.symmetrized();
            // the remaining n - m eigenvalues of the full matrix are 0
            deflated_modulus(small_mat_vec(&s), lambda1, &y, tol, max_iter)
        }
        None => {
            let top = top_eigenpair(matrix, tol, max_iter)?;
            deflated_modulus(
                |x: &[f64], out: &mut [f64]| matrix.mat_vec(x, out),
                top.value,
                &top.vector,
                tol,
                max_iter,
            )
        }
    }
}

fn deflated_modulus<F>(apply: F, lambda1: f64, v: &[f64], tol: f64, max_iter: usize) -> Result<f64>
where
    F: Fn(&[f64], &mut [f64]),
{
    let n = v.len();
    let deflated = |x: &[f64], out: &mut [f64]| {
        apply(x, out);
        let c = lambda1 * dot(v, x);
        for (o, vi) in out.iter_mut().zip(v) {
            *o -= c * vi;
        }
    };
    let mut tmp = vec![0.0; n];
    let squared = |x: &[f64], out: &mut [f64]| {
        let mut bx = vec![0.0; x.len()];
        deflated(x, &mut bx);
        deflated(&bx, out);
    };
    // B^2 is positive semidefinite, so no shift is needed; its residual
    // bound scales with its eigenvalues
    let scale1 = lambda1.abs().max(1.0);
    let squared_tol = tol * scale1 * scale1;
    let mut last = Error::NonConvergence {
        iterations: 0,
        residual: f64::INFINITY,
    };
    for attempt in 0..=DEFLATION_RESTARTS {
        let mut rng = stream_rng(DEFLATION_SEED, attempt as u64);
        let mut x: Vec<f64> = (0..n).map(|_| rng.random::<f64>() - 0.5).collect();
        let c = dot(v, &x);
        for (xi, vi) in x.iter_mut().zip(v) {
            *xi -= c * vi;
        }
        if norm(&x) == 0.0 {
            return Ok(0.0);
        }
        let len = norm(&x);
        scale(&mut x, 1.0 / len);
        deflated(&x, &mut tmp);
        if norm(&tmp) <= tol * scale1 * 1e-3 {
            return Ok(0.0);
        }
        match power_iterate(squared, x, 0.0, squared_tol, max_iter) {
            Ok((mu, _, _, _)) => return Ok(mu.max(0.0).sqrt()),
            Err(e) => last = e,
        }
    }
    Err(last)
}

/// Truncation order for the Katz series: the smallest `K` with
/// `x^(K+1) / (1 - x) * sqrt(n) < tol`, where `x = phi * lambda1`.
pub fn katz_terms(x: f64, n: usize, tol: f64) -> usize {
    if x <= 0.0 {
        return 0;
    }
    let root_n = (n as f64).sqrt();
    // x^(K+1) < tol (1 - x) / sqrt(n)
    let target = (tol * (1.0 - x) / root_n).ln();
    let k = (target / x.ln() - 1.0).max(0.0).floor() as usize;
    (k.saturating_sub(2)..k + 4)
        .find(|&k| x.powi(k as i32 + 1) / (1.0 - x) * root_n < tol)
        .unwrap_or(k + 4)
}

fn check_phi(phi: f64, lambda1: f64, margin: f64) -> Result<()> {
    if !(phi >= 0.0 && phi.is_finite()) {
        return Err(Error::invalid("phi", format!("{phi} must be finite and nonnegative")));
    }
    if phi * lambda1 > 1.0 - margin {
        return Err(Error::infeasible(phi, lambda1));
    }
    Ok(())
}

/// Katz-Bonacich centrality `c = sum_k phi^k A^k 1`.
pub fn katz_bonacich<N: Network + ?Sized>(matrix: &N, phi: f64, tol: f64, max_terms: usize) -> Result<KatzResult> {
    let opts = SolverOptions::default();
    let lambda1 = top_eigenpair(matrix, opts.tol, opts.max_iter)?.value;
    katz_bonacich_with_lambda1(matrix, phi, lambda1, &SolverOptions { katz_tol: tol, max_terms, ..opts })
}

/// As [`katz_bonacich`], with the top eigenvalue already known.
pub fn katz_bonacich_with_lambda1<N: Network + ?Sized>(
    matrix: &N,
    phi: f64,
    lambda1: f64,
    opts: &SolverOptions,
) -> Result<KatzResult> {
    check_phi(phi, lambda1, opts.margin)?;
    let n = matrix.size();
    let terms = katz_terms(phi * lambda1, n, opts.katz_tol);
    if terms > opts.max_terms {
        return Err(Error::NonConvergence {
            iterations: opts.max_terms,
            residual: (phi * lambda1).powi(opts.max_terms as i32 + 1) / (1.0 - phi * lambda1) * (n as f64).sqrt(),
        });
    }
    if let Some(b) = matrix.blocks() {
        let p = b.reduced_matrix();
        let apply = small_mat_vec(&p);
        let c = neumann(&apply, b.groups(), phi, terms);
        let mut pc = vec![0.0; c.len()];
        apply(&c, &mut pc);
        let r: Vec<f64> = c.iter().zip(&pc).map(|(ci, pci)| ci - phi * pci - 1.0).collect();
        return Ok(KatzResult {
            phi,
            scores: b.expand(&c),
            residual: b.expanded_norm(&r),
            terms,
        });
    }
    let apply = |x: &[f64], out: &mut [f64]| matrix.mat_vec(x, out);
    let c = neumann(&apply, n, phi, terms);
    let mut ac = vec![0.0; n];
    matrix.mat_vec(&c, &mut ac);
    let residual = c
        .iter()
        .zip(&ac)
        .map(|(ci, a)| (ci - phi * a - 1.0).powi(2))
        .sum::<f64>()
        .sqrt();
    Ok(KatzResult {
        phi,
        scores: c,
        residual,
        terms,
    })
}

fn neumann<F: Fn(&[f64], &mut [f64])>(apply: &F, dim: usize, phi: f64, terms: usize) -> Vec<f64> {
    let mut term = vec![1.0; dim];
    let mut next = vec![0.0; dim];
    let mut c = term.clone();
    for _ in 0..terms {
        apply(&term, &mut next);
        for ((t, nx), ci) in term.iter_mut().zip(&next).zip(c.iter_mut()) {
            *t = phi * nx;
            *ci += *t;
        }
    }
    c
}

/// Representative-agent matrix `P[g][h] = size_h * p_gh`.
pub fn reduced_block_matrix(model: &BlockModel, n: usize) -> Result<Vec<Vec<f64>>> {
    Ok(model.blocks(n)?.reduced_matrix())
}

/// Largest eigenvalue of a block-constant matrix, from a dense eigensolve of
/// the reduced symmetric matrix.
pub fn block_lambda1(b: &BlockStructure) -> f64 {
    let m = b.groups();
    let s = b.symmetrized();
    let eig = SymmetricEigen::new(DMatrix::from_fn(m, m, |g, h| s[g][h]));
    eig.eigenvalues.iter().copied().fold(f64::NEG_INFINITY, f64::max)
}

/// Per-group centrality of a block model at population `n`: the agent-level
/// value shared by every member of each group.
///
/// Without `phi` this is the unit-norm eigenvector centrality; with `phi` it
/// is the Katz-Bonacich centrality, solved exactly from
/// `(I - phi P) c = 1`.
pub fn block_centrality(model: &BlockModel, n: usize, phi: Option<f64>) -> Result<Vec<f64>> {
    block_centrality_of(&model.blocks(n)?, phi)
}

pub(crate) fn block_centrality_of(b: &BlockStructure, phi: Option<f64>) -> Result<Vec<f64>> {
    let opts = SolverOptions::default();
    match phi {
        None => {
            let m = b.groups();
            let s = b.symmetrized();
            let eig = SymmetricEigen::new(DMatrix::from_fn(m, m, |g, h| s[g][h]));
            let top = eig.eigenvalues.imax();
            let mut y: Vec<f64> = eig.eigenvectors.column(top).iter().copied().collect();
            if y.iter().sum::<f64>() < 0.0 {
                scale(&mut y, -1.0);
            }
            let per_group: Vec<f64> = y
                .iter()
                .zip(b.sizes())
                .map(|(v, &k)| v / (k as f64).sqrt())
                .collect();
            let norm = b.expanded_norm(&per_group);
            Ok(per_group.into_iter().map(|v| v / norm).collect())
        }
        Some(phi) => {
            let lambda1 = block_lambda1(b);
            check_phi(phi, lambda1, opts.margin)?;
            katz_solve(b, phi)
        }
    }
}

/// `(I - phi P)^{-1}` for the reduced matrix.
pub(crate) fn resolvent(b: &BlockStructure, phi: f64) -> Result<DMatrix<f64>> {
    let m = b.groups();
    let p = b.reduced_matrix();
    let a = DMatrix::from_fn(m, m, |g, h| f64::from(u8::from(g == h)) - phi * p[g][h]);
    a.try_inverse()
        .ok_or_else(|| Error::invalid("phi", "I - phi P is singular"))
}

fn katz_solve(b: &BlockStructure, phi: f64) -> Result<Vec<f64>> {
    let m = b.groups();
    let p = b.reduced_matrix();
    let a = DMatrix::from_fn(m, m, |g, h| f64::from(u8::from(g == h)) - phi * p[g][h]);
    let c = a
        .lu()
        .solve(&DVector::from_element(m, 1.0))
        .ok_or_else(|| Error::invalid("phi", "I - phi P is singular"))?;
    Ok(c.iter().copied().collect())
}

/// Spectral summary of an expected matrix.
pub fn diagnostics(matrix: &ExpectedMatrix, opts: &SolverOptions) -> Result<SpectralDiagnostics> {
    let n = matrix.n();
    if n < 2 {
        return Err(Error::invalid("n", "diagnostics need at least 2 agents"));
    }
    let lambda1 = top_eigenpair(matrix, opts.tol, opts.max_iter)?.value;
    let lambda2 = second_eigenvalue(matrix, opts.tol, opts.max_iter)?;
    let delta = matrix.max_row_sum();
    Ok(SpectralDiagnostics {
        lambda1,
        lambda2,
        gap_ratio: 1.0 - lambda2 / lambda1,
        max_expected_degree: delta,
        large_eig_ratio: lambda1 / (delta * (n as f64).ln()).sqrt(),
        lambda1_squared: lambda1 * lambda1,
        min_entry_times_sum: matrix.min_entry() * matrix.entry_sum(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netmodel::{build_counterexample_split, build_expected_sbm, Edge, RealizedNetwork};

    const TOL: f64 = 1e-10;
    const MAX: usize = 100_000;

    fn cycle(n: usize) -> RealizedNetwork {
        let edges = (0..n)
            .map(|i| {
                let j = (i + 1) % n;
                Edge { i: i.min(j), j: i.max(j), weight: 1.0 }
            })
            .collect();
        RealizedNetwork::from_edges(n, edges, 0).unwrap()
    }

    #[test]
    fn constant_matrix() {
        let n = 50;
        let a = ExpectedMatrix::from_dense(n, vec![0.3; n * n]).unwrap();
        let e = top_eigenpair(&a, TOL, MAX).unwrap();
        assert!((e.value - 15.0).abs() < 1e-10);
        let want = 1.0 / (n as f64).sqrt();
        assert!(e.vector.iter().all(|&v| (v - want).abs() < 1e-12));
        assert!(second_eigenvalue(&a, TOL, MAX).unwrap() < 1e-8);
    }

    #[test]
    fn cycle_graph() {
        let e = top_eigenpair(&cycle(11), TOL, MAX).unwrap();
        assert!((e.value - 2.0).abs() < 1e-10);
        assert!(e.vector.iter().all(|&v| (v - 1.0 / 11f64.sqrt()).abs() < 1e-10));
    }

    #[test]
    fn bipartite_pair() {
        let a = ExpectedMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let e = top_eigenpair(&a, TOL, MAX).unwrap();
        assert!((e.value - 1.0).abs() < 1e-12);
        assert!((e.vector[0] - 0.5f64.sqrt()).abs() < 1e-12);
        assert!((second_eigenvalue(&a, TOL, MAX).unwrap() - 1.0).abs() < 1e-8);
    }

    #[test]
    fn even_cycle_needs_the_shift() {
        // spectrum contains -2 as well as 2
        let e = top_eigenpair(&cycle(10), TOL, MAX).unwrap();
        assert!((e.value - 2.0).abs() < 1e-10);
    }

    #[test]
    fn two_group_second_eigenvalue() {
        let m = BlockModel::homophily(vec![0.5, 0.5], 0.5, 0.1).unwrap();
        let a = build_expected_sbm(&m, 100).unwrap();
        // reduced [[25, 5], [5, 25]]
        assert!((second_eigenvalue(&a, TOL, MAX).unwrap() - 20.0).abs() < 1e-8);
        let dense = a.clone().without_blocks();
        assert!((second_eigenvalue(&dense, TOL, MAX).unwrap() - 20.0).abs() < 1e-6);
        let d = diagnostics(&a, &SolverOptions::default()).unwrap();
        assert!((d.gap_ratio - (1.0 - 0.4 / 0.6)).abs() < 1e-10);
    }

    #[test]
    fn split_counterexample_has_no_gap() {
        let a = build_counterexample_split(400).unwrap();
        let d = diagnostics(&a, &SolverOptions::default()).unwrap();
        assert!(d.gap_ratio < 1e-3, "gap {}", d.gap_ratio);
    }

    #[test]
    fn er_diagnostics() {
        let a = build_expected_sbm(&BlockModel::erdos_renyi(0.25).unwrap(), 500).unwrap();
        let d = diagnostics(&a, &SolverOptions::default()).unwrap();
        assert!((d.lambda1 - 125.0).abs() < 1e-9);
        assert!((d.max_expected_degree - 125.0).abs() < 1e-9);
        let want = 125.0 / (125.0 * 500f64.ln()).sqrt();
        assert!((d.large_eig_ratio - want).abs() < 1e-10);
        assert!(d.lambda1_lower_bound_holds());
    }

    #[test]
    fn katz_on_er_is_two_at_half() {
        let a = build_expected_sbm(&BlockModel::erdos_renyi(0.25).unwrap(), 200).unwrap();
        let k = katz_bonacich(&a, 0.5 / 50.0, 1e-10, 10_000_000).unwrap();
        assert!(k.scores.iter().all(|&c| (c - 2.0).abs() < 1e-10));
        let z = katz_bonacich(&a, 0.0, 1e-10, 10).unwrap();
        assert!(z.scores.iter().all(|&c| c == 1.0));
    }

    #[test]
    fn katz_on_path() {
        let edges = vec![Edge { i: 0, j: 1, weight: 1.0 }, Edge { i: 1, j: 2, weight: 1.0 }];
        let g = RealizedNetwork::from_edges(3, edges, 0).unwrap();
        let k = katz_bonacich(&g, 0.1, 1e-12, 1000).unwrap();
        // (I - 0.1 A) c = 1 solved by hand: c = (1.1, 1.2, 1.1) / 0.98
        let want = [1.1 / 0.98, 1.2 / 0.98, 1.1 / 0.98];
        for (c, w) in k.scores.iter().zip(want) {
            assert!((c - w).abs() < 1e-11);
        }
        assert!(k.residual <= 1e-12);
    }

    #[test]
    fn infeasible_phi_is_rejected() {
        let a = build_expected_sbm(&BlockModel::erdos_renyi(0.25).unwrap(), 100).unwrap();
        let err = katz_bonacich(&a, 0.05, 1e-10, 1000).unwrap_err();
        assert!(err.to_string().contains("phi infeasible"));
        assert!(err.to_string().contains("25"));
        assert!(katz_bonacich(&a, -0.01, 1e-10, 1000).is_err());
    }

    #[test]
    fn terms_meet_the_bound() {
        for &(x, n) in &[(0.5, 500usize), (0.99, 300), (0.999, 30), (1e-3, 10)] {
            let k = katz_terms(x, n, 1e-10);
            let bound = |k: usize| x.powi(k as i32 + 1) / (1.0 - x) * (n as f64).sqrt();
            assert!(bound(k) < 1e-10);
            assert!(k == 0 || bound(k - 1) >= 1e-10);
        }
    }

    #[test]
    fn reduced_matrix_examples() {
        let m = BlockModel::erdos_renyi(0.3).unwrap();
        assert_eq!(reduced_block_matrix(&m, 10).unwrap(), vec![vec![3.0]]);
        let m = BlockModel::homophily(vec![0.5, 0.5], 0.5, 0.1).unwrap();
        assert_eq!(reduced_block_matrix(&m, 100).unwrap(), vec![vec![25.0, 5.0], vec![5.0, 25.0]]);
    }

    #[test]
    fn larger_group_is_more_central() {
        let m = BlockModel::homophily(vec![0.65, 0.35], 0.5, 0.1).unwrap();
        let v = block_centrality(&m, 1000, None).unwrap();
        assert!(v[0] > v[1]);
        let lambda1 = block_lambda1(&m.blocks(1000).unwrap());
        let c = block_centrality(&m, 1000, Some(0.5 / lambda1)).unwrap();
        assert!(c[0] > c[1]);
    }

    #[test]
    fn phi_rules() {
        assert_eq!(PhiRule::HalfInverseLambda1.resolve(4.0), 0.125);
        assert_eq!(PhiRule::Fixed(0.02).resolve(4.0), 0.02);
        assert_eq!(PhiRule::InverseLambda1Fraction(0.1).resolve(2.0), 0.05);
    }
}

use serde::{Deserialize, Serialize};

use super::{check_nonconvergence, converged, replicate, StudyConfig, StudyId, StudyResult};
use crate::error::Result;
use crate::netmodel::{build_counterexample_split, build_counterexample_star, sample_bernoulli, Network};
use crate::seeding::replication_seed;
use crate::spectral::{katz_bonacich_with_lambda1, top_eigenpair};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CounterexampleParams {
    pub split_n: usize,
    pub split_reps: usize,
    /// Entries below this count as zero when deciding eigenvector support.
    pub support_threshold: f64,
    pub distance_threshold: f64,
    /// Acceptance interval for each support-class frequency.
    pub class_band: [f64; 2],
    /// Required share of disconnected replications at or above the threshold.
    pub far_share: f64,
    /// Iteration cap for the near-degenerate split realizations.
    pub split_max_iter: usize,
    pub star_n_values: Vec<usize>,
    pub star_reps: usize,
    /// Katz decay at population `n` is `phi0 / sqrt(2 n)`.
    pub phi0: f64,
    /// Required ratio of the normalized Katz distance at the largest
    /// population to that at the smallest.
    pub non_decay_ratio: f64,
}

impl Default for CounterexampleParams {
    fn default() -> Self {
        CounterexampleParams {
            split_n: 400,
            split_reps: 200,
            support_threshold: 1e-8,
            distance_threshold: 0.7,
            class_band: [0.40, 0.60],
            far_share: 0.95,
            split_max_iter: 1_000_000,
            star_n_values: vec![200, 400, 800],
            star_reps: 50,
            phi0: 0.9,
            non_decay_ratio: 0.5,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Support {
    First,
    Second,
    Both,
}

/// Two counterexamples: the split family, where the realized eigenvector
/// concentrates on one half, and the star family, where the normalized
/// Katz distance does not vanish.
pub fn run_counterexample_studies(p: &CounterexampleParams, cfg: &StudyConfig) -> Result<StudyResult> {
    let opts = cfg.solver;
    let mut result = StudyResult::new(StudyId::Counterexamples, cfg.seed);

    let n = p.split_n;
    let half = n / 2;
    let exp = build_counterexample_split(n)?;
    let mean_vec = top_eigenpair(&exp, opts.tol, opts.max_iter)?.vector;
    let outcomes = replicate(p.split_reps, cfg.parallel, |rep| -> Result<(Support, bool, f64)> {
        let g = sample_bernoulli(&exp, replication_seed(cfg.seed, n, rep))?;
        let disconnected = g.edges().iter().all(|e| (e.i < half) == (e.j < half));
        let v = top_eigenpair(&g, opts.tol, p.split_max_iter)?.vector;
        let zero = |r: std::ops::Range<usize>| v[r].iter().all(|x| x.abs() < p.support_threshold);
        let support = match (zero(half..n), zero(0..half)) {
            (true, false) => Support::First,
            (false, true) => Support::Second,
            _ => Support::Both,
        };
        let d = v.iter().zip(&mean_vec).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
        Ok((support, disconnected, d))
    });
    let (split, dropped) = converged(outcomes)?;
    check_nonconvergence(&mut result, "split", dropped, p.split_reps);
    let count = split.len() as f64;
    let share = |s: Support| split.iter().filter(|r| r.0 == s).count() as f64 / count;
    let dists: Vec<f64> = split.iter().map(|r| r.2).collect();
    result.record(n, "split_distance", &dists);
    for (label, class) in [("first", Support::First), ("second", Support::Second)] {
        let f = share(class);
        result.push_rows(n, &format!("split_{label}_share"), &[f]);
        result.push_check(
            format!("split_{label}_block_share"),
            (p.class_band[0]..=p.class_band[1]).contains(&f),
            format!("{f:.3} of {} replications, band {:?}", split.len(), p.class_band),
        );
    }
    let disconnected: Vec<&(Support, bool, f64)> = split.iter().filter(|r| r.1).collect();
    let far = disconnected.iter().filter(|r| r.2 >= p.distance_threshold).count();
    let far_share = if disconnected.is_empty() { 0.0 } else { far as f64 / disconnected.len() as f64 };
    result.push_rows(n, "split_disconnected_share", &[disconnected.len() as f64 / count]);
    result.push_check(
        "split_far_share",
        !disconnected.is_empty() && far_share >= p.far_share,
        format!(
            "{far} of {} disconnected replications at distance >= {} ({:.3} of all replications both-sided)",
            disconnected.len(),
            p.distance_threshold,
            share(Support::Both)
        ),
    );

    let mut normalized = Vec::new();
    for &n in &p.star_n_values {
        let exp = build_counterexample_star(n)?;
        let phi = p.phi0 / (2.0 * n as f64).sqrt();
        let mean_lambda = top_eigenpair(&exp, opts.tol, opts.max_iter)?.value;
        let mean_katz = katz_bonacich_with_lambda1(&exp, phi, mean_lambda, &opts)?.scores;
        let outcomes = replicate(p.star_reps, cfg.parallel, |rep| -> Result<f64> {
            let g = sample_bernoulli(&exp, replication_seed(cfg.seed, n, rep))?;
            let lambda = top_eigenpair(&g, opts.tol, opts.max_iter)?.value;
            let c = katz_bonacich_with_lambda1(&g, phi, lambda, &opts)?.scores;
            let d = c.iter().zip(&mean_katz).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
            Ok(d / (g.size() as f64).sqrt())
        });
        let (values, dropped) = converged(outcomes)?;
        check_nonconvergence(&mut result, &format!("star_n{n}"), dropped, p.star_reps);
        normalized.push(result.record(n, "star_normalized_katz_distance", &values).mean);
    }
    let (first, last) = (normalized[0], normalized[normalized.len() - 1]);
    result.push_check(
        "star_non_vanishing",
        last >= p.non_decay_ratio * first,
        format!("mean normalized distance {first:.4} at the smallest n, {last:.4} at the largest"),
    );
    Ok(result)
}

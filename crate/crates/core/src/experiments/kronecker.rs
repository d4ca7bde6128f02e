use serde::{Deserialize, Serialize};

use super::{check_nonconvergence, converged, replicate, StudyConfig, StudyId, StudyResult};
use crate::error::Result;
use crate::netmodel::{
    build_expected_sbm, build_kronecker, kron_vec, sample_bernoulli, BlockModel, MulticharacteristicModel,
};
use crate::seeding::{derive_seed, replication_seed};
use crate::spectral::top_eigenpair;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KroneckerParams {
    pub layer1: BlockModel,
    pub layer2: BlockModel,
    /// Layer populations for the exact mean-field check.
    pub mean_field_sizes: [usize; 2],
    pub identity_tol: f64,
    /// Layer populations for the sampled check, smallest first.
    pub sampled_sizes: Vec<[usize; 2]>,
    pub reps: usize,
}

impl Default for KroneckerParams {
    fn default() -> Self {
        KroneckerParams {
            layer1: BlockModel::homophily(vec![0.5, 0.5], 0.7, 0.3).expect("valid layer"),
            layer2: BlockModel::homophily(vec![0.6, 0.4], 0.6, 0.4).expect("valid layer"),
            mean_field_sizes: [30, 40],
            identity_tol: 1e-8,
            sampled_sizes: vec![[20, 20], [40, 40]],
            reps: 20,
        }
    }
}

fn distance(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt()
}

/// Eigenvector of a two-layer product network against the product of the
/// layer eigenvectors: exact in mean field, and shrinking with size when
/// all three networks are sampled.
pub fn run_kronecker_study(p: &KroneckerParams, cfg: &StudyConfig) -> Result<StudyResult> {
    let opts = cfg.solver;
    let mut result = StudyResult::new(StudyId::Kronecker, cfg.seed);

    let [n1, n2] = p.mean_field_sizes;
    let a1 = build_expected_sbm(&p.layer1, n1)?;
    let a2 = build_expected_sbm(&p.layer2, n2)?;
    // the dense product, so the check does not reuse the layer structure
    let product = build_kronecker(&MulticharacteristicModel {
        layer1: a1.clone(),
        layer2: a2.clone(),
    })?
    .without_blocks();
    let v = top_eigenpair(&product, opts.tol, opts.max_iter)?.vector;
    let v1 = top_eigenpair(&a1, opts.tol, opts.max_iter)?.vector;
    let v2 = top_eigenpair(&a2, opts.tol, opts.max_iter)?.vector;
    let err = distance(&v, &kron_vec(&v1, &v2));
    result.push_rows(n1 * n2, "mean_field_identity_error", &[err]);
    result.push_check(
        "mean_field_identity",
        err <= p.identity_tol,
        format!("||v(A1 x A2) - v(A1) x v(A2)|| = {err:e} for {n1}x{n2} layers"),
    );

    let mut medians = Vec::new();
    for &[n1, n2] in &p.sampled_sizes {
        let e1 = build_expected_sbm(&p.layer1, n1)?;
        let e2 = build_expected_sbm(&p.layer2, n2)?;
        let e = build_kronecker(&MulticharacteristicModel {
            layer1: e1.clone(),
            layer2: e2.clone(),
        })?;
        let n = n1 * n2;
        let outcomes = replicate(p.reps, cfg.parallel, |rep| -> Result<f64> {
            let seed = replication_seed(cfg.seed, n, rep);
            let g1 = sample_bernoulli(&e1, derive_seed(seed, 1, 0))?;
            let g2 = sample_bernoulli(&e2, derive_seed(seed, 2, 0))?;
            let g = sample_bernoulli(&e, derive_seed(seed, 3, 0))?;
            let u1 = top_eigenpair(&g1, opts.tol, opts.max_iter)?.vector;
            let u2 = top_eigenpair(&g2, opts.tol, opts.max_iter)?.vector;
            let u = top_eigenpair(&g, opts.tol, opts.max_iter)?.vector;
            Ok(distance(&u, &kron_vec(&u1, &u2)))
        });
        let (values, dropped) = converged(outcomes)?;
        check_nonconvergence(&mut result, &format!("n{n}"), dropped, p.reps);
        medians.push(result.record(n, "sampled_distance", &values).median);
    }
    result.push_check(
        "sampled_median_decreasing",
        medians.windows(2).all(|w| w[1] < w[0]),
        format!("median distances {medians:?} over sizes {:?}", p.sampled_sizes),
    );
    Ok(result)
}

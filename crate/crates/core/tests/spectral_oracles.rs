//! Power iteration, deflation and the Katz series against dense
//! eigendecomposition and LU solves.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use proptest::prelude::*;

use netcentral::netmodel::{build_expected_sbm, BlockModel, ExpectedMatrix};
use netcentral::spectral::{
    block_centrality, diagnostics, katz_bonacich, second_eigenvalue, top_eigenpair, SolverOptions,
};

const TOL: f64 = 1e-10;
const MAX_ITER: usize = 100_000;

/// Symmetric matrix with entries in `[lo, 1)` built from the upper triangle.
fn symmetric(lo: f64) -> impl Strategy<Value = Vec<Vec<f64>>> {
    (2usize..12).prop_flat_map(move |n| {
        prop::collection::vec(lo..1.0f64, n * (n + 1) / 2).prop_map(move |upper| {
            let mut rows = vec![vec![0.0; n]; n];
            let mut k = 0;
            for i in 0..n {
                for j in i..n {
                    rows[i][j] = upper[k];
                    rows[j][i] = upper[k];
                    k += 1;
                }
            }
            rows
        })
    })
}

fn dense(rows: &[Vec<f64>]) -> DMatrix<f64> {
    let n = rows.len();
    DMatrix::from_fn(n, n, |i, j| rows[i][j])
}

/// Eigenvalues sorted by decreasing modulus with the top eigenvector.
fn oracle(rows: &[Vec<f64>]) -> (Vec<f64>, DVector<f64>) {
    let eig = SymmetricEigen::new(dense(rows));
    let mut order: Vec<usize> = (0..rows.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].abs().total_cmp(&eig.eigenvalues[a].abs()));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let mut v = eig.eigenvectors.column(order[0]).into_owned();
    if v.sum() < 0.0 {
        v = -v;
    }
    (values, v)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn top_pair_matches_dense_oracle(rows in symmetric(0.05)) {
        let m = ExpectedMatrix::from_rows(&rows).unwrap();
        let pair = top_eigenpair(&m, TOL, MAX_ITER).unwrap();
        let (values, v) = oracle(&rows);
        prop_assert!(pair.residual <= TOL);
        prop_assert!((pair.value - values[0]).abs() <= 1e-9 * values[0]);
        let norm: f64 = pair.vector.iter().map(|x| x * x).sum::<f64>().sqrt();
        prop_assert!((norm - 1.0).abs() < 1e-12);
        // positive matrices have a gap, so the vector is pinned down
        let gap = values[0] - values[1].abs();
        let err = pair.vector.iter().zip(v.iter()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        prop_assert!(err <= 1e-9 / gap.min(1.0), "err {} gap {}", err, gap);
    }

    #[test]
    fn second_eigenvalue_matches_dense_oracle(rows in symmetric(0.05)) {
        let m = ExpectedMatrix::from_rows(&rows).unwrap();
        let (values, _) = oracle(&rows);
        let l2 = second_eigenvalue(&m, TOL, MAX_ITER).unwrap();
        prop_assert!((l2 - values[1].abs()).abs() <= 1e-6 * values[0], "{} vs {:?}", l2, values);
    }

    #[test]
    fn katz_matches_lu_solve(rows in symmetric(0.0), frac in 0.05f64..0.95) {
        let m = ExpectedMatrix::from_rows(&rows).unwrap();
        let (values, _) = oracle(&rows);
        let phi = frac / values[0];
        let k = katz_bonacich(&m, phi, TOL, 10_000_000).unwrap();
        let n = rows.len();
        let system = DMatrix::identity(n, n) - dense(&rows) * phi;
        let c = system.lu().solve(&DVector::from_element(n, 1.0)).unwrap();
        let scale = c.max();
        for (a, b) in k.scores.iter().zip(c.iter()) {
            prop_assert!((a - b).abs() <= 1e-9 * scale);
        }
        prop_assert!(k.residual <= TOL);
    }

    #[test]
    fn katz_is_increasing_in_phi(rows in symmetric(0.01), lo in 0.05f64..0.5, step in 0.05f64..0.4) {
        let m = ExpectedMatrix::from_rows(&rows).unwrap();
        let lambda1 = top_eigenpair(&m, TOL, MAX_ITER).unwrap().value;
        let low = katz_bonacich(&m, lo / lambda1, TOL, 10_000_000).unwrap().scores;
        let high = katz_bonacich(&m, (lo + step) / lambda1, TOL, 10_000_000).unwrap().scores;
        for (a, b) in low.iter().zip(&high) {
            prop_assert!(b > a);
        }
    }

    #[test]
    fn lambda1_lower_bound_holds_on_positive_matrices(rows in symmetric(0.01)) {
        let m = ExpectedMatrix::from_rows(&rows).unwrap();
        let d = diagnostics(&m, &SolverOptions::default()).unwrap();
        prop_assert!(d.lambda1_lower_bound_holds(), "{:?}", d);
        prop_assert!(d.lambda2 <= d.lambda1 * (1.0 + 1e-12));
    }
}

fn three_group_models() -> Vec<BlockModel> {
    vec![
        BlockModel::homophily(vec![0.5, 0.3, 0.2], 0.5, 0.1).unwrap(),
        BlockModel::new(
            vec![0.2, 0.5, 0.3],
            vec![vec![0.9, 0.05, 0.2], vec![0.05, 0.3, 0.4], vec![0.2, 0.4, 0.1]],
        )
        .unwrap(),
    ]
}

#[test]
fn block_reduction_matches_dense_computation() {
    let n = 300;
    for model in three_group_models() {
        let e = build_expected_sbm(&model, n).unwrap();
        let dense = e.clone().without_blocks();
        let sizes = model.blocks(n).unwrap();

        let eig = top_eigenpair(&dense, TOL, MAX_ITER).unwrap();
        let reduced = sizes.expand(&block_centrality(&model, n, None).unwrap());
        for (a, b) in reduced.iter().zip(&eig.vector) {
            assert!((a - b).abs() <= 1e-10);
        }

        let phi = 0.9 / eig.value;
        let katz = katz_bonacich(&dense, phi, TOL, 10_000_000).unwrap().scores;
        let reduced = sizes.expand(&block_centrality(&model, n, Some(phi)).unwrap());
        let via_blocks = katz_bonacich(&e, phi, TOL, 10_000_000).unwrap().scores;
        let scale = katz.iter().copied().fold(0.0, f64::max);
        for ((a, b), c) in reduced.iter().zip(&katz).zip(&via_blocks) {
            assert!((a - b).abs() <= 1e-10 * scale);
            assert!((c - b).abs() <= 1e-10 * scale);
        }
    }
}

#[test]
fn block_structure_survives_group_relabeling() {
    // the same population listed in a different group order has the same scores per group
    let a = BlockModel::new(vec![0.6, 0.4], vec![vec![0.7, 0.2], vec![0.2, 0.4]]).unwrap();
    let b = BlockModel::new(vec![0.4, 0.6], vec![vec![0.4, 0.2], vec![0.2, 0.7]]).unwrap();
    let ca = block_centrality(&a, 500, Some(0.002)).unwrap();
    let cb = block_centrality(&b, 500, Some(0.002)).unwrap();
    assert!((ca[0] - cb[1]).abs() < 1e-12 * ca[0]);
    assert!((ca[1] - cb[0]).abs() < 1e-12 * ca[1]);
}

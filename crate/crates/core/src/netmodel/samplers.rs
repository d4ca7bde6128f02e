//! Samplers for realized networks.
//!
//! Row `i` of the upper triangle draws from its own ChaCha stream
//! `(seed, i)`, one uniform per pair `(i, j)`, `j > i`, in increasing `j`.
//! The dyad draws of every sampler use the same streams, so a clustered
//! model with all triangle probabilities at zero reproduces the plain
//! Bernoulli draw exactly. Triangle indicators use a disjoint stream range.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::block::{largest_remainder, validate_shares, validate_square_symmetric, BlockStructure};
use super::expected::ExpectedMatrix;
use super::realized::{Edge, RealizedNetwork};
use crate::error::{Error, Result};
use crate::seeding::{stream_rng, TRIANGLE_STREAM_BASE};

fn upper_rows<F>(n: usize, seed: u64, draw: F) -> Vec<Edge>
where
    F: Fn(usize, usize, f64) -> Option<f64> + Sync,
{
    let rows: Vec<Vec<Edge>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream_rng(seed, i as u64);
            let mut row = Vec::new();
            for j in i + 1..n {
                let u: f64 = rng.random();
                if let Some(weight) = draw(i, j, u) {
                    row.push(Edge { i, j, weight });
                }
            }
            row
        })
        .collect();
    rows.concat()
}

/// Sample an unweighted network: each pair `i < j` links independently with
/// probability `exp[i][j]`. No self-loops are drawn.
pub fn sample_bernoulli(exp: &ExpectedMatrix, seed: u64) -> Result<RealizedNetwork> {
    if let Some((i, j, value)) = exp.first_non_probability() {
        return Err(Error::NotAProbability { i, j, value });
    }
    let edges = upper_rows(exp.n(), seed, |i, j, u| (u < exp.get(i, j)).then_some(1.0));
    Ok(RealizedNetwork::build(exp.n(), edges, seed))
}

/// Block model whose edge weights are uniform on `[lower, upper]` per pair
/// of groups.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightedIntervalModel {
    shares: Vec<f64>,
    lower: Vec<Vec<f64>>,
    upper: Vec<Vec<f64>>,
}

impl WeightedIntervalModel {
    pub fn new(shares: Vec<f64>, lower: Vec<Vec<f64>>, upper: Vec<Vec<f64>>) -> Result<Self> {
        validate_shares(&shares)?;
        let m = shares.len();
        validate_square_symmetric("lower", &lower, m)?;
        validate_square_symmetric("upper", &upper, m)?;
        for g in 0..m {
            for h in 0..m {
                let (l, u) = (lower[g][h], upper[g][h]);
                if l < 0.0 {
                    return Err(Error::invalid("lower", format!("l[{g}][{h}] = {l} is negative")));
                }
                if u < l {
                    return Err(Error::invalid(
                        "upper",
                        format!("u[{g}][{h}] = {u} is below l[{g}][{h}] = {l}"),
                    ));
                }
            }
        }
        Ok(WeightedIntervalModel { shares, lower, upper })
    }

    pub fn shares(&self) -> &[f64] {
        &self.shares
    }

    /// Expected weights: interval midpoints.
    pub fn expected(&self, n: usize) -> Result<ExpectedMatrix> {
        let sizes = largest_remainder(&self.shares, n)?;
        let mid = self
            .lower
            .iter()
            .zip(&self.upper)
            .map(|(l, u)| l.iter().zip(u).map(|(a, b)| 0.5 * (a + b)).collect())
            .collect();
        Ok(ExpectedMatrix::from_blocks(BlockStructure::contiguous(sizes, mid)))
    }
}

pub fn sample_weighted_uniform(
    model: &WeightedIntervalModel,
    n: usize,
    seed: u64,
) -> Result<RealizedNetwork> {
    let sizes = largest_remainder(&model.shares, n)?;
    let blocks = BlockStructure::contiguous(sizes, model.lower.clone());
    let g = blocks.group_of();
    let edges = upper_rows(n, seed, |i, j, u| {
        let (a, b) = (g[i], g[j]);
        let (l, h) = (model.lower[a][b], model.upper[a][b]);
        let w = l + (h - l) * u;
        (w > 0.0).then_some(w)
    });
    Ok(RealizedNetwork::build(n, edges, seed))
}

/// Block model with clustering: independent dyad indicators plus triangle
/// indicators shared by the three pairs of each triplet.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusteredModel {
    shares: Vec<f64>,
    dyad_probs: Vec<Vec<f64>>,
    triangle_probs: Vec<Vec<Vec<f64>>>,
}

impl ClusteredModel {
    pub fn new(
        shares: Vec<f64>,
        dyad_probs: Vec<Vec<f64>>,
        triangle_probs: Vec<Vec<Vec<f64>>>,
    ) -> Result<Self> {
        validate_shares(&shares)?;
        let m = shares.len();
        validate_square_symmetric("dyad_probs", &dyad_probs, m)?;
        if let Some(p) = dyad_probs.iter().flatten().find(|p| !(0.0..=1.0).contains(*p)) {
            return Err(Error::invalid("dyad_probs", format!("{p} is not in [0, 1]")));
        }
        if triangle_probs.len() != m
            || triangle_probs
                .iter()
                .any(|a| a.len() != m || a.iter().any(|b| b.len() != m))
        {
            return Err(Error::invalid("triangle_probs", format!("expected an {m}x{m}x{m} array")));
        }
        for a in 0..m {
            for b in 0..m {
                for c in 0..m {
                    let t = triangle_probs[a][b][c];
                    if !(0.0..1.0).contains(&t) {
                        return Err(Error::invalid(
                            "triangle_probs",
                            format!("t[{a}][{b}][{c}] = {t} is not in [0, 1)"),
                        ));
                    }
                    let perms = [
                        triangle_probs[a][c][b],
                        triangle_probs[b][a][c],
                        triangle_probs[b][c][a],
                        triangle_probs[c][a][b],
                        triangle_probs[c][b][a],
                    ];
                    if perms.iter().any(|&x| x != t) {
                        return Err(Error::invalid(
                            "triangle_probs",
                            format!("not symmetric under permutation at ({a}, {b}, {c})"),
                        ));
                    }
                }
            }
        }
        Ok(ClusteredModel {
            shares,
            dyad_probs,
            triangle_probs,
        })
    }

    /// One group with dyad probability `p` and triangle probability `t`.
    pub fn uniform(p: f64, t: f64) -> Result<Self> {
        Self::new(vec![1.0], vec![vec![p]], vec![vec![vec![t]]])
    }

    pub fn shares(&self) -> &[f64] {
        &self.shares
    }

    /// `E[A_ij] = p_{g(i)g(j)} + sum over k != i, j of p_{g(i)g(j)g(k)}`.
    /// The diagonal carries the same block value as an off-diagonal pair of
    /// the same two groups.
    pub fn expected(&self, n: usize) -> Result<ExpectedMatrix> {
        if n < 3 {
            return Err(Error::invalid("n", "clustered networks need at least 3 agents"));
        }
        let sizes = largest_remainder(&self.shares, n)?;
        let m = sizes.len();
        let values = (0..m)
            .map(|g| {
                (0..m)
                    .map(|h| {
                        let tri: f64 = (0..m)
                            .map(|f| {
                                let shared = usize::from(f == g) + usize::from(f == h);
                                let others = sizes[f].saturating_sub(shared);
                                self.triangle_probs[g][h][f] * others as f64
                            })
                            .sum();
                        self.dyad_probs[g][h] + tri
                    })
                    .collect()
            })
            .collect();
        Ok(ExpectedMatrix::from_blocks(BlockStructure::contiguous(sizes, values)))
    }
}

pub fn sample_clustered(model: &ClusteredModel, n: usize, seed: u64) -> Result<RealizedNetwork> {
    if n < 3 {
        return Err(Error::invalid("n", "clustered networks need at least 3 agents"));
    }
    let sizes = largest_remainder(&model.shares, n)?;
    let g = BlockStructure::contiguous(sizes, Vec::new()).group_of().to_vec();

    let mut counts = vec![0u32; n * n];
    let dyads = upper_rows(n, seed, |i, j, u| {
        (u < model.dyad_probs[g[i]][g[j]]).then_some(1.0)
    });
    for e in &dyads {
        counts[e.i * n + e.j] += 1;
    }

    let any_triangles = model.triangle_probs.iter().flatten().flatten().any(|&t| t > 0.0);
    if any_triangles {
        for i in 0..n {
            for j in i + 1..n {
                let stream = TRIANGLE_STREAM_BASE + (i * n + j) as u64;
                let mut rng = stream_rng(seed, stream);
                for k in j + 1..n {
                    let t = model.triangle_probs[g[i]][g[j]][g[k]];
                    if t > 0.0 && rng.random::<f64>() < t {
                        counts[i * n + j] += 1;
                        counts[i * n + k] += 1;
                        counts[j * n + k] += 1;
                    }
                }
            }
        }
    }

    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let c = counts[i * n + j];
            if c > 0 {
                edges.push(Edge { i, j, weight: f64::from(c) });
            }
        }
    }
    Ok(RealizedNetwork::build(n, edges, seed))
}

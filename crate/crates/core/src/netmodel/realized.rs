use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::Network;
use crate::error::{Error, Result};

const PAR_ROWS: usize = 256;

/// One undirected weighted edge, stored with `i < j`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub i: usize,
    pub j: usize,
    pub weight: f64,
}

/// A sampled network: symmetric adjacency with zero diagonal, held as an
/// edge list plus a compressed sparse row copy for mat-vecs.
#[derive(Debug, Clone)]
pub struct RealizedNetwork {
    n: usize,
    edges: Vec<Edge>,
    seed: u64,
    offsets: Vec<usize>,
    neighbors: Vec<usize>,
    weights: Vec<f64>,
}

impl PartialEq for RealizedNetwork {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.seed == other.seed && self.edges == other.edges
    }
}

impl RealizedNetwork {
    pub fn from_edges(n: usize, edges: Vec<Edge>, seed: u64) -> Result<Self> {
        for e in &edges {
            if e.i >= e.j || e.j >= n {
                return Err(Error::invalid(
                    "edges",
                    format!("edge ({}, {}) needs i < j < {n}", e.i, e.j),
                ));
            }
            if !(e.weight > 0.0 && e.weight.is_finite()) {
                return Err(Error::invalid(
                    "edges",
                    format!("edge ({}, {}) has weight {}", e.i, e.j, e.weight),
                ));
            }
        }
        Ok(Self::build(n, edges, seed))
    }

    pub(crate) fn build(n: usize, edges: Vec<Edge>, seed: u64) -> Self {
        let mut degree = vec![0usize; n];
        for e in &edges {
            degree[e.i] += 1;
            degree[e.j] += 1;
        }
        let mut offsets = vec![0usize; n + 1];
        for v in 0..n {
            offsets[v + 1] = offsets[v] + degree[v];
        }
        let mut cursor = offsets[..n].to_vec();
        let mut neighbors = vec![0usize; offsets[n]];
        let mut weights = vec![0.0; offsets[n]];
        for e in &edges {
            for (a, b) in [(e.i, e.j), (e.j, e.i)] {
                neighbors[cursor[a]] = b;
                weights[cursor[a]] = e.weight;
                cursor[a] += 1;
            }
        }
        RealizedNetwork {
            n,
            edges,
            seed,
            offsets,
            neighbors,
            weights,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    /// Weighted degrees (row sums of the adjacency matrix).
    pub fn strengths(&self) -> Vec<f64> {
        (0..self.n)
            .map(|v| self.weights[self.offsets[v]..self.offsets[v + 1]].iter().sum())
            .collect()
    }

    /// Neighbours of `v` with edge weights.
    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let r = self.offsets[v]..self.offsets[v + 1];
        self.neighbors[r.clone()].iter().copied().zip(self.weights[r].iter().copied())
    }

    pub fn weight(&self, i: usize, j: usize) -> f64 {
        self.neighbors(i).find(|&(k, _)| k == j).map_or(0.0, |(_, w)| w)
    }
}

impl Network for RealizedNetwork {
    fn size(&self) -> usize {
        self.n
    }

    fn mat_vec(&self, x: &[f64], out: &mut [f64]) {
        let row = |(v, o): (usize, &mut f64)| {
            let r = self.offsets[v]..self.offsets[v + 1];
            *o = self.neighbors[r.clone()]
                .iter()
                .zip(&self.weights[r])
                .map(|(&k, &w)| w * x[k])
                .sum();
        };
        if self.n >= PAR_ROWS {
            out.par_iter_mut().enumerate().for_each(row);
        } else {
            out.iter_mut().enumerate().for_each(row);
        }
    }

    fn max_row_sum(&self) -> f64 {
        self.strengths().into_iter().fold(0.0, f64::max)
    }

    fn min_entry(&self) -> f64 {
        // the diagonal is zero
        0.0
    }

    fn entry_sum(&self) -> f64 {
        2.0 * self.edges.iter().map(|e| e.weight).sum::<f64>()
    }
}

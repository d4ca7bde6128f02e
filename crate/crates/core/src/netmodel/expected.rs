use rayon::prelude::*;

use super::block::{BlockModel, BlockStructure};
use super::Network;
use crate::error::{Error, Result};

const PAR_ROWS: usize = 256;

/// Dense symmetric matrix of link probabilities or expected edge weights.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpectedMatrix {
    n: usize,
    entries: Vec<f64>,
    blocks: Option<BlockStructure>,
}

impl ExpectedMatrix {
    /// Build from row-major entries. The matrix must be symmetric with
    /// nonnegative finite entries.
    pub fn from_dense(n: usize, entries: Vec<f64>) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::invalid(
                "entries",
                format!("expected {} entries, got {}", n * n, entries.len()),
            ));
        }
        for i in 0..n {
            for j in 0..=i {
                let a = entries[i * n + j];
                if !(a >= 0.0 && a.is_finite()) {
                    return Err(Error::invalid(
                        "entries",
                        format!("entry ({i}, {j}) = {a} must be finite and nonnegative"),
                    ));
                }
                if a != entries[j * n + i] {
                    return Err(Error::invalid(
                        "entries",
                        format!("not symmetric at ({i}, {j})"),
                    ));
                }
            }
        }
        Ok(ExpectedMatrix {
            n,
            entries,
            blocks: None,
        })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::invalid("entries", "rows must form a square matrix"));
        }
        Self::from_dense(n, rows.concat())
    }

    /// Expand a block structure to its dense matrix.
    pub(crate) fn from_blocks(blocks: BlockStructure) -> Self {
        let n = blocks.n();
        let g = blocks.group_of();
        let v = blocks.values();
        let mut entries = vec![0.0; n * n];
        for (i, row) in entries.chunks_mut(n).enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                *e = v[g[i]][g[j]];
            }
        }
        ExpectedMatrix {
            n,
            entries,
            blocks: Some(blocks),
        }
    }

    pub(crate) fn from_parts_unchecked(n: usize, entries: Vec<f64>) -> Self {
        ExpectedMatrix {
            n,
            entries,
            blocks: None,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn group_of(&self) -> Option<&[usize]> {
        self.blocks.as_ref().map(|b| b.group_of())
    }

    pub fn block_structure(&self) -> Option<&BlockStructure> {
        self.blocks.as_ref()
    }

    /// Drop the group structure so computations run on the dense entries.
    pub fn without_blocks(mut self) -> Self {
        self.blocks = None;
        self
    }

    /// First off-diagonal or diagonal entry above 1, if any.
    pub fn first_non_probability(&self) -> Option<(usize, usize, f64)> {
        self.entries
            .iter()
            .position(|&a| a > 1.0)
            .map(|k| (k / self.n, k % self.n, self.entries[k]))
    }

    pub fn row_sums(&self) -> Vec<f64> {
        self.entries.chunks(self.n).map(|r| r.iter().sum()).collect()
    }
}

impl Network for ExpectedMatrix {
    fn size(&self) -> usize {
        self.n
    }

    fn mat_vec(&self, x: &[f64], out: &mut [f64]) {
        let n = self.n;
        let row_dot = |(i, o): (usize, &mut f64)| {
            *o = self.entries[i * n..(i + 1) * n]
                .iter()
                .zip(x)
                .map(|(a, b)| a * b)
                .sum();
        };
        if n >= PAR_ROWS {
            out.par_iter_mut().enumerate().for_each(row_dot);
        } else {
            out.iter_mut().enumerate().for_each(row_dot);
        }
    }

    fn max_row_sum(&self) -> f64 {
        self.row_sums().into_iter().fold(0.0, f64::max)
    }

    fn min_entry(&self) -> f64 {
        self.entries.iter().copied().fold(f64::INFINITY, f64::min)
    }

    fn entry_sum(&self) -> f64 {
        self.entries.iter().sum()
    }

    fn blocks(&self) -> Option<&BlockStructure> {
        self.blocks.as_ref()
    }
}

/// Expected matrix of a stochastic block model at population `n`.
///
/// Agents are numbered group by group. Every entry, the diagonal included,
/// equals the link probability of the two groups involved.
pub fn build_expected_sbm(model: &BlockModel, n: usize) -> Result<ExpectedMatrix> {
    Ok(ExpectedMatrix::from_blocks(model.blocks(n)?))
}

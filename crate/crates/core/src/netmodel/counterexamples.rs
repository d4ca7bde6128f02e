//! Expected matrices for the two families where mean-field centrality fails.

use super::block::BlockStructure;
use super::expected::ExpectedMatrix;
use crate::error::{Error, Result};

/// Two dense halves joined by links of probability `n^{-3}`.
pub fn build_counterexample_split(n: usize) -> Result<ExpectedMatrix> {
    if n < 4 || !n.is_multiple_of(2) {
        return Err(Error::invalid("n", format!("{n} must be even and at least 4")));
    }
    let cross = (n as f64).powi(-3);
    let blocks = BlockStructure::contiguous(vec![n / 2, n / 2], vec![vec![0.5, cross], vec![cross, 0.5]]);
    Ok(ExpectedMatrix::from_blocks(blocks))
}

/// Agent 0 links to everyone with probability 1/2; all other pairs,
/// diagonal included, link with probability `ln n / n`.
pub fn build_counterexample_star(n: usize) -> Result<ExpectedMatrix> {
    if n < 3 {
        return Err(Error::invalid("n", format!("{n} must be at least 3")));
    }
    let q = (n as f64).ln() / n as f64;
    let blocks = BlockStructure::contiguous(vec![1, n - 1], vec![vec![0.5, 0.5], vec![0.5, q]]);
    Ok(ExpectedMatrix::from_blocks(blocks))
}

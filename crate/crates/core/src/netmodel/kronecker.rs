use super::block::BlockStructure;
use super::expected::ExpectedMatrix;
use crate::error::Result;

/// Two characteristic layers; agents are pairs `(i1, i2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MulticharacteristicModel {
    pub layer1: ExpectedMatrix,
    pub layer2: ExpectedMatrix,
}

/// Kronecker product of the two layers, agent `(i1, i2)` at index
/// `i1 * n2 + i2`.
///
/// When both layers carry a group structure the product does too, with
/// group `(g1, g2)` at index `g1 * m2 + g2`. Entries may exceed 1 only if the
/// layers do; that is caught when sampling.
pub fn build_kronecker(model: &MulticharacteristicModel) -> Result<ExpectedMatrix> {
    let (a, b) = (&model.layer1, &model.layer2);
    if let (Some(ba), Some(bb)) = (a.block_structure(), b.block_structure()) {
        return Ok(ExpectedMatrix::from_blocks(kronecker_blocks(ba, bb)));
    }
    let (n1, n2) = (a.n(), b.n());
    let n = n1 * n2;
    let mut entries = vec![0.0; n * n];
    for (r, row) in entries.chunks_mut(n).enumerate() {
        let (i1, i2) = (r / n2, r % n2);
        for j1 in 0..n1 {
            let x = a.get(i1, j1);
            for (e, &y) in row[j1 * n2..(j1 + 1) * n2].iter_mut().zip(b.row(i2)) {
                *e = x * y;
            }
        }
    }
    Ok(ExpectedMatrix::from_parts_unchecked(n, entries))
}

fn kronecker_blocks(a: &BlockStructure, b: &BlockStructure) -> BlockStructure {
    let (m1, m2) = (a.groups(), b.groups());
    let sizes = (0..m1 * m2)
        .map(|g| a.sizes()[g / m2] * b.sizes()[g % m2])
        .collect();
    let values = (0..m1 * m2)
        .map(|g| {
            (0..m1 * m2)
                .map(|h| a.values()[g / m2][h / m2] * b.values()[g % m2][h % m2])
                .collect()
        })
        .collect();
    let group_of = a
        .group_of()
        .iter()
        .flat_map(|&g1| b.group_of().iter().map(move |&g2| g1 * m2 + g2))
        .collect();
    BlockStructure::with_assignment(sizes, values, group_of)
}

/// Kronecker product of two plain vectors, layer-major.
pub fn kron_vec(x: &[f64], y: &[f64]) -> Vec<f64> {
    x.iter().flat_map(|&a| y.iter().map(move |&b| a * b)).collect()
}

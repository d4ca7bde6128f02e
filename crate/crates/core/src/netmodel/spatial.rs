use serde::{Deserialize, Serialize};

use super::expected::ExpectedMatrix;
use crate::error::{Error, Result};

/// Agents on the integer grid `{0..=k}²`, linked with weight `d^{-rho}` at
/// Euclidean distance `d` and weight 1 to themselves.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpatialGridModel {
    pub k: usize,
    pub rho: f64,
}

impl SpatialGridModel {
    pub fn new(k: usize, rho: f64) -> Result<Self> {
        if k < 1 {
            return Err(Error::invalid("k", "the grid needs k >= 1"));
        }
        if !(rho >= 0.0 && rho.is_finite()) {
            return Err(Error::invalid("rho", format!("{rho} must be finite and nonnegative")));
        }
        Ok(SpatialGridModel { k, rho })
    }

    pub fn side(&self) -> usize {
        self.k + 1
    }

    pub fn n(&self) -> usize {
        self.side() * self.side()
    }

    /// Row-major agent index of grid point `(x, y)`.
    pub fn index(&self, x: usize, y: usize) -> usize {
        x * self.side() + y
    }
}

pub fn build_spatial_grid(model: &SpatialGridModel) -> Result<ExpectedMatrix> {
    let model = SpatialGridModel::new(model.k, model.rho)?;
    let side = model.side();
    let n = model.n();
    // weights depend only on the offset (dx, dy)
    let table: Vec<f64> = (0..side * side)
        .map(|o| {
            let (dx, dy) = ((o / side) as f64, (o % side) as f64);
            if o == 0 {
                1.0
            } else {
                (dx * dx + dy * dy).powf(-0.5 * model.rho)
            }
        })
        .collect();
    let mut entries = vec![0.0; n * n];
    for (a, row) in entries.chunks_mut(n).enumerate() {
        let (xa, ya) = (a / side, a % side);
        for (b, e) in row.iter_mut().enumerate() {
            let (xb, yb) = (b / side, b % side);
            *e = table[xa.abs_diff(xb) * side + ya.abs_diff(yb)];
        }
    }
    Ok(ExpectedMatrix::from_parts_unchecked(n, entries))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_square() {
        let a = build_spatial_grid(&SpatialGridModel::new(1, 1.0).unwrap()).unwrap();
        assert_eq!(a.n(), 4);
        assert_eq!(a.get(0, 0), 1.0);
        assert_eq!(a.get(0, 1), 1.0);
        assert_eq!(a.get(0, 2), 1.0);
        assert!((a.get(0, 3) - 0.5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn opposite_corners_at_rho_two() {
        let m = SpatialGridModel::new(2, 2.0).unwrap();
        let a = build_spatial_grid(&m).unwrap();
        assert!((a.get(m.index(0, 0), m.index(2, 2)) - 0.125).abs() < 1e-15);
    }

    #[test]
    fn vanishing_rho_flattens_weights() {
        let a = build_spatial_grid(&SpatialGridModel::new(20, 1e-9).unwrap()).unwrap();
        assert!(a.entries().iter().all(|&x| (x - 1.0).abs() < 1e-8));
    }

    #[test]
    fn symmetric_and_validated() {
        let a = build_spatial_grid(&SpatialGridModel { k: 3, rho: 0.7 }).unwrap();
        let n = a.n();
        assert!((0..n).all(|i| (0..n).all(|j| a.get(i, j) == a.get(j, i))));
        assert!(build_spatial_grid(&SpatialGridModel { k: 0, rho: 1.0 }).is_err());
        assert!(SpatialGridModel::new(2, -1.0).is_err());
    }
}

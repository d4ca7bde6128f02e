use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute tolerance on cumulative shares when comparing curves.
pub const SHARE_TOL: f64 = 1e-12;

/// Cumulative shares of the poorest `k` agents, `k = 1..=n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LorenzCurve {
    pub points: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Dominance {
    XDominates,
    YDominates,
    Equal,
    Incomparable,
}

pub fn lorenz_curve(x: &[f64]) -> Result<LorenzCurve> {
    if let Some(v) = x.iter().find(|v| !(**v >= 0.0 && v.is_finite())) {
        return Err(Error::invalid("x", format!("{v} is not a finite nonnegative value")));
    }
    let mut sorted = x.to_vec();
    sorted.sort_by(f64::total_cmp);
    let total: f64 = sorted.iter().sum();
    if total <= 0.0 {
        return Err(Error::AllZero);
    }
    let mut acc = 0.0;
    let points = sorted
        .iter()
        .map(|v| {
            acc += v;
            acc / total
        })
        .collect();
    Ok(LorenzCurve { points })
}

/// Compare two distributions by Lorenz dominance: `XDominates` when every
/// bottom share of `x` is at least that of `y` and one is strictly larger.
pub fn lorenz_compare(x: &[f64], y: &[f64]) -> Result<Dominance> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    let (lx, ly) = (lorenz_curve(x)?, lorenz_curve(y)?);
    Ok(compare_curves(&lx, &ly))
}

pub fn compare_curves(x: &LorenzCurve, y: &LorenzCurve) -> Dominance {
    let mut x_above = false;
    let mut y_above = false;
    for (a, b) in x.points.iter().zip(&y.points) {
        if a - b > SHARE_TOL {
            x_above = true;
        } else if b - a > SHARE_TOL {
            y_above = true;
        }
    }
    match (x_above, y_above) {
        (false, false) => Dominance::Equal,
        (true, false) => Dominance::XDominates,
        (false, true) => Dominance::YDominates,
        (true, true) => Dominance::Incomparable,
    }
}

/// Gini coefficient `1 - (2/n) sum_k L(k) + 1/n`.
pub fn gini(x: &[f64]) -> Result<f64> {
    let curve = lorenz_curve(x)?;
    let n = curve.points.len() as f64;
    Ok(1.0 - 2.0 / n * curve.points.iter().sum::<f64>() + 1.0 / n)
}

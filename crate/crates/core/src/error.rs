use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A model or argument violated one of its invariants. `field` names the
    /// offending parameter so config diagnostics can point at it.
    #[error("invalid {field}: {reason}")]
    Invalid { field: String, reason: String },

    #[error("power iteration did not converge after {iterations} iterations (residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("phi infeasible: phi * lambda1 = {product} exceeds 1 - margin (phi = {phi}, lambda1 = {lambda1})")]
    InfeasiblePhi { phi: f64, lambda1: f64, product: f64 },

    #[error("link probability p[{i}][{j}] is zero")]
    ZeroProbability { i: usize, j: usize },

    #[error("entry ({i}, {j}) = {value} is not a probability")]
    NotAProbability { i: usize, j: usize, value: f64 },

    #[error("distribution sums to zero")]
    AllZero,

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("derivative routes disagree: max relative error {agreement:e}")]
    DerivativeDisagreement { agreement: f64 },

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Invalid {
            field: field.into(),
            reason: reason.into(),
        }
    }

    pub(crate) fn infeasible(phi: f64, lambda1: f64) -> Self {
        Error::InfeasiblePhi {
            phi,
            lambda1,
            product: phi * lambda1,
        }
    }
}

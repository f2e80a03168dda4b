//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A scalar argument is outside its mathematical domain.
    #[error("invalid argument `{name}`: {reason}")]
    InvalidArgument { name: &'static str, reason: String },

    /// Domain construction failed (degenerate radius, non-simple polygon, ...).
    #[error("invalid domain: {0}")]
    InvalidDomain(String),

    /// A point lies outside the region an operation requires.
    #[error("point ({x}, {y}) {reason}")]
    PointOutside { x: f64, y: f64, reason: String },

    /// Evaluation at a kernel singularity.
    #[error("kernel singularity: {0}")]
    Singularity(String),

    /// Whitney decomposition could not cover the requested point.
    #[error("point ({x}, {y}) not covered by the Whitney decomposition at depth {depth}")]
    Uncovered { x: f64, y: f64, depth: u32 },

    /// A sampler exceeded its iteration guard.
    #[error("sampler did not terminate within {limit} steps")]
    NonTermination { limit: usize },

    /// The spectral problem is not gaugeable (top eigenvalue is nonnegative).
    #[error("not gaugeable: top eigenvalue {lambda0} >= 0")]
    NotGaugeable { lambda0: f64 },

    /// A search or fit failed to converge.
    #[error("no convergence: {0}")]
    NoConvergence(String),

    /// Not enough data to carry out an estimate.
    #[error("insufficient data: {0}")]
    InsufficientData(String),

    /// Linear algebra backend failure.
    #[error("linear algebra error: {0}")]
    Linalg(String),
}

impl From<ndarray_linalg::error::LinalgError> for Error {
    fn from(e: ndarray_linalg::error::LinalgError) -> Self {
        Error::Linalg(e.to_string())
    }
}

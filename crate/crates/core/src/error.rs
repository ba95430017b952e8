use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A caller violated a documented precondition.
    #[error("contract violated: {0}")]
    Contract(String),

    /// The requested problem does not fit the configured size limits.
    #[error("size limit exceeded: {0}")]
    Size(String),

    #[error("eigensolver did not converge for eigenvalue {index} after {iterations} iterations")]
    NonConvergence { index: usize, iterations: usize },

    #[error("perturbation order {0} is not supported (maximum is 3)")]
    UnsupportedOrder(usize),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

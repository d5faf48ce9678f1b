use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Parameters outside the model's domain (K < 2, infeasible point, ...).
    #[error("domain error: {0}")]
    Domain(String),
    /// Dimension mismatch between operands.
    #[error("shape error: {0}")]
    Shape(String),
    /// Caller broke an operation precondition, e.g. passed a non-vertex.
    #[error("contract violation: {0}")]
    Contract(String),
    /// An explicit construction would exceed the materialization guard.
    #[error("size guard exceeded: {what} needs {required} elements (limit {limit})")]
    Size {
        what: String,
        required: u128,
        limit: u128,
    },
    /// An asserted structural identity failed; indicates a construction bug.
    #[error("structural check failed: {0}")]
    Structural(String),
    /// Malformed request, e.g. the wrong number of free coordinates.
    #[error("usage error: {0}")]
    Usage(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

use crate::muckenhoupt::BoundInterval;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("sequence has {available} pairs but {requested} were requested")]
    PrefixTooShort { requested: usize, available: usize },

    #[error("duplicate node x = {0}")]
    DuplicateNode(f64),

    #[error("invalid pair at position {index}: {reason}")]
    InvalidPair { index: usize, reason: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The scan window does not reach past `x`; `partial` is the lower bound
    /// collected from the window.
    #[error("scan window of {scan} nodes ends at x = {last_node}, not beyond {x}")]
    ScanExhausted {
        x: f64,
        scan: usize,
        last_node: f64,
        partial: BoundInterval,
    },

    #[error("weights must be strictly positive, got {0}")]
    InvalidWeight(f64),

    #[error("matrix is not symmetric at ({row}, {col})")]
    NotSymmetric { row: usize, col: usize },

    #[error(
        "power iteration did not converge after {iterations} iterations (last estimate {estimate})"
    )]
    NoConvergence {
        iterations: usize,
        estimate: f64,
        iterate: Vec<f64>,
    },

    #[error("quadrature grid is empty")]
    InvalidGrid,

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("sandwich violated for k = {k} at truncation {size}: {detail}")]
    SandwichViolation {
        k: usize,
        size: usize,
        detail: String,
    },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

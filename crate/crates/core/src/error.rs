use thiserror::Error;

/// Errors raised by the toolkit. Indices carried here are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is singular")]
    Singular,

    #[error("variable count mismatch: {0} vs {1}")]
    VariableCount(usize, usize),

    #[error("zero substituted into a negative power of variable {variable}")]
    Pole { variable: usize },

    #[error("span is not closed: e{i}*e{j} leaves the span")]
    NotClosed { i: usize, j: usize },

    #[error("invalid span: {0}")]
    InvalidSpan(String),

    #[error("method inapplicable: {0}")]
    MethodInapplicable(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("vector is not reachable: {0}")]
    Unreachable(String),

    #[error("protocol error: {0}")]
    Protocol(String),

    #[error("counterexample at sample {index} (x = [{x}])")]
    Counterexample { index: usize, x: String },

    #[error("parse error at {context}: {message}")]
    Parse { context: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

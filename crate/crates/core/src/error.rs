use std::fmt;

use thiserror::Error;

/// Syntax error produced by the expression parser.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    /// Byte offset into the source text.
    pub offset: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "syntax error at offset {}: {}", self.offset, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("unbound variable '{0}'")]
    UnboundVariable(char),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("index {index} out of range for basis of size {size}")]
    IndexOutOfRange { index: usize, size: usize },

    #[error("Newton iteration for the {order}-point Gauss rule did not converge")]
    NoConvergence { order: usize },

    #[error("matrix is singular (pivot {pivot:.3e} at column {column})")]
    SingularMatrix { column: usize, pivot: f64 },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("index-1 condition violated: min |k22(t,t)| = {min:.3e} at t = {at}")]
    Index1Violation { min: f64, at: f64 },

    #[error("consistency condition violated: f2(0) = {value:.3e}")]
    ConsistencyViolation { value: f64 },

    #[error("problem file{}: {message}", .line.map(|l| format!(" line {l}")).unwrap_or_default())]
    Format { line: Option<usize>, message: String },

    #[error("missing derivative '{0}' and finite-difference fallback is disabled")]
    MissingDerivatives(&'static str),

    #[error("no exact solution available for error measurement")]
    MissingExactSolution,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

/// Errors shared by every module in this crate.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed input text; `line` is 1-based.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// A value does not fit the representable or declared range.
    #[error("range error: {0}")]
    Range(String),

    /// A documented precondition was violated.
    #[error("contract violation: {0}")]
    Contract(String),

    /// The requested statistic is undefined for this input.
    #[error("undefined for this input: {0}")]
    UndefinedInput(String),

    /// A size guard refused to start a brute-force computation.
    #[error("size guard: {0}")]
    Guard(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

/// Errors produced by the library and the experiment driver.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An input lies outside the domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Overflow or underflow of the leading component of an extended value.
    #[error("range error: {0}")]
    Range(String),

    /// Inputs of the wrong kind were combined (e.g. a weight vector with the wrong scaling).
    #[error("usage error: {0}")]
    Usage(String),

    /// A layout or grid failed its own invariant checks while being built.
    #[error("construction error: {0}")]
    Construction(String),

    /// The requested function/degree combination is dominated by approximation error.
    #[error("refused: {0} (Step I is critical; pass --allow-step1 to override)")]
    StepOneCritical(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

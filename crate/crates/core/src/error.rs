use thiserror::Error;

/// Errors raised by geometric constructions and operations.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Malformed input: wrong dimension, non-finite coordinates, bad parameters.
    #[error("argument error: {0}")]
    Argument(String),
    /// Input outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// An iterative solver stopped without reaching its tolerance.
    #[error("convergence error: {message} (residual {residual:e})")]
    Convergence { message: String, residual: f64 },
    /// Serialized input could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn arg<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Argument(msg.into()))
}

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

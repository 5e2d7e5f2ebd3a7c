use thiserror::Error;

/// Errors raised by the bound library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parameter out of domain: {0}")]
    ParameterDomain(String),

    #[error("dimension mismatch: {0}x{0} vs {1}x{1}")]
    DimensionMismatch(usize, usize),

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("lambda = {lambda} exceeds lambda_max = {lambda_max}; the smoothed linear bound is undefined there")]
    OutOfDomain { lambda: f64, lambda_max: f64 },

    #[error("{0} is not supported for this divergence")]
    Unsupported(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::ParameterDomain(msg.into()))
}

use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("grid too small: {0}")]
    GridTooSmall(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("mass function is not positive at x = {x}, y = {y}")]
    NonPositiveMass { x: f64, y: f64 },

    #[error("dense solver refused a {dim}x{dim} matrix (cap {cap}); use the lanczos solver")]
    DenseTooLarge { dim: usize, cap: usize },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("unknown {kind}: {name}")]
    Unknown { kind: &'static str, name: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

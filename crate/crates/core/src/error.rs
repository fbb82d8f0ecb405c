use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors shared by every module of the crate.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("p must be an odd prime, got {0}")]
    InvalidPrime(u32),

    #[error("n must be at least 1")]
    InvalidLevels,

    #[error("parameters out of range: {0}")]
    ParamRange(String),

    #[error("mismatched parameters: {0}")]
    ParamMismatch(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("layering violation: {0}")]
    LayerViolation(String),

    #[error("index out of range: {0}")]
    IndexRange(String),

    #[error("size guard exceeded: {0}")]
    SizeGuard(String),

    #[error("p-degree is undefined for the identity element")]
    UndefinedDegree,

    #[error("the zero polynomial has no leading term")]
    ZeroPolynomial,

    #[error("identity element not allowed: {0}")]
    IdentityInput(String),

    #[error("violated precondition: {0}")]
    Precondition(String),

    #[error("syntax error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

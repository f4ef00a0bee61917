use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("modulus {p} is not above 2^20")]
    PrimeTooSmall { p: u64 },
    #[error("modulus {p} does not fit in 31 bits")]
    PrimeTooLarge { p: u64 },
    #[error("modulus {p} is not prime")]
    NotPrime { p: u64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("resource limit: {0}")]
    Resource(String),
    #[error("degenerate configuration: {0}")]
    Degenerate(String),
    #[error("guard violated: {0}")]
    Guard(String),
    #[error("scheme file: {0}")]
    SchemeFile(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

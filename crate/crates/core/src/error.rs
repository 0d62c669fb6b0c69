use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("extension degree must be >= 1")]
    BadDegree,
    #[error("field size {0} exceeds the supported bound 2^20")]
    FieldTooLarge(u64),
    #[error("modulus is not a monic irreducible polynomial of the required degree")]
    BadModulus,
    #[error("operation mixes elements of different fields")]
    MixedFields,
    #[error("division by zero")]
    DivisionByZero,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is rank deficient")]
    RankDeficient,
    #[error("matrix is not square")]
    NotSquare,
    #[error("matrix is not left prime")]
    NotLeftPrime,
    #[error("code is catastrophic: {0}")]
    Catastrophic(String),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("enumeration budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("linear system is singular or inconsistent: {0}")]
    SingularSystem(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

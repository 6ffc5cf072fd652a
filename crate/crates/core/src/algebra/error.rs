use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("extension degree must be positive")]
    ZeroDegree,
    #[error("field of order {p}^{k} exceeds the 62-bit element encoding")]
    FieldTooLarge { p: u64, k: u32 },
    #[error("elements belong to different contexts")]
    ContextMismatch,
    #[error("the zero polynomial has no factorization")]
    ZeroPolynomial,
    #[error("polynomial is not univariate")]
    NotUnivariate,
    #[error("CRT moduli are not pairwise coprime")]
    NotCoprime,
    #[error("invalid series scale: {0}")]
    InvalidScale(String),
    #[error("invalid truncation context: {0}")]
    InvalidContext(String),
    #[error("resource limit: {0}")]
    ResourceLimit(String),
}

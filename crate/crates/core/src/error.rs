use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("form {0} is not positive definite")]
    NotPositiveDefinite(String),
    #[error("form {0} has an odd cross coefficient")]
    OddCrossCoefficient(String),
    #[error("dimension mismatch: form has dimension {form}, vector has dimension {vector}")]
    DimensionMismatch { form: usize, vector: usize },
    #[error("matrix is not unimodular (determinant {0})")]
    NotUnimodular(i128),
    #[error("integer overflow in {0}")]
    Overflow(&'static str),
    #[error("invalid family parameter: {0}")]
    InvalidFamilyParameter(String),
    #[error("form {0} is not primitive")]
    Imprimitive(String),
    #[error("form {0} is not reduced")]
    NotReduced(String),
    #[error("form {0} represents 1, so it is not the form of a Jacobian")]
    NotJacobian(String),
    #[error("unsupported character pattern: 2-part of |I1| is {0}")]
    UnsupportedCharacterPattern(i64),
    #[error("argument {value} is not coprime to the modulus {modulus}")]
    NotCoprime { value: i64, modulus: i64 },
    #[error("invalid discriminant {0}")]
    InvalidDiscriminant(i64),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("certificate step failed: {0}")]
    CertificateFailed(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

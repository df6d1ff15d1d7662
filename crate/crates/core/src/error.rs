use thiserror::Error;

use crate::parse::ParseError;
use crate::scalar::ScalarError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("substitution requires valuation 1, found {0}")]
    ValuationError(String),
    #[error("precision error: {0}")]
    PrecisionError(String),
    #[error("operator is neither finite rank nor certified nilpotent")]
    NotProvablyFinitePotent,
    #[error("chain is not a Hochschild cycle")]
    NotACycle,
    #[error("decomposition failed: {0}")]
    DecompositionError(String),
    #[error("ideal membership violated: {0}")]
    MembershipError(String),
    #[error("unsupported factorization: {0}")]
    UnsupportedFactorization(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

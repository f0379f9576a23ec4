use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("symmetric-function table too short: need h up to degree {needed}, have {available}")]
    TableTooShort { needed: usize, available: usize },

    #[error("partition of size {size} exceeds the enumeration cap of {cap} cells")]
    SizeCapExceeded { size: usize, cap: usize },

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("near-singular grid (min node distance {distance:e}); use the schur or recurrence route")]
    NearSingularGrid { distance: f64 },

    #[error("singular denominator: |e| = {magnitude:e}")]
    SingularDenominator { magnitude: f64 },

    #[error("brute-force caps exceeded: {0}")]
    CapExceeded(String),

    #[error("empty vertex list")]
    EmptyVertexList,

    #[error("grid is not self-conjugate")]
    NotSelfConjugate,

    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Precondition(msg()))
    }
}

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("empty point set")]
    EmptyPointSet,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("scale factor must be positive, got {0}")]
    NonPositiveScale(String),

    #[error("half-space normal must be nonzero")]
    ZeroNormal,

    #[error("invalid rational {input:?}: {reason}")]
    ParseRational { input: String, reason: String },

    #[error("invalid fan: {0}")]
    InvalidFan(String),

    #[error("fan is not complete: {0}")]
    IncompleteFan(String),

    #[error("cone {0:?} is not unimodular")]
    NotUnimodular(Vec<usize>),

    #[error("cone {0:?} is not a maximal cone of the fan")]
    UnknownCone(Vec<usize>),

    #[error("divisor has {found} coefficients but the fan has {expected} rays")]
    DivisorLength { expected: usize, found: usize },

    #[error("section polytope is empty")]
    EmptySectionPolytope,

    #[error("section polytope is unbounded")]
    UnboundedSectionPolytope,

    #[error("invalid fixed-point record: {0}")]
    InvalidRecord(String),

    #[error("invalid pair: {0}")]
    InvalidPair(String),

    #[error("degree must be at least 1")]
    ZeroDegree,

    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
}

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

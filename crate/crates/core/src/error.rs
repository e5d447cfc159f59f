use thiserror::Error;

/// Errors produced anywhere in the toolkit.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("empty point set")]
    EmptyPointSet,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("body exceeds requested dimension (dim {dim} > {k})")]
    BodyExceedsDimension { dim: usize, k: usize },
    #[error("affine hull is not parallel to a coordinate subspace")]
    NonCoordinateAffineHull,
    #[error("negative scale factor {0}")]
    NegativeScale(String),
    #[error("polyhedron is unbounded")]
    Unbounded,
    #[error("non-integral multiple: {0}")]
    NonIntegralMultiple(String),
    #[error("divisor has no sections")]
    NoSections,
    #[error("exponent lies outside the section polytope")]
    ExponentOutsidePolytope,
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("invalid flag: {0}")]
    InvalidFlag(String),
    #[error("stratum is not an irreducible torus-invariant subvariety")]
    ReducibleStratum,
    #[error("divisor is not pseudoeffective")]
    NotPseudoEffective,
    #[error("cone data incomplete")]
    ConeDataIncomplete,
    #[error("divisor is not ample")]
    NotAmple,
    #[error("chamber crossing: decrease epsilon")]
    ChamberCrossing,
    #[error("valuative body undeterminable from numerical data")]
    ValuativeUndeterminable,
    #[error("unsupported by this backend: {0}")]
    Unsupported(String),
    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            location: location.into(),
            message: message.into(),
        }
    }
}

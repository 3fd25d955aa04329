use thiserror::Error;

/// Errors raised by the geometric kernels and the drivers built on them.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("halfspace normal must be nonzero")]
    ZeroNormal,

    #[error("polytope is empty")]
    Empty,

    #[error("polytope is unbounded")]
    Unbounded,

    #[error("point is not contained in the set")]
    NotInSet,

    #[error("inclusion-exclusion over {parts} parts exceeds the cap of {cap}")]
    TooManyParts { parts: usize, cap: usize },

    #[error("arrangement has {cells} cells, above the cap of {cap}")]
    ArrangementTooLarge { cells: usize, cap: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("face is not a face of the polytope")]
    NotAFace,

    #[error("singular affine map")]
    Singular,

    #[error("degenerate configuration: {0}")]
    Degenerate(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

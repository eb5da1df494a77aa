use thiserror::Error;

/// Every failure the engine can report.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("configuration error: {0}")]
    Config(String),

    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("pole: denominator vanishes at q = {0}")]
    Pole(String),

    #[error("leg index {leg} out of range for {legs} legs")]
    LegOutOfRange { leg: usize, legs: usize },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("R is not skew-invertible")]
    NotSkewInvertible,

    #[error("not of finite rank within cap {cap} (image dimensions {dims:?})")]
    NotFiniteRank { cap: usize, dims: Vec<usize> },

    #[error("expected a rank-one idempotent, found rank {0}")]
    RankNotOne(usize),

    #[error("R-trace calibration failed: {0}")]
    Calibration(String),

    #[error("validation failed: {check} check did not pass")]
    Validation { check: String },

    #[error("bad specialization, resample q: {0}")]
    BadSpecialization(String),

    #[error("resource cap exceeded: {0}")]
    ResourceCap(String),

    #[error("degree overflow: element of degree {found:?} exceeds truncation {limit:?}")]
    DegreeOverflow { found: (usize, usize), limit: (usize, usize) },

    #[error("counit applied to an element containing M generators")]
    CounitOnCoordinates,

    #[error("determinant convention failure: {0}")]
    Convention(String),

    #[error("internal consistency failure: {0}")]
    Internal(String),

    #[error("i/o error: {0}")]
    Io(String),

    #[error("malformed R-matrix file: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;

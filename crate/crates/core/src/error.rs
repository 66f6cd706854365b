use thiserror::Error;

/// Everything that can go wrong while loading, validating or transforming inputs.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid complex: {0}")]
    Validation(String),

    #[error("simplex {0:?} is not a face of the complex")]
    NotAFace(Vec<usize>),

    #[error("dimension {k} out of range (complex has dimension {n})")]
    DimensionOutOfRange { k: usize, n: usize },

    #[error("not a cycle: boundary is nonzero on face {0:?}")]
    NotACycle(Vec<usize>),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("degree must be at least 1, got {0}")]
    InvalidDegree(i64),

    #[error("hypersurface is not two-sided: {0}")]
    NotTwoSided(String),

    #[error("invalid Seifert chain: {0}")]
    InvalidSeifertChain(String),

    #[error("non-manifold identification at {0}")]
    NonManifold(String),

    #[error("involution not liftable as specified: {0}")]
    NotLiftable(String),

    #[error("invalid symmetric setup: {0}")]
    InvalidSetup(String),

    #[error("not a hypersurface: {0}")]
    NotAHypersurface(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("nonpositive warp at r = {r}: f = {f}, g = {g}")]
    NonpositiveWarp { r: f64, f: f64, g: f64 },

    #[error("no sign change on the bracket: {low}; {high}")]
    BracketFailure { low: String, high: String },

    #[error("io error on {path}: {message}")]
    Io { path: String, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

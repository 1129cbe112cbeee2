use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("degenerate case: {0}")]
    Degenerate(String),

    #[error("dimension 2l = {dim} exceeds the configured cap {cap}")]
    DimensionCap { dim: usize, cap: usize },

    #[error("expected a unit vector, got norm {0}")]
    NotUnit(f64),

    #[error("matrix is not orthogonal (max |A^T A - Id| = {0:e})")]
    NotOrthogonal(f64),

    #[error("matrix is not a symmetric involution (violation {0:e})")]
    NotInvolution(f64),

    #[error("point lies outside the closed unit disk (norm {0})")]
    OutsideDisk(f64),

    #[error("focal manifold M+ is empty: l = {l} < m + 1 = {}", m + 1)]
    EmptyFocal { l: usize, m: usize },

    #[error("rank decision is marginal: relative singular value {0:e} lies in the forbidden band")]
    MarginalRank(f64),

    #[error("malformed system: {0}")]
    MalformedSystem(String),

    #[error("unknown suite `{0}`")]
    UnknownSuite(String),

    #[error("suite `{suite}` is incompatible with this system: {reason}")]
    Incompatible { suite: String, reason: String },

    #[error("unknown foliation spec `{0}`")]
    UnknownSpec(String),

    #[error("unsupported profile: {0}")]
    UnsupportedProfile(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

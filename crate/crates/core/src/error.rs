use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("malformed matrix: {0}")]
    MalformedMatrix(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invalid ring: {0}")]
    InvalidRing(String),
    #[error("invalid complex: {0}")]
    InvalidComplex(String),
    #[error("not a chain map: {0}")]
    NotChainMap(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("characteristic guard: {0}")]
    Guard(String),
    #[error("graded ring needs an internal-degree cutoff")]
    CutoffRequired,
    #[error("lifting system unsolvable in degree {0}")]
    LiftFailed(usize),
    #[error("numerator vanishes at t = 1")]
    ZeroAtOne,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unknown verifier {0:?}")]
    UnknownVerifier(String),
    #[error("{0}")]
    TierGate(String),
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

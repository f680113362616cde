use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("window is degenerate: {0}")]
    DegenerateWindow(String),
    #[error("contraction factor has |q*| >= 1")]
    NotContractive,
    #[error("inflation is incompatible with the window: int(W_Q) is empty")]
    Incompatible,
    #[error("Q does not map the lattice onto itself")]
    NotLatticeAutomorphism,
    #[error("unsupported operation: {0}")]
    Unsupported(String),
    #[error("point set too small: need at least {0} points")]
    TooFewPoints(usize),
    #[error("patch does not occur in the point set")]
    PatchAbsent,
    #[error("empty window intersection: sample is inconsistent with the window")]
    EmptyIntersection,
    #[error("displacement caused a collision between points")]
    Collision,
    #[error("iteration failed to converge within {0} steps")]
    NoConvergence(usize),
    #[error("enumeration budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("config: {0}")]
    Config(String),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

/// Errors surfaced by constructors and verifiers.
#[derive(Error, Debug)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("{0}")]
    InvalidArgument(String),

    #[error("matrix is not positive semidefinite: min eigenvalue {min_eig}")]
    NotPsd { min_eig: f64 },

    #[error("invariant violated: {0}")]
    InvariantViolation(String),

    #[error("rank-r bijectivity is undecidable without a witness")]
    UndecidableWithoutWitness,

    #[error("map is not a *-homomorphism (residual {residual})")]
    NotHomomorphism { residual: f64 },

    #[error("vertex map is not a graph homomorphism: edge ({u}, {v}) breaks")]
    NotGraphHomomorphism { u: usize, v: usize },

    #[error("channel check failed: {0}")]
    NotAChannel(String),

    #[error("internal rank bookkeeping failed: {0}")]
    RankBookkeeping(String),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn dims(expected: usize, got: usize) -> Self {
        Error::DimensionMismatch { expected, got }
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}

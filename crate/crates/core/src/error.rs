use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is not Hermitian (max deviation {0:.3e})")]
    NotHermitian(f64),

    #[error("matrix is not unitary (max deviation of U^dagger U from identity {0:.3e})")]
    NotUnitary(f64),

    #[error("LAPACK routine {routine} failed with info = {info}")]
    Lapack { routine: &'static str, info: i32 },

    #[error("linear algebra backend: {0}")]
    Linalg(String),

    #[error("dimension {dim} exceeds the dense cap of {cap}")]
    DimensionCap { dim: usize, cap: usize },

    #[error("operator does not commute with translations (sector block unitarity error {0:.3e})")]
    SymmetryViolation(f64),

    #[error("internal consistency check failed: {0}")]
    Invariant(String),

    #[error("state lies outside the eigenbasis span (projection deficit {0:.3e})")]
    OutsideSpan(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("config error at line {line}: {msg}")]
    Config { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (max |M - M^dagger| = {0:e})")]
    NonHermitian(f64),

    #[error("matrix is not positive semi-definite (min eigenvalue {0:e})")]
    NotPsd(f64),

    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("site index {index} out of range for {sites} sites")]
    IndexOutOfRange { index: usize, sites: usize },

    #[error("at least one site is required")]
    NoSites,

    #[error("alpha must lie in the open interval (0, 1), got {0}")]
    InvalidAlpha(f64),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("rank {rank} is outside 1..={dim}")]
    InvalidRank { rank: usize, dim: usize },

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("Fisher information matrix is singular (rank {rank} < {dim})")]
    SingularQfim { rank: usize, dim: usize },

    #[error("all local generators are degenerate; the probe-optimized bound diverges")]
    DegenerateHamiltonian,

    #[error("family `{family}` unsupported: {reason}")]
    UnsupportedFamily { family: String, reason: String },

    #[error("eigensolver failed to converge")]
    NoConvergence,

    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

impl Error {
    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("multivector is not in the volume-time subalgebra (off-subalgebra magnitude {magnitude:e})")]
    NotInSubalgebra { magnitude: f64 },

    #[error("decay rate must be positive and finite, got {0}")]
    InvalidAlpha(f64),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("grid of {samples} samples exceeds the brute-force cap of {cap}")]
    GridTooLarge { samples: usize, cap: usize },

    #[error("axis length {0} is not a power of two")]
    GridNotPow2(usize),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("{path}: {reason}")]
    Format { path: PathBuf, reason: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn format(path: impl Into<PathBuf>, reason: impl Into<String>) -> Self {
        Error::Format { path: path.into(), reason: reason.into() }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }
}

impl Error {
    /// Stable machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NotInSubalgebra { .. } => "not_in_subalgebra",
            Error::InvalidAlpha(_) => "invalid_alpha",
            Error::InvalidGrid(_) => "invalid_grid",
            Error::GridTooLarge { .. } => "grid_too_large",
            Error::GridNotPow2(_) => "grid_not_pow2",
            Error::InvalidArgument(_) => "invalid_argument",
            Error::GridMismatch(_) => "grid_mismatch",
            Error::Format { .. } => "format",
            Error::Io { .. } => "io",
        }
    }
}

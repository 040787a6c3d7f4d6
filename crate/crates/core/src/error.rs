use std::path::PathBuf;

use thiserror::Error;

/// Errors surfaced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("quadrature order must be at least 1")]
    ZeroOrder,

    #[error("unsupported dimension {0}: expected 1 or 2")]
    Dimension(usize),

    #[error("multi-index {index:?} exceeds maximum degree {max_degree}")]
    IndexOutOfRange {
        index: Vec<usize>,
        max_degree: usize,
    },

    #[error("grid half-width {half_width} is below the required {required} for this basis")]
    GridTooSmall { half_width: f64, required: f64 },

    #[error("grid spacing {spacing} cannot resolve frequencies up to {frequency}")]
    GridTooCoarse { spacing: f64, frequency: f64 },

    #[error("basis mismatch: {0}")]
    BasisMismatch(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("corpus member `{id}` is not resolved: relative tail {tail:.3e} exceeds {limit:.1e}")]
    Unresolved { id: String, tail: f64, limit: f64 },

    #[error("config error: {0}")]
    Config(String),

    #[error("format error: {0}")]
    Format(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParams(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

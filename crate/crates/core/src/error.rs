use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, got {got}")]
    Dimension {
        context: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("factorization breakdown at pivot {pivot} (value {value:e})")]
    Factorization { pivot: usize, value: f64 },

    #[error("numerical error: {0}")]
    Numerical(String),

    #[error("dimension {dim} exceeds the dense limit of {limit}; use the sa-iu or batch-iu updaters, which never form ρAᵀA")]
    TooLarge { dim: usize, limit: usize },

    #[error("unsupported configuration: {0}")]
    Unsupported(String),

    #[error("degenerate problem: {0}")]
    Degenerate(String),

    #[error("{path}:{line}: {msg}")]
    Parse {
        path: String,
        line: usize,
        msg: String,
    },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn dim(context: &'static str, expected: usize, got: usize) -> Self {
        Error::Dimension {
            context,
            expected,
            got,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

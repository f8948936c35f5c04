use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("row {row}, column `{column}`: {message}")]
    Parse {
        row: usize,
        column: String,
        message: String,
    },

    #[error("schema error: {0}")]
    Schema(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("domain split left the {side} domain empty")]
    EmptyDomain { side: &'static str },

    #[error("only one class present: {0}")]
    SingleClass(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("all instance weights are zero")]
    ZeroWeights,

    #[error("feature width mismatch: model expects {expected}, got {actual}")]
    WidthMismatch { expected: usize, actual: usize },

    #[error("no convergence after {0} rounds")]
    RoundCap(usize),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

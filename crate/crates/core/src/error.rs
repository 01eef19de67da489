//! Error type shared by every module of the toolkit.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("format error: {0}")]
    Format(String),

    #[error("node {index} out of range (graph has {len} nodes)")]
    Bounds { index: usize, len: usize },

    #[error("invalid node pair: {0}")]
    InvalidPair(String),

    #[error("shape error: {0}")]
    Shape(String),

    #[error("numeric error: {0}")]
    Numeric(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("negative sampling saturated: {0}")]
    Saturation(String),

    #[error("path enumeration exceeded cap of {cap} paths")]
    PathExplosion { cap: usize },

    #[error("non-deterministic forward pass: {0}")]
    Determinism(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for errors caused by malformed data or files rather than math.
    pub fn is_data_error(&self) -> bool {
        !matches!(self, Error::Numeric(_) | Error::Determinism(_))
    }
}

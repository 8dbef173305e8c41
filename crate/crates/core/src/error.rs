use std::path::PathBuf;

/// Errors raised by configuration, instance loading and the experiment harness.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),

    #[error("mutation probability must lie strictly inside (0, 1), got {0}")]
    InvalidProbability(f64),

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("granularity k = {k} must satisfy 1 <= k <= n + 1 and divide n + 1 = {n_plus_one}")]
    Granularity { k: usize, n_plus_one: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("graph error: {0}")]
    Graph(String),

    #[error("parse error in {what} at line {line}: {msg}")]
    Parse {
        what: &'static str,
        line: usize,
        msg: String,
    },

    #[error("instance too large for exhaustive enumeration: n = {n}, limit = {limit}")]
    TooLarge { n: usize, limit: usize },

    #[error("unknown bound id `{0}`")]
    UnknownBound(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

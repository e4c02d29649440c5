use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("budget exceeded: {what} needs {needed}, limit is {limit}")]
    Budget {
        what: &'static str,
        needed: u64,
        limit: u64,
    },

    #[error("cannot parse subgroup spec {spec:?}: {reason}")]
    Parse { spec: String, reason: String },

    #[error("inconsistent counts: {0}")]
    Inconsistent(String),

    #[error("no extra involution for this spec: {0}")]
    NoInvolution(String),

    #[error("insufficient newform data, missing levels {0:?}")]
    InsufficientData(Vec<u64>),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("fixture error at line {line}: {reason}")]
    Fixture { line: usize, reason: String },

    #[error("network: {0}")]
    Network(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }
}

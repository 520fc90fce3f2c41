use std::path::PathBuf;

/// Errors produced by the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("map parse error in field `{field}`: {message}")]
    MapParse { field: String, message: String },

    #[error("map validation failed: {0}")]
    MapValidation(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("no semantic signal: teacher and learner agree on every channel")]
    NoSemanticSignal,

    #[error("undefined alpha: no step with a positive latent gap")]
    UndefinedAlpha,

    #[error("config error: {0}")]
    Config(String),

    #[error("protocol error: {0}")]
    Protocol(String),

    #[error("proposal {got} is not the pending proposal ({expected:?})")]
    StaleProposal { expected: Option<u64>, got: u64 },

    #[error("a teaching session is already active")]
    Busy,

    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

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

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}

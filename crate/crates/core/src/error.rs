use thiserror::Error;

/// Errors produced by parsing, automata algebra and the synthesis pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at offset {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("unknown atomic proposition `{0}`")]
    UnknownAtom(String),

    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),

    #[error("name collision: `{0}`")]
    NameCollision(String),

    #[error("alphabet has {0} symbols, at most 64 are supported")]
    TooManySymbols(usize),

    #[error("malformed HOA input: {0}")]
    Hoa(String),

    #[error("unsupported acceptance condition: {0}")]
    UnsupportedAcceptance(String),

    #[error("invalid system: {0}")]
    InvalidSystem(String),

    #[error("state `{state}` is not input-enabled: no transition on input letter {letter}")]
    NotInputEnabled { state: String, letter: String },

    #[error("not a trace of the system: {0}")]
    InvalidTrace(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("time budget exhausted")]
    Timeout,

    #[error("construction exceeded the limit of {0} states")]
    StateLimit(usize),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn parse(position: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            position,
            message: message.into(),
        }
    }
}

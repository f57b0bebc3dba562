use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid game: {0}")]
    InvalidGame(String),
    #[error("invalid strategy: {0}")]
    InvalidStrategy(String),
    #[error("illegal event for the {condition} condition: {detail}")]
    IllegalEvent {
        condition: &'static str,
        detail: String,
    },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("size guard tripped: {what} needs {size} but the cap is {cap}")]
    Guard {
        what: &'static str,
        size: u128,
        cap: u128,
    },
    #[error("format error: {0}")]
    Format(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub fn is_guard(&self) -> bool {
        matches!(self, Error::Guard { .. })
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Format(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

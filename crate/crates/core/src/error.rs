use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("generator not in domain: {0}")]
    NotInDomain(String),
    #[error("unknown generator in relator: {0}")]
    UnknownGenerator(String),
    #[error("invalid argument: {0}")]
    Invalid(String),
    #[error("name collision: {0}")]
    Collision(String),
    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    pub fn parse(line: usize, col: usize, msg: impl Into<String>) -> Self {
        Error::Parse { line, col, msg: msg.into() }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

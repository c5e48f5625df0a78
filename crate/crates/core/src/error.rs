use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at line {line}, column {column}: {msg}")]
    Parse {
        line: usize,
        column: usize,
        msg: String,
    },
    #[error("invalid diagram: {0}")]
    Invalid(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("level {0} out of range")]
    LevelOutOfRange(usize),
    #[error("cannot resolve path at level {level}: {msg}")]
    Resolve { level: usize, msg: String },
    #[error("horizon exceeded: orbit step needs edges below level {0}")]
    HorizonExceeded(usize),
    #[error("bad argument: {0}")]
    BadArgument(String),
    #[error("unknown letter `{0}`")]
    UnknownLetter(String),
}

pub type Result<T> = std::result::Result<T, Error>;

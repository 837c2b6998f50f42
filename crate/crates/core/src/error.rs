use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("search budget exceeded: {what} needs {needed}, limit is {limit}")]
    BudgetExceeded {
        what: &'static str,
        needed: String,
        limit: String,
    },

    #[error("invalid witness: {0}")]
    InvalidWitness(String),

    #[error("rank {rank} exceeds bound {bound}")]
    RankExceeded { rank: usize, bound: usize },

    #[error("step limit {0} exceeded")]
    StepLimitExceeded(u64),

    #[error("no transition from state `{state}` reading `{read}`")]
    UndefinedTransition { state: String, read: String },

    #[error("i/o error on {path}: {message}")]
    Io { path: String, message: String },

    #[error("malformed JSON: {0}")]
    Json(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }

    pub fn io(path: impl AsRef<std::path::Path>, err: std::io::Error) -> Self {
        Error::Io {
            path: path.as_ref().display().to_string(),
            message: err.to_string(),
        }
    }

    pub(crate) fn budget(what: &'static str, needed: impl ToString, limit: impl ToString) -> Self {
        Error::BudgetExceeded {
            what,
            needed: needed.to_string(),
            limit: limit.to_string(),
        }
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}

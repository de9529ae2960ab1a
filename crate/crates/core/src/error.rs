use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid game spec: {0}")]
    InvalidSpec(String),

    #[error("invalid code {code}: {reason}")]
    InvalidCode { code: String, reason: String },

    #[error("peg count mismatch: expected {expected}, found {found}")]
    PegMismatch { expected: usize, found: usize },

    #[error("duplicate question {code} at positions {first} and {second}")]
    DuplicateQuestion {
        code: String,
        first: usize,
        second: usize,
    },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("color {color} out of range 1..={colors}")]
    ColorOutOfRange { color: usize, colors: usize },

    #[error("{what} index {index} out of range (len {len})")]
    IndexOutOfRange {
        what: &'static str,
        index: usize,
        len: usize,
    },

    #[error("malformed answer signature: {0}")]
    MalformedSignature(String),

    #[error("search budget exhausted after {nodes} nodes")]
    BudgetExhausted { nodes: u64 },

    #[error("parse error: {0}")]
    Parse(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

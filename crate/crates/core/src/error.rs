use thiserror::Error;

/// Errors raised by the library operations.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("ground set size {0} exceeds the supported maximum {max}", max = crate::MAX_N)]
    SizeTooLarge(usize),
    #[error("size mismatch: expected n = {expected}, got n = {got}")]
    SizeMismatch { expected: usize, got: usize },
    #[error("enumeration cap exceeded: n = {n} is above the cap {cap}")]
    CapExceeded { n: usize, cap: usize },
    #[error("the congruence is not essential (a basic arc is missing)")]
    NotEssential,
    #[error("the congruence is not simple")]
    NotSimple,
    #[error("invalid arc: {0}")]
    InvalidArc(String),
    #[error("invalid arc diagram: {0}")]
    InvalidDiagram(String),
    #[error("invalid tree: {0}")]
    InvalidTree(String),
    #[error("no permutation maps to this diagram")]
    NoPreimage,
    #[error("birational labels must be nonnegative")]
    NegativeLabel,
    #[error("unknown congruence name: {0}")]
    UnknownCongruence(String),
    #[error("invalid parameters for congruence `{name}`: {reason}")]
    InvalidParams { name: String, reason: String },
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("edge not present in the tree")]
    EdgeNotFound,
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn parse(pos: usize, msg: impl Into<String>) -> Self {
        Error::Parse { pos, msg: msg.into() }
    }
}

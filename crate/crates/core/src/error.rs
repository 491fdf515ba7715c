use thiserror::Error;

/// Errors raised by constructions and analyses in this crate.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("relation ({0}, {1}) references an element outside 0..{2}")]
    ElementOutOfRange(usize, usize, usize),

    #[error("relations contain a cycle: {0:?}")]
    Cycle(Vec<usize>),

    #[error("ideal budget of {0} exceeded")]
    BudgetExceeded(usize),

    #[error("base poset is not graded")]
    NotGraded,

    #[error("base poset is not ranked")]
    NotRanked,

    #[error("{what} = {value} is out of range (max {max})")]
    OutOfRange {
        what: &'static str,
        value: usize,
        max: usize,
    },

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("invalid shape: {0}")]
    InvalidShape(String),

    #[error("shape is not balanced")]
    NotBalanced,

    #[error("strict partition {0:?} is not shifted-balanced of type 1 or 2")]
    Unclassified(Vec<usize>),

    #[error("map is not a bijection on ideals")]
    NotBijection,

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

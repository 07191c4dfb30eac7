use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("division by zero")]
    DivisionByZero,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid interval: {0}")]
    InvalidInterval(String),

    #[error("requested {requested} terms exceeds the cap of {cap}")]
    TermCap { requested: usize, cap: usize },

    #[error("policy violation at index {index}: {reason}")]
    PolicyViolation { index: usize, reason: String },

    #[error("b_{index} = {b} is below the greedy choice a_{index} = {a}")]
    GreedyBoundViolation { index: usize, a: String, b: String },

    #[error("partial sum through index {index} reaches or exceeds theta")]
    PartialSumExceedsTheta { index: usize },

    #[error("invalid sequence: {0}")]
    InvalidSequence(String),

    #[error("no jump found within {0} indices; sequence looks bounded")]
    NoJump(usize),

    #[error("certification failed at maximum depth {0}")]
    DepthExhausted(usize),

    #[error("gap is not certifiably positive")]
    NonPositiveGap,

    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
}

use thiserror::Error;

/// Errors raised by sequence construction, weight evaluation and the reports.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("sequence offset must be at least 1, got {0}")]
    InvalidOffset(usize),
    #[error("non-finite entry at index {index}")]
    NonFinite { index: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("index {n} lies beyond the end of the weight table ({end} entries, no tail rule)")]
    OutOfDomain { n: usize, end: usize },
    #[error("partial sums have a nonzero plateau; the transformed inequality needs compact support")]
    NonZeroPlateau,
    #[error("the zero sequence is excluded (the inequality is strict only for nonzero input)")]
    ZeroSequence,
    #[error("tail not computable: {0}")]
    TailNotComputable(String),
    #[error("tail diverges: {0}")]
    TailDivergent(String),
    #[error("hypothesis fails: {0}")]
    Hypothesis(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("range too large: {what} = {requested} exceeds the configured limit {limit}")]
    RangeTooLarge {
        what: &'static str,
        requested: u64,
        limit: u64,
    },
    #[error("invalid segment [{lo}, {hi}]: {reason}")]
    InvalidSegment {
        lo: u64,
        hi: u64,
        reason: &'static str,
    },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("tolerance {tolerance:e} unachievable within truncation budget {budget}")]
    ToleranceUnachievable { tolerance: f64, budget: u64 },
    #[error("adaptive quadrature exceeded its budget of {budget} subintervals")]
    QuadratureFailure { budget: usize },
    #[error("tail certificate failed: {0}")]
    CertificateFailure(String),
    #[error("prime prefix exhausted: need p_{needed} but only {available} terms computed")]
    PrefixExhausted { needed: usize, available: usize },
    #[error("index {index} out of range (computed prefix has {len} terms)")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("precondition violated: {0}")]
    PreconditionViolation(String),
    /// A proven property failed on concrete data; either the proof or the
    /// implementation is wrong.
    #[error("FATAL invariant violation: {0}")]
    FatalInvariant(String),
}

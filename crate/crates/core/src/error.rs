use alloc::string::String;

use num_bigint::BigUint;

use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// Digit at 1-based `index` is below the smallest admissible value.
    #[error("invalid digit {digit} at position {index}: the smallest admissible digit is {minimum}")]
    InvalidDigit {
        index: usize,
        digit: BigUint,
        minimum: BigUint,
    },
    #[error("unknown digit system `{0}`")]
    UnknownSystem(String),
    #[error("invalid digit rule: {0}")]
    InvalidRule(String),
    #[error("{value} lies outside the domain {domain}")]
    OutOfDomain { value: Rational, domain: &'static str },
    #[error("digit generator exhausted at position {index}")]
    GeneratorExhausted { index: usize },
    #[error("stream digits are unknown beyond position {available}")]
    UnknownDigits { available: usize },
    #[error("classification undetermined after inspecting {depth} digits")]
    Undetermined { depth: usize },
    #[error("streams agree on the first {0} digits")]
    NoDisagreementUpToDepth(usize),
    #[error("sequence side mismatch: {0}")]
    SideMismatch(String),
    #[error("target cannot be classified from {depth} digits")]
    UnclassifiedTarget { depth: usize },
    #[error("family not supported for this target: {0}")]
    UnsupportedFamily(String),
    #[error("element {index} equals the limit candidate")]
    ElementEqualsTarget { index: u64 },
    #[error("element {index} has no exact rational value")]
    NotExactlyEvaluable { index: u64 },
    #[error("{0} is not an endpoint; decide convergence directly instead of splitting")]
    SplitUnnecessary(Rational),
    #[error("{value} belongs to the exceptional set and has no alternating expansion")]
    ExceptionalPoint { value: Rational },
    #[error("target and family use different digit systems")]
    SystemMismatch,
    #[error("invalid limit target: {0}")]
    InvalidTarget(String),
    #[error("invalid index map: {0}")]
    InvalidIndexMap(String),
}

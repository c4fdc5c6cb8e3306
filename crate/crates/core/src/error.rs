use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid ring configuration: {0}")]
    InvalidConfig(String),
    #[error("operands live in different rings")]
    ConfigMismatch,
    #[error("division by zero")]
    DivisionByZero,
    /// A zero-at-precision value blocked a certificate.
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("m-th roots with p | m are unsupported (m = {m}, p = {p})")]
    UnsupportedRamifiedRoot { m: u64, p: u64 },
    #[error("not an m-th power: {0}")]
    NotMthPower(String),
    #[error("inner series has a nonzero constant term")]
    NonzeroConstantTerm,
    #[error("expected a unit: {0}")]
    NotUnit(String),
    #[error("expected an integral value: {0}")]
    NotIntegral(String),
    #[error("Weierstrass degree is infinite or not determined within the cap")]
    InfiniteWideg,
    #[error("cap {cap} is too small, need at least {needed}")]
    CapTooSmall { needed: usize, cap: usize },
    #[error("input contradicts a structural theorem: {0}")]
    TheoremViolation(String),
    #[error("normalization required: {0}")]
    NormalizationRequired(String),
    #[error("internal invariant violated: {0}")]
    InvariantViolation(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

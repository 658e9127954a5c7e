use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid coefficient sequence: {0}")]
    InvalidSequence(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("non-finite value for {0}")]
    NonFinite(&'static str),

    /// A continued-fraction or resolvent-formula denominator vanished. `level`
    /// is the nesting depth at which it happened (0 = outermost).
    #[error("zero denominator at level {level}")]
    ZeroDenominator { level: usize },

    #[error("p_{n}(z) vanishes; shift z off the real axis")]
    ZeroPolynomial { n: usize },

    #[error("negative density {value:e} at x = {x}")]
    NegativeDensity { x: f64, value: f64 },

    #[error("deformed resolvent has a pole on the support at x = {x}")]
    PoleOnSupport { x: f64 },

    #[error("eigenvalue iteration did not converge after {iterations} steps")]
    NoConvergence { iterations: usize },

    #[error("insufficient data: found {found}, need at least {needed}")]
    InsufficientData { found: usize, needed: usize },
}

use thiserror::Error;

/// Errors raised by node generation, interpolation and diagnostics.
#[derive(Debug, Error)]
pub enum LejaError {
    #[error("invalid domain: {0}")]
    InvalidDomain(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("uniform sampling gave up after {attempts} rejections (degenerate polygon?)")]
    SamplingExhausted { attempts: u64 },

    #[error("coincident nodes at indices {first} and {second}")]
    CoincidentNodes { first: usize, second: usize },

    #[error("all {count} candidates coincide with existing nodes at step {step}")]
    DegenerateDraw { step: usize, count: usize },

    #[error("rejection bound failed: no acceptance after {attempts} attempts at step {step}")]
    RejectionBoundFailed { step: usize, attempts: u64 },

    #[error("operation not supported for domain kind `{kind}`: {what}")]
    Unsupported { kind: &'static str, what: &'static str },

    #[error("reference equilibrium density unavailable for domain kind `{0}`")]
    ReferenceUnavailable(&'static str),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("function `{name}` is not finite at {re}+{im}i on the domain")]
    NonFiniteFunction { name: String, re: f64, im: f64 },

    #[error("malformed input: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, LejaError>;

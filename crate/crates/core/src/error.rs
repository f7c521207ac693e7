use thiserror::Error;

/// Errors raised by the numerical kernels, the solvers and the CLI.
#[derive(Debug, Error)]
pub enum Error {
    #[error("non-finite integrand value {value} at x = {x}")]
    NonFinite { x: f64, value: f64 },

    #[error("degenerate line fit: {0}")]
    DegenerateFit(String),

    #[error("geometric series diverges: ratio {ratio} is not below 1")]
    Divergent { ratio: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error(
        "resonance: |a| = |b|^(1/p) (a = {a}, b = {b}, p = {p}); no unique solution is guaranteed"
    )]
    Resonance { a: f64, b: f64, p: String },

    #[error("regime error: {0}")]
    Regime(String),

    #[error("unsupported function: {0}")]
    UnsupportedFunction(String),

    #[error("contract violation: {0}")]
    ContractViolation(String),

    #[error("input error: {0}")]
    Input(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

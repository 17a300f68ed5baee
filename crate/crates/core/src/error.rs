use thiserror::Error;

/// Errors raised by norm oracles, estimators and solvers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid exponent {value}: {reason}")]
    InvalidExponent { value: f64, reason: &'static str },

    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("Luxemburg bisection failed to bracket the norm (Young function `{0}` is not admissible)")]
    NonBracketing(String),

    #[error("no closed-form Köthe dual is registered for {0}")]
    UnsupportedDual(String),

    #[error("all vectors in the tuple are zero")]
    ZeroTuple,

    #[error("operator is not positively homogeneous: |T(λx) - λT(x)| = {defect:e} at λ = {lambda}")]
    NotHomogeneous { lambda: f64, defect: f64 },

    #[error("operation requires a linear operator")]
    NonLinear,

    #[error("unsupported configuration: {0}")]
    Unsupported(String),

    #[error("infeasible at tolerance: {0}")]
    Infeasible(Box<crate::solvers::Infeasibility>),

    #[error("ill-posed factor: T does not vanish where the multiplier does (defect {defect:e} at atom {atom})")]
    IllPosed { atom: usize, defect: f64 },

    #[error("grid of {points} points exceeds the cap of {cap}")]
    GridCap { points: u128, cap: u128 },

    #[error("linear program is {0}")]
    Lp(&'static str),

    #[error("budget exhausted: {0}")]
    BudgetExhausted(String),

    #[error("serialization: {0}")]
    Serialization(String),
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

/// Errors raised by the exact and numerical pipelines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum QesError {
    #[error("division by zero polynomial")]
    DivisionByZero,

    #[error("operation requires a nonzero polynomial")]
    ZeroPolynomial,

    #[error("operation requires a polynomial of degree >= 1")]
    ConstantPolynomial,

    #[error("invalid interval: {0}")]
    InvalidInterval(String),

    #[error("refinement stalled after {iterations} iterations")]
    RefinementStalled { iterations: usize },

    #[error("root finding did not converge for {poly} after {iterations} iterations")]
    RootsNotConverged { poly: String, iterations: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("no reference polynomial for J={j} in {form} form")]
    NoReferencePolynomial { j: u32, form: &'static str },

    #[error("realness certification failed: {0}")]
    RealnessCertification(String),

    #[error("no criticality bracket found for J={j} in K in [{lo}, {hi}]")]
    BracketNotFound { j: u32, lo: f64, hi: f64 },

    #[error("stiff segment: step size underflow at r={r}")]
    StiffSegment { r: f64 },

    #[error("eigenvalue search did not converge: {0}")]
    SearchNotConverged(String),

    #[error("cannot parse rational from {0:?}")]
    ParseRational(String),
}

pub type Result<T> = std::result::Result<T, QesError>;

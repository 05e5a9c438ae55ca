use crate::ops::IterationTrace;

/// Errors produced by grid construction, operators and the solver.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("evaluation point {x} lies outside [0,1]")]
    OutOfDomain { x: f64 },

    #[error("invalid knot sequence: {0}")]
    InvalidKnots(String),

    #[error("values rise by {rise:e} at index {index}, beyond the monotonicity slack")]
    NotMonotone { index: usize, rise: f64 },

    #[error("non-finite value at index {index}")]
    NotFinite { index: usize },

    #[error("function is not in class {class}: {reason}")]
    ClassError { class: &'static str, reason: String },

    #[error("degenerate input: area is not positive")]
    DegenerateArea,

    #[error("degenerate slope: first segment is flat (stride undefined)")]
    DegenerateSlope,

    #[error("invalid scale: {0}")]
    InvalidScale(f64),

    #[error("invalid tolerances: {0}")]
    InvalidTolerances(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("iteration trace unsuitable for bracketing: {0}")]
    BadTrace(String),

    #[error("CSV parse error: {0}")]
    Csv(String),

    #[error("no convergence within {iterations} iterations (last step {last_step:e})")]
    NonConvergence {
        iterations: usize,
        last_step: f64,
        trace: Box<IterationTrace>,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

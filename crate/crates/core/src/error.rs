use thiserror::Error;

/// Errors raised by the vortex library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid vortex system: {0}")]
    InvalidSystem(String),
    #[error("vortices {k} and {l} are {distance:e} apart, below the minimum separation")]
    CloseVortices { k: usize, l: usize, distance: f64 },
    #[error("close approach at t = {t}: vortices {k} and {l} are {distance:e} apart")]
    CloseApproach {
        t: f64,
        k: usize,
        l: usize,
        distance: f64,
    },
    #[error("step size underflow at t = {t}")]
    StepSizeUnderflow { t: f64 },
    #[error("field evaluation point is singular (on a vertex image)")]
    Singular,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("case boundary: {quantity} = {value:e} is within tolerance of zero")]
    Boundary { quantity: &'static str, value: f64 },
    #[error("hypothesis unmet: {0}")]
    HypothesisUnmet(String),
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

/// Errors surfaced by the toolkit. Every precondition violation carries the
/// offending value so batch drivers can report a single-line reason.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum CoreError {
    #[error("grid size {0} must be a power of two and at least 8")]
    InvalidGridSize(usize),
    #[error("grid half-width must be positive, got {0}")]
    InvalidHalfWidth(f64),
    #[error("grid mismatch: {0}x{0} vs {1}x{1}")]
    GridMismatch(usize, usize),
    #[error("weight exponent b={0} outside (0, 2)")]
    WeightExponent(f64),
    #[error("phys.b out of PDE range (0,1): got {0}")]
    PdeExponent(f64),
    #[error("parameter mismatch: weight has b={weight_b}, params have b={param_b}")]
    ParamMismatch { weight_b: f64, param_b: f64 },
    #[error("amplitude overflow: |u| = {0} exceeds guard {1}")]
    AmplitudeOverflow(f64, f64),
    #[error("non-finite sample encountered")]
    NonFinite,
    #[error("{name} = {value} outside required domain {domain}")]
    ParamDomain {
        name: &'static str,
        value: f64,
        domain: &'static str,
    },
    #[error("field must be nonnegative for rearrangement, found {0}")]
    NegativeValue(f64),
    #[error("field is not radial within tolerance: asymmetry {0}")]
    NotRadial(f64),
    #[error("gradient gate violated: ||grad u0|| = {0} must be < 1")]
    GradientGate(f64),
    #[error("fixed-point iteration failed to contract at iteration {iteration}: ratio {ratio}")]
    NonContraction { iteration: usize, ratio: f64 },
    #[error("trajectory diverged at t = {t}: max |u| = {linf}")]
    Diverged { t: f64, linf: f64 },
    #[error("empty input: {0}")]
    EmptyInput(&'static str),
}

pub type Result<T> = std::result::Result<T, CoreError>;

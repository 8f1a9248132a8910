use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain violation: {what} (value {value})")]
    DomainViolation { what: String, value: f64 },

    #[error("singular state: {0}")]
    SingularState(String),

    #[error("quadrature failed on [{lo}, {hi}]: estimated error {error_estimate:e} above tolerance")]
    QuadratureFailure {
        lo: f64,
        hi: f64,
        error_estimate: f64,
    },

    #[error("no sign change on bracket [{lo}, {hi}] (f = {f_lo:e}, {f_hi:e})")]
    BracketFailure {
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },

    #[error("root finder did not converge after {iterations} iterations")]
    ConvergenceFailure { iterations: usize },

    #[error("deformed solution leaves its validity window at t* = {t_critical}")]
    DeformationBlowup { t_critical: f64 },

    #[error("step size underflow at t = {t}")]
    StepUnderflow { t: f64 },

    #[error("need at least {need} samples, got {got}")]
    InsufficientSamples { got: usize, need: usize },

    #[error("no closed form available: {0}")]
    NoClosedForm(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid system spec: {0}")]
    InvalidSpec(String),
}

impl Error {
    pub(crate) fn domain(what: impl Into<String>, value: f64) -> Self {
        Error::DomainViolation {
            what: what.into(),
            value,
        }
    }

    pub(crate) fn singular(what: impl Into<String>) -> Self {
        Error::SingularState(what.into())
    }
}

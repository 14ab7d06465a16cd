use crate::picard::PicardDiagnostics;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("model `{0}` has not passed hypothesis validation")]
    Unvalidated(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("picard iteration did not converge after {} iterations", .0.iterations)]
    NonConvergence(Box<PicardDiagnostics>),

    #[error("iterate left (0, delta] at the first interior node r = {r} (psi = {psi})")]
    WindowCollapse { r: f64, psi: f64 },

    #[error("step size {h:e} fell below h_min at r = {r}")]
    StepUnderflow { r: f64, h: f64 },

    #[error("lower bound violated: margin {margin:e} below -{slack:e}")]
    LowerBoundViolated { margin: f64, slack: f64 },
}

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

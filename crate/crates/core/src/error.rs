use thiserror::Error;

/// Errors raised by the simulation library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A precondition on the arguments was violated.
    #[error("invalid argument: {0}")]
    Argument(String),

    /// A numerical failure, optionally located at a simulation time.
    #[error("numeric failure{}: {message}", .time.map(|t| format!(" at t = {t}")).unwrap_or_default())]
    Numeric { time: Option<f64>, message: String },

    /// The eigen-solver failed to reach the requested residual.
    #[error("eigen-decomposition did not converge (residual {residual:e})")]
    NoConvergence { residual: f64 },

    /// The sampling is too coarse for the requested quantity.
    #[error("insufficient resolution: {0}")]
    Resolution(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn arg(msg: impl Into<String>) -> Self {
        Error::Argument(msg.into())
    }

    pub(crate) fn numeric_at(time: f64, msg: impl Into<String>) -> Self {
        Error::Numeric {
            time: Some(time),
            message: msg.into(),
        }
    }
}

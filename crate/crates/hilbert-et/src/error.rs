//! Error type shared by solvers, quadrature routines, and input validation.

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A precondition on an argument was violated.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The simultaneous root iteration did not reach the requested residual.
    #[error(
        "root solver did not converge after {iterations} iterations \
         (worst scaled residual {residual:.3e})"
    )]
    SolverFailure { iterations: usize, residual: f64 },

    /// A quadrature, series, or extrapolation failed to reach its target accuracy.
    #[error("numeric failure: {0}")]
    NumericFailure(String),

    /// A closed-form transform was evaluated exactly at one of its singular points.
    #[error("evaluation at singular point x = {0}")]
    SingularPoint(f64),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn numeric(msg: impl Into<String>) -> Self {
        Error::NumericFailure(msg.into())
    }
}

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Failure modes shared by every evaluator in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument or parameter lies outside the domain of the function.
    #[error("domain error: {0}")]
    Domain(String),

    /// A parameter set that cannot be evaluated on a straight Mellin-Barnes contour.
    #[error("invalid special-function parameters: {0}")]
    Spec(String),

    /// An infinite series hit its term cap before the stopping rule fired.
    #[error("series did not converge after {terms} terms (partial sum {partial_sum:e})")]
    Convergence { partial_sum: f64, terms: usize },

    /// Adaptive refinement exhausted before reaching the requested tolerance.
    #[error("accuracy not reached: best estimate {estimate:e}, error estimate {error:e}")]
    Accuracy { estimate: f64, error: f64 },

    #[error("usage error: {0}")]
    Usage(String),
}

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

/// Returns a domain error unless `x` is finite and strictly positive.
pub(crate) fn ensure_positive(name: &str, x: f64) -> Result<()> {
    if x.is_finite() && x > 0.0 {
        Ok(())
    } else {
        Err(domain(format!("{name} must be finite and > 0, got {x}")))
    }
}

pub(crate) fn ensure_non_negative(name: &str, x: f64) -> Result<()> {
    if x.is_finite() && x >= 0.0 {
        Ok(())
    } else {
        Err(domain(format!("{name} must be finite and >= 0, got {x}")))
    }
}

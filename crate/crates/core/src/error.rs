use thiserror::Error;

/// Errors raised by cube computations, LP construction and the check runner.
#[derive(Debug, Error)]
pub enum Error {
    /// An input lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Arguments are inconsistent with each other (index collisions, bad masks).
    #[error("argument error: {0}")]
    Argument(String),

    /// Two evaluation routes of the same closed form disagree.
    #[error("consistency error in {what}: {lhs} vs {rhs} (residual {residual:e})")]
    Consistency {
        what: &'static str,
        lhs: f64,
        rhs: f64,
        residual: f64,
    },

    /// The requested instance exceeds a size guard.
    #[error("size error: {0}")]
    Size(String),

    #[error("malformed input: {0}")]
    Format(String),

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn argument(msg: impl Into<String>) -> Error {
    Error::Argument(msg.into())
}

/// Returns a consistency error when `lhs` and `rhs` differ by more than
/// `tol * (1 + max(|lhs|, |rhs|))`.
pub(crate) fn ensure_agree(what: &'static str, lhs: f64, rhs: f64, tol: f64) -> Result<()> {
    let residual = (lhs - rhs).abs();
    if residual <= tol * (1.0 + lhs.abs().max(rhs.abs())) {
        Ok(())
    } else {
        Err(Error::Consistency {
            what,
            lhs,
            rhs,
            residual,
        })
    }
}

use thiserror::Error;

/// Errors raised by the numerical kernels and the experiment driver.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Argument outside the domain of the function (poles, non-positive radii, ...).
    #[error("domain error: {0}")]
    Domain(String),
    /// Caller misuse: mismatched dimensions, invalid regimes, bad counts.
    #[error("usage error: {0}")]
    Usage(String),
    /// A numerical routine failed to converge or produced a non-finite value.
    #[error("evaluation error: {0}")]
    Evaluation(String),
    /// Experiment configuration problem.
    #[error("config error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

pub(crate) fn usage<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Usage(msg.into()))
}

pub(crate) fn finite(z: num_complex::Complex64, what: &str) -> Result<num_complex::Complex64> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(z)
    } else {
        Err(Error::Evaluation(format!("{what} is not finite: {z}")))
    }
}

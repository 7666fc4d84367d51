use thiserror::Error;

/// Errors raised by the analytic and simulation routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("degenerate plan: {0}")]
    Degenerate(String),
    #[error("{what} did not converge within {terms} terms")]
    NoConvergence { what: &'static str, terms: usize },
    #[error("quadrature on [{a}, {b}] stopped at estimated error {error:e} after {intervals} subintervals")]
    Quadrature { a: f64, b: f64, error: f64, intervals: usize },
    #[error("load pmf tail mass {mass:e} at l_max = {l_max} exceeds 1e-4; raise l_max")]
    Truncation { l_max: usize, mass: f64 },
    #[error("unbounded result: {0}")]
    Unbounded(String),
    #[error("optimizer: {0}")]
    Optimizer(String),
}

impl Error {
    /// Short machine-readable category, stable across releases.
    pub fn category(&self) -> &'static str {
        match self {
            Error::Domain(_) => "domain",
            Error::Config(_) => "config",
            Error::Degenerate(_) => "degenerate",
            Error::NoConvergence { .. } => "no-convergence",
            Error::Quadrature { .. } => "quadrature",
            Error::Truncation { .. } => "truncation",
            Error::Unbounded(_) => "unbounded",
            Error::Optimizer(_) => "optimizer",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

use thiserror::Error;

/// Errors raised by the solver, the norms and the experiment harness.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("shape mismatch: {what} has length {actual}, expected {expected}")]
    Shape {
        what: &'static str,
        expected: usize,
        actual: usize,
    },

    #[error("invalid grid: {0}")]
    Grid(String),

    #[error("Lamé parameters violate ellipticity (need mu > 0 and lambda + 2 mu > 0): lambda = {lambda}, mu = {mu}")]
    Ellipticity { lambda: f64, mu: f64 },

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("range error: {0}")]
    Range(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("accuracy failure in {what}: achieved {achieved:.3e}, requested {requested:.3e}")]
    Accuracy {
        what: String,
        achieved: f64,
        requested: f64,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("non-stationary Hawkes kernel: branching ratio {mu_hat} must be < 1")]
    NonStationary { mu_hat: f64 },

    #[error(
        "negative radicand {radicand:e} in {what}: parameters lie outside the formula's domain"
    )]
    NegativeRadicand { what: &'static str, radicand: f64 },

    #[error(
        "time step too coarse: dt*alpha/kappa = {ratio:.4} >= 1; use at least N = {suggested_n}"
    )]
    Unstable { ratio: f64, suggested_n: usize },

    #[error("tridiagonal solve failed: {0}")]
    Solver(String),

    #[error("malformed surface: {0}")]
    Surface(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}

use thiserror::Error;

/// Errors surfaced by constructors, solvers and oracles.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("type distance must be nonnegative, got {0}")]
    NegativeDelta(f64),

    #[error("experiment is not responsive at mu = {mu}: accuracy = {accuracy}")]
    NotResponsive { mu: f64, accuracy: f64 },

    #[error("experiment is not strictly informative at mu = {mu}")]
    NotInformative { mu: f64 },

    #[error("transition matrix does not match prior mu = {mu} (reversibility gap {gap:e})")]
    MismatchedPrior { mu: f64, gap: f64 },

    #[error("signal `{signal}` has zero probability; posterior undefined")]
    ZeroProbabilitySignal { signal: &'static str },

    #[error("wrong regime: {0}")]
    WrongRegime(String),

    #[error("empty grid: {0}")]
    EmptyGrid(String),

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("argument out of domain: {0}")]
    Domain(String),

    #[error("invalid metric: {0}")]
    InvalidMetric(String),

    #[error("radius bound violated at step {step}: r = {radius} > {bound}")]
    BoundViolation { step: usize, radius: f64, bound: f64 },

    #[error("embedding error: {0}")]
    Embedding(String),

    #[error("cover construction failed: {0}")]
    Construction(String),

    #[error("invalid walk: {0}")]
    InvalidWalk(String),

    #[error("chain is not a cycle: {0}")]
    NotACycle(String),

    #[error("invalid input: {0}")]
    Input(String),

    #[error("geometric assumption violated: {0}")]
    GeometricAssumptionViolated(String),

    #[error("verification failed: {0}")]
    VerificationFailure(String),

    #[error("precision exhausted: {0}")]
    Precision(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

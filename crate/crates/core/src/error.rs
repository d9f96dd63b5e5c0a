use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Input arrays or JSON with inconsistent shapes or values.
    #[error("malformed input: {0}")]
    Malformed(String),

    /// The metric is flat, so F is undefined.
    #[error("flat metric: F undefined")]
    Flat,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    /// Parameter outside the domain of a family or generator.
    #[error("out of domain: {0}")]
    Domain(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

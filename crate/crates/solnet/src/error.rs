use thiserror::Error;

/// Errors produced while building instances, sizing parameters, assembling
/// the optimization model or running the solver.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid time base: {0}")]
    InvalidTimeBase(String),

    #[error("invalid profile: {0}")]
    InvalidProfile(String),

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("invalid catalog: {0}")]
    InvalidCatalog(String),

    #[error("instance generation failed: {0}")]
    Generation(String),

    #[error("model error: {0}")]
    Model(String),

    #[error("infeasible fix: {0}")]
    InfeasibleFix(String),

    #[error("solver numerical failure: {0}")]
    Numerical(String),

    #[error("scenario error: {0}")]
    Scenario(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

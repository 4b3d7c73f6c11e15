use thiserror::Error;

use crate::space::VertexId;

#[derive(Debug, Error)]
pub enum Error {
    /// An exploration touched more vertices than its budget allows.
    #[error("budget exceeded: more than {limit} vertices explored")]
    BudgetExceeded { limit: usize },

    #[error("space has {vertices} vertices, enumeration bound is {bound}")]
    TooLarge { vertices: usize, bound: usize },

    #[error("no family member qualifies at t = {t}")]
    EmptyAtT { t: u64 },

    #[error("t = {t} lies above the largest sampled volume {max}")]
    OutOfRange { t: u64, max: u64 },

    #[error("invalid scaling: {0}")]
    InvalidScaling(String),

    #[error("vertex {0} is not part of the space")]
    UnknownVertex(VertexId),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("at least one curve is required")]
    EmptyCurve,

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}

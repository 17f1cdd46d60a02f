use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("{users} users exceeds the enumeration limit of {limit}")]
    Capacity { users: usize, limit: usize },

    #[error("{op} is not supported for {users} users")]
    UnsupportedDimension { op: &'static str, users: usize },

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("all-silent profile carries mass {mass}, above tolerance {eps}")]
    NonzeroSilence { mass: f64, eps: f64 },

    #[error("switching probability {prob} for user {user} exceeds 1; raise mu above {mu}")]
    ProbabilityOverflow { user: usize, prob: f64, mu: f64 },

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}

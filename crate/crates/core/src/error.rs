use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid family: {0}")]
    InvalidFamily(String),
    #[error("unknown curve `{0}`")]
    UnknownCurve(String),
    #[error("{0} is undefined")]
    Undefined(&'static str),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("missing rotation data: {0}")]
    MissingRotation(String),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("reducible configuration not found: {0}")]
    GuaranteeViolated(String),
    #[error("cycle limit of {0} exceeded")]
    LimitExceeded(usize),
    #[error("size guard exceeded: {0}")]
    SizeGuard(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code for the CLI: 2 for bad input, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse(_) | Error::Io(_) | Error::Json(_) | Error::UnknownCurve(_) => 2,
            _ => 1,
        }
    }
}

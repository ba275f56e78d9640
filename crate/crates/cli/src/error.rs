use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("input: {0}")]
    Input(String),
    #[error("verification failed: {0}")]
    Failed(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Failed(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Input(_) | CliError::Io(_) | CliError::Json(_) => 3,
        }
    }
}

impl From<ballgroup::Error> for CliError {
    fn from(e: ballgroup::Error) -> Self {
        match e {
            ballgroup::Error::InvalidConfig(m) => CliError::Usage(m),
            ballgroup::Error::Parse(_)
            | ballgroup::Error::NotUnitary
            | ballgroup::Error::NoDescent { .. } => CliError::Input(e.to_string()),
            other => CliError::Failed(other.to_string()),
        }
    }
}

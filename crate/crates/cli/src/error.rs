use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config: {0}")]
    Config(String),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Engine(#[from] hardy_core::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Engine(e) if e.is_invariant_breach() => 3,
            CliError::Engine(_) => 2,
        }
    }
}

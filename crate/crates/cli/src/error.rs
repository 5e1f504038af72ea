#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] fracwave::Error),

    #[error("EmptyGroup: group '{0}' has no samples")]
    EmptyGroup(String),

    #[error("UsageError: {0}")]
    Usage(String),
}

pub type CliResult<T> = Result<T, CliError>;

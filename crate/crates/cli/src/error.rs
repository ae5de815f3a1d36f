use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("solver failed: {0}")]
    Solver(#[source] jumpexec_core::Error),
    #[error("surface does not match the configuration: {0}")]
    Mismatch(String),
    #[error("missing input: {0}")]
    Missing(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Other(String),
}

impl CliError {
    /// Maps a core error to a configuration error tagged with the block name.
    pub fn config(block: &'static str) -> impl Fn(jumpexec_core::Error) -> CliError {
        move |e| CliError::Config(format!("{block}: {e}"))
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Solver(_) => 3,
            CliError::Mismatch(_) => 4,
            CliError::Missing(_) => 5,
            CliError::Io(_) | CliError::Other(_) => 1,
        }
    }
}

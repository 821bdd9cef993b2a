use thiserror::Error;

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Error)]
pub enum CliError {
    /// Malformed scenario or payload; exit status 2.
    #[error("bad input: {0}")]
    Input(String),

    #[error("I/O: {0}")]
    Io(#[from] std::io::Error),
}

impl From<nambu_core::Error> for CliError {
    fn from(e: nambu_core::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

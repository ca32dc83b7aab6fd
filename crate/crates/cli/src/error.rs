use thiserror::Error;

/// Failures surfaced by the command line, split by exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Runtime(#[from] anyhow::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Runtime(_) => 3,
        }
    }
}

impl From<voterlab_core::Error> for CliError {
    fn from(e: voterlab_core::Error) -> Self {
        use voterlab_core::Error as E;
        match e {
            E::InvalidSize(_)
            | E::OutsideBox { .. }
            | E::NotInterior(_)
            | E::SizeCap { .. }
            | E::Domain(_) => CliError::Config(e.to_string()),
            other => CliError::Runtime(other.into()),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

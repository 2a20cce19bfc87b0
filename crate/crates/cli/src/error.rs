use thiserror::Error;

/// Failures mapped onto the process exit codes.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("infeasible cutoff: {0}")]
    Cutoff(String),
    #[error("cannot write {path}: {source}")]
    Output {
        path: String,
        source: std::io::Error,
    },
}

impl CliError {
    /// 2 for bad input or an unwritable destination, 3 for a Fock cutoff
    /// that cannot hold the state.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Invalid(_) | CliError::Output { .. } => 2,
            CliError::Cutoff(_) => 3,
        }
    }
}

impl From<gqi_core::Error> for CliError {
    fn from(e: gqi_core::Error) -> Self {
        CliError::Invalid(e.to_string())
    }
}

impl From<gqi_fock::Error> for CliError {
    fn from(e: gqi_fock::Error) -> Self {
        match e {
            gqi_fock::Error::CutoffTooSmall { .. } => CliError::Cutoff(e.to_string()),
            other => CliError::Invalid(other.to_string()),
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

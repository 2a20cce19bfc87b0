use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("cutoff too small: truncation deficit {deficit:e} exceeds {limit:e}")]
    CutoffTooSmall { deficit: f64, limit: f64 },
    #[error("not a density matrix: {0}")]
    NotDensity(String),
    #[error(transparent)]
    Core(#[from] gqi_core::Error),
}

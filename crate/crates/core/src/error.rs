use thiserror::Error;

use crate::metric::MetricTerm;

/// Errors raised by the Gaussian-state and decay-constant routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("matrix is not positive definite (eigenvalue {eigenvalue:e})")]
    NotPositiveDefinite { eigenvalue: f64 },

    #[error("matrix is not symplectic (max |S Ω Sᵀ - Ω| = {deviation:e})")]
    NotSymplectic { deviation: f64 },

    #[error("mode index {index} out of range for a {n_modes}-mode state")]
    ModeIndex { index: usize, n_modes: usize },

    #[error("mode selection is empty")]
    EmptyModeSet,

    #[error("metric diverges on term {term} (symplectic eigenvalue {nu})")]
    SingularMetric { term: MetricTerm, nu: f64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("rejected monotone function: {0}")]
    InvalidFunction(String),

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("coefficients not normalized (sum of squares {0})")]
    NotNormalized(f64),
}

pub type Result<T> = std::result::Result<T, Error>;

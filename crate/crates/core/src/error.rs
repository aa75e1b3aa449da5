use thiserror::Error;

use crate::density::ValidationReport;

/// Errors raised by state handling, bound evaluation and the verification campaigns.
#[derive(Debug, Error)]
pub enum Error {
    /// Shapes or subsystem layouts that do not fit together.
    #[error("structural error: {0}")]
    Structure(String),

    /// A matrix that failed density-matrix validation.
    #[error("invalid density matrix: {0}")]
    InvalidState(ValidationReport),

    /// An argument outside the domain of the operation.
    #[error("parameter error: {0}")]
    Parameter(String),

    /// Iterative routines that did not converge or could not bracket a root.
    #[error("numerical error: {0}")]
    Numerical(String),

    /// A campaign sample whose slack is so negative it indicates a bug rather than roundoff.
    #[error("campaign aborted at sample {index}: bound `{bound}` has slack {slack:e}")]
    CampaignAborted {
        index: u64,
        bound: String,
        slack: f64,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn structure(msg: impl Into<String>) -> Self {
        Error::Structure(msg.into())
    }

    pub(crate) fn parameter(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }

    pub(crate) fn numerical(msg: impl Into<String>) -> Self {
        Error::Numerical(msg.into())
    }
}

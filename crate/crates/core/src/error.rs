use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by grid construction, the eigen solvers, the logistic solvers
/// and the sweep/export layer.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("resource has no positive mass (integral {0:e})")]
    DegenerateResource(f64),

    #[error("no positive solution: d * lambda1 = {0:.6} is not below the admissible bound")]
    NoPositiveSolution(f64),

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub(crate) fn numerical(msg: impl Into<String>) -> Self {
        Error::NumericalFailure(msg.into())
    }
}

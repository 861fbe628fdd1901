use std::path::PathBuf;

use thiserror::Error;

use crate::pnm::PnmError;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{}: {source}", path.display())]
    Pnm {
        path: PathBuf,
        #[source]
        source: PnmError,
    },
    #[error(transparent)]
    Core(#[from] vsi_stereo_core::Error),
    #[error("config: {0}")]
    Config(String),
    #[error("dataset entry `{name}`: {reason}")]
    Dataset { name: String, reason: String },
    #[error("noise level must be a non-negative percentage, got {0}")]
    NegativeNoise(f64),
    #[error("report: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> Error {
        let path = path.into();
        move |source| Error::Io { path, source }
    }
}

use alloc::boxed::Box;

use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected:?}, found {found:?}")]
    DimensionMismatch {
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error("image {width}x{height} is smaller than the {window}x{window} window")]
    ImageTooSmall { width: usize, height: usize, window: usize },
    #[error("data length {len} does not match {width}x{height}")]
    BadDataLength { width: usize, height: usize, len: usize },
    #[error("pixel value {value} at index {index} is outside [0, 255]")]
    PixelOutOfRange { index: usize, value: f64 },
    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParameter { field: &'static str, reason: &'static str },
    #[error("no pixels left to evaluate")]
    NothingEvaluated,
    #[error("{stage} stage failed: {source}")]
    InStage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn param(field: &'static str, reason: &'static str) -> Self {
        Error::InvalidParameter { field, reason }
    }

    pub(crate) fn check_dims(expected: (usize, usize), found: (usize, usize)) -> Result<()> {
        if expected == found {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected, found })
        }
    }
}

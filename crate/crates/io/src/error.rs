use std::path::PathBuf;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {msg} (at byte offset {offset})")]
    Format {
        path: PathBuf,
        offset: u64,
        msg: String,
    },
    #[error("{path}: unsupported format: {msg}")]
    Unsupported { path: PathBuf, msg: String },
    #[error("{path}: non-finite pose at index {index}; write aborted")]
    NonFinitePose { path: PathBuf, index: usize },
    #[error("no parsable frames in sequence at {0}")]
    EmptySequence(PathBuf),
    #[error("{path}: missing required file: {msg}")]
    Missing { path: PathBuf, msg: String },
    #[error("{path}: invalid calibration: {msg}")]
    BadCalibration { path: PathBuf, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, IoError>;

use thiserror::Error;

/// Errors produced by the geometry and residual-model primitives.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum CoreError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("transferred point is behind the camera (z = {z})")]
    BehindCamera { z: f64 },
    #[error("invalid camera intrinsics: {0}")]
    BadIntrinsics(String),
}

impl CoreError {
    pub fn invalid(msg: impl Into<String>) -> Self {
        CoreError::InvalidInput(msg.into())
    }
}

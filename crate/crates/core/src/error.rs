use thiserror::Error;

/// Errors produced by operator construction and certification.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("degree p = {p} out of range for ambient dimension n = {n}")]
    DegreeOutOfRange { p: usize, n: usize },

    #[error("ambient dimension n = {n} out of range (need {min} <= n <= {max})")]
    DimensionOutOfRange { n: usize, min: usize, max: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not symmetric: max deviation {deviation:.3e} exceeds tolerance {tol:.3e}")]
    NotSymmetric { deviation: f64, tol: f64 },

    #[error("tangent frame is not orthonormal: max deviation {deviation:.3e}")]
    FrameNotOrthonormal { deviation: f64 },

    #[error("invalid parameter {name}: {message}")]
    InvalidParameter { name: &'static str, message: String },

    #[error("q-convexity violated at point {point}: margin {margin:.6e}")]
    ConvexityViolated { point: usize, margin: f64 },
}

impl Error {
    pub fn invalid(name: &'static str, message: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            message: message.into(),
        }
    }
}

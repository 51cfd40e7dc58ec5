use std::fmt;

/// Errors surfaced by the approximation library.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A dense vector's length does not match the ambient dimension.
    DimensionMismatch { expected: usize, found: usize },
    /// A vector of the wrong storage kind was passed for the space
    /// (dense where sparse is required, or vice versa).
    SpaceMismatch { expected: &'static str, found: &'static str },
    /// An input contained NaN or infinite entries.
    NonFinite,
    /// The vector is not in the span of the basis within tolerance.
    NotInSpan { residual_norm: f64 },
    /// A parameter is outside its documented range.
    InvalidParameter(String),
    /// Too few data points for the requested operation.
    InsufficientData { needed: usize, found: usize },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::SpaceMismatch { expected, found } => {
                write!(f, "space mismatch: expected {expected} storage, found {found}")
            }
            Error::NonFinite => write!(f, "input contains non-finite values"),
            Error::NotInSpan { residual_norm } => {
                write!(f, "vector is not in the basis span (residual norm {residual_norm:.3e})")
            }
            Error::InvalidParameter(msg) => write!(f, "invalid parameter: {msg}"),
            Error::InsufficientData { needed, found } => {
                write!(f, "insufficient data: need at least {needed} points, found {found}")
            }
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;

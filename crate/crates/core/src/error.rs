use thiserror::Error;

/// Errors raised by the numerical routines.
///
/// Variants are grouped by class so that front ends can map them to stable
/// exit codes (see [`Error::class`]).
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    /// A point or stencil left the open unit ball, or an argument lies
    /// outside the domain of the function being evaluated.
    #[error("domain error: {0}")]
    Domain(String),

    /// A field evaluator produced a non-finite value.
    #[error("evaluation error: {0}")]
    Evaluation(String),

    /// A metric failed the positive-definiteness threshold.
    #[error("definiteness error: minimum eigenvalue {min_eigenvalue:e} below threshold {threshold:e}")]
    Definiteness { min_eigenvalue: f64, threshold: f64 },

    /// The truncation degree is too small for the requested accuracy.
    #[error("truncation error: {message}")]
    Truncation {
        message: String,
        suggested_n: Option<usize>,
    },

    /// Malformed or inconsistent configuration (kernel descriptors, grids, ...).
    #[error("configuration error: {0}")]
    Config(String),

    /// An exact integer did not fit in the available capacity.
    #[error("capacity error: {0}")]
    Capacity(String),

    /// The kernel does not have a polynomial reciprocal.
    #[error("unsupported kernel: {0}")]
    UnsupportedKernel(String),

    /// The hereditary defect `(1/K)(T*, T)` has a clearly negative eigenvalue.
    #[error("positivity violation: defect eigenvalue {eigenvalue:e} at basis index {index}")]
    PositivityViolation { eigenvalue: f64, index: usize },

    /// A frame is rank deficient or a frame change is singular.
    #[error("frame error: {0}")]
    Frame(String),

    /// A covariant derivative word exceeds the supported depth.
    #[error("unsupported order: {0}")]
    UnsupportedOrder(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}

/// Coarse error class, used for exit-code mapping.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Domain,
    Definiteness,
    Truncation,
    Config,
    Other,
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Domain(_) => ErrorClass::Domain,
            Error::Definiteness { .. } => ErrorClass::Definiteness,
            Error::Truncation { .. } => ErrorClass::Truncation,
            Error::Config(_) | Error::UnsupportedKernel(_) | Error::Capacity(_) => {
                ErrorClass::Config
            }
            _ => ErrorClass::Other,
        }
    }

    pub(crate) fn truncation(message: impl Into<String>, suggested_n: Option<usize>) -> Self {
        Error::Truncation {
            message: message.into(),
            suggested_n,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

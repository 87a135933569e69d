use thiserror::Error;

/// Failures raised by the geometric routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    /// An argument lies outside the domain of a trigonometric law.
    #[error("domain error: {0}")]
    Domain(String),
    /// The configuration is (numerically) flat and the quantity is undefined.
    #[error("degenerate configuration: {0}")]
    Degenerate(String),
    /// No spherical simplex has the requested data.
    #[error("not realizable: {0}")]
    NotRealizable(String),
    /// A finite-difference perturbation left the valid domain.
    #[error("finite-difference step {step} too large: {reason}")]
    StepTooLarge { step: f64, reason: String },
    /// The rejection sampler ran out of attempts.
    #[error("sampler exhausted after {attempts} attempts for sample {index}")]
    Exhausted { index: usize, attempts: usize },
}

impl GeometryError {
    /// True for the errors that indicate a numerically degenerate or
    /// unrealizable configuration rather than a malformed argument.
    pub fn is_numerical(&self) -> bool {
        !matches!(self, GeometryError::Domain(_))
    }
}

pub type Result<T> = std::result::Result<T, GeometryError>;

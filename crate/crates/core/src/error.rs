use thiserror::Error;

/// Errors raised by score evaluation, special functions and estimation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScoreError {
    /// An argument lies outside the domain of the function or family.
    #[error("domain error: {0}")]
    Domain(String),

    /// The score exists mathematically only as +inf (e.g. CRPS without a finite first moment).
    #[error("CRPS undefined/infinite for this family parameterization: {0}")]
    NonFinite(String),

    #[error("LogS unavailable for family '{0}'")]
    LogsUnavailable(&'static str),

    #[error("CRPS unavailable for family '{0}'")]
    CrpsUnavailable(&'static str),

    #[error("family '{family}' is not supported by {operation}")]
    Unsupported {
        family: &'static str,
        operation: &'static str,
    },

    /// A required family parameter was not supplied.
    #[error("missing parameter: {0}")]
    MissingParameter(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("degenerate sample: {0}")]
    DegenerateSample(String),

    #[error("did not converge: {0}")]
    NonConvergence(String),
}

impl ScoreError {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        ScoreError::Domain(msg.into())
    }

    /// True for errors caused by parameter values rather than input shape or availability.
    pub fn is_parameter_domain(&self) -> bool {
        matches!(self, ScoreError::Domain(_) | ScoreError::NonFinite(_))
    }
}

pub type Result<T> = std::result::Result<T, ScoreError>;

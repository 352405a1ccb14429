use properscore::ScoreError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Malformed or inconsistent input, or an invalid score/method/family combination.
    #[error("{0}")]
    Input(String),

    /// A parameter value lies outside its family's domain.
    #[error("{0}")]
    Domain(String),

    #[error("{0}")]
    NonConvergence(String),

    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) | CliError::Io(_) => 2,
            CliError::Domain(_) => 3,
            CliError::NonConvergence(_) => 4,
        }
    }

    /// Wraps a library error raised while handling `context` (e.g. "row 3").
    pub fn score(context: &str, err: ScoreError) -> Self {
        let msg = format!("{context}: {err}");
        match err {
            ScoreError::Domain(_) | ScoreError::NonFinite(_) | ScoreError::DegenerateSample(_) => {
                CliError::Domain(msg)
            }
            ScoreError::NonConvergence(_) => CliError::NonConvergence(msg),
            ScoreError::LogsUnavailable(_)
            | ScoreError::CrpsUnavailable(_)
            | ScoreError::Unsupported { .. }
            | ScoreError::MissingParameter(_)
            | ScoreError::Dimension(_) => CliError::Input(msg),
        }
    }
}

pub fn input(msg: impl Into<String>) -> CliError {
    CliError::Input(msg.into())
}

pub type CliResult<T> = std::result::Result<T, CliError>;

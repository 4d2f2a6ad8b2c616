use thiserror::Error;

pub type SuiteResult<T> = Result<T, SuiteError>;

#[derive(Debug, Error)]
pub enum SuiteError {
    #[error(transparent)]
    Core(#[from] nleg_core::Error),
    #[error("algebra `{0}` is not semisimple")]
    NotSemisimple(String),
    #[error("configuration: {0}")]
    Config(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl SuiteError {
    /// Precondition and configuration failures, as opposed to I/O.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            SuiteError::Core(_) | SuiteError::NotSemisimple(_) | SuiteError::Config(_)
        )
    }
}

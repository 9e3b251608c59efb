use std::path::PathBuf;

/// Everything a command can fail with, grouped by exit code.
#[derive(Debug, thiserror::Error)]
pub enum LabError {
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Semantic(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    /// Not an error as such: the experiment ran but no verdict was reached.
    #[error("inconclusive: {0}")]
    Inconclusive(String),
    #[error("falsified: {0}")]
    Falsified(String),
}

impl LabError {
    pub fn exit_code(&self) -> i32 {
        match self {
            LabError::Parse(_) => 1,
            LabError::Semantic(_) | LabError::Io { .. } => 2,
            LabError::Inconclusive(_) => 3,
            LabError::Falsified(_) => 4,
        }
    }

    pub fn io(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> LabError {
        let path = path.into();
        move |source| LabError::Io { path, source }
    }
}

pub fn semantic(e: impl std::fmt::Display) -> LabError {
    LabError::Semantic(e.to_string())
}

pub fn parse(e: impl std::fmt::Display) -> LabError {
    LabError::Parse(e.to_string())
}

pub type Result<T> = std::result::Result<T, LabError>;

use std::path::PathBuf;

use thiserror::Error;

/// Failures the front end reports, each with its own exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{0}")]
    Usage(String),

    #[error("{path}: parse error: {message}")]
    Parse { path: PathBuf, message: String },

    #[error("{0}")]
    Validation(#[from] eofbound::Error),

    #[error("no surface at {0}; run `eofbound build-surface` first")]
    MissingSurface(PathBuf),

    #[error("verification failed: {0}")]
    Verification(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } => 1,
            CliError::Usage(_) => 2,
            CliError::Parse { .. } => 3,
            CliError::Validation(_) => 4,
            CliError::MissingSurface(_) => 5,
            CliError::Verification(_) => 6,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(path: impl Into<PathBuf>, message: impl Into<String>) -> Self {
        CliError::Parse {
            path: path.into(),
            message: message.into(),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_are_distinct_and_nonzero() {
        let errors = [
            CliError::io("x", std::io::Error::other("boom")),
            CliError::Usage("u".into()),
            CliError::parse("x", "p"),
            CliError::Validation(eofbound::Error::Trace(0.9)),
            CliError::MissingSurface("s".into()),
            CliError::Verification("v".into()),
        ];
        let mut codes: Vec<i32> = errors.iter().map(CliError::exit_code).collect();
        assert!(codes.iter().all(|&c| c != 0));
        codes.dedup();
        assert_eq!(codes.len(), errors.len());
        assert!(errors[4].to_string().contains("build-surface"));
    }
}

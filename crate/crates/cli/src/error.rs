use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{origin}: {detail}")]
    Parse { origin: String, detail: String },
    #[error("{origin}: invalid `{field}`: {reason}")]
    Validation {
        origin: String,
        field: String,
        reason: String,
    },
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    pub fn parse(origin: impl Into<String>, detail: impl Into<String>) -> Self {
        CliError::Parse {
            origin: origin.into(),
            detail: detail.into(),
        }
    }

    pub fn validation(origin: impl Into<String>, field: impl Into<String>, reason: impl Into<String>) -> Self {
        CliError::Validation {
            origin: origin.into(),
            field: field.into(),
            reason: reason.into(),
        }
    }

    pub fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    pub fn with_origin(self, origin: &str) -> Self {
        match self {
            CliError::Validation { field, reason, .. } => CliError::validation(origin, field, reason),
            CliError::Parse { detail, .. } => CliError::parse(origin, detail),
            other => other,
        }
    }

    /// Process exit status for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } => 74,
            _ => 64,
        }
    }
}

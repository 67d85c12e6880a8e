use thiserror::Error;

/// Input errors; any of these maps to exit code 1.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },

    #[error("validation error in `{entity}`: {message}")]
    Validation { entity: String, message: String },

    #[error("validation error in `{entity}`: {error} ({error:?})")]
    Core { entity: String, error: nc_arakelov::Error },

    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl CliError {
    pub fn validation(entity: impl Into<String>, message: impl Into<String>) -> Self {
        CliError::Validation { entity: entity.into(), message: message.into() }
    }

    pub fn core(entity: impl Into<String>) -> impl FnOnce(nc_arakelov::Error) -> Self {
        let entity = entity.into();
        move |error| CliError::Core { entity, error }
    }
}

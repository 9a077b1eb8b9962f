use std::fmt::Debug;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    /// `name` is the library error variant.
    #[error("{name}: {message}")]
    Numeric { name: String, message: String },
    #[error("{0}")]
    Strict(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numeric { .. } => 3,
            CliError::Strict(_) => 4,
        }
    }

    pub fn io(path: &std::path::Path, err: std::io::Error) -> Self {
        CliError::Config(format!("{}: {err}", path.display()))
    }
}

/// Wraps a library error, naming its variant.
pub fn numeric<E: Debug + std::fmt::Display>(err: E) -> CliError {
    let debug = format!("{err:?}");
    let name =
        debug.split(|c: char| !(c.is_alphanumeric() || c == '_')).next().unwrap_or("Error").to_string();
    CliError::Numeric { name, message: err.to_string() }
}

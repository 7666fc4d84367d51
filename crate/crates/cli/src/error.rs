use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Model(#[from] m2m_agg::Error),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    pub fn category(&self) -> &'static str {
        match self {
            CliError::Config(_) => "config",
            CliError::Model(e) => e.category(),
            CliError::Io { .. } => "io",
        }
    }

    /// 2 config, 3 degenerate plan, 4 load truncation, 5 other numeric failures, 6 io.
    pub fn exit_code(&self) -> i32 {
        use m2m_agg::Error as E;
        match self {
            CliError::Config(_) | CliError::Model(E::Config(_)) => 2,
            CliError::Model(E::Degenerate(_)) => 3,
            CliError::Model(E::Truncation { .. }) => 4,
            CliError::Model(_) => 5,
            CliError::Io { .. } => 6,
        }
    }
}

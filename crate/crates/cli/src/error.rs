use std::path::PathBuf;

use crate::config::ConfigError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Core(#[from] collsync::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use collsync::Error as E;
        match self {
            CliError::Usage(_) | CliError::Config(_) => 1,
            CliError::Io { .. } => 2,
            CliError::Core(
                E::NumericalDrift { .. } | E::Numerical(_) | E::NotHermitian(_) | E::NotPositive(_) | E::BadTrace(_),
            ) => 3,
            CliError::Core(_) => 1,
        }
    }
}

//! Command-line front end for the `collsync` simulator: TOML configuration,
//! command dispatch and CSV output.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

use std::path::Path;

pub use config::{parse_config, Config, ConfigError, RunConfig, SweepConfig};
pub use error::CliError;

pub fn load_config(path: &Path) -> Result<Config, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })?;
    Ok(parse_config(&text)?)
}

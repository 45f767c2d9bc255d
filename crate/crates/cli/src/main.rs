use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use collsync_cli::{commands, load_config, CliError, Config};

#[derive(Parser)]
#[command(name = "collsync", version, about = "Collision-model simulator for spontaneous spin synchronization")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Single trajectory: trace.csv and pearson.csv.
    Trace { config: PathBuf },
    /// Final-C12 grid over two parameters: sweep.csv.
    Sweep { config: PathBuf },
    /// Both correlation strategies side by side.
    CompareStrategies { config: PathBuf },
    /// One Pearson series per (temp1, temp2) pair.
    ThermalScan { config: PathBuf },
}

type Handler = fn(&Config) -> Result<(), CliError>;

fn run(cli: Cli) -> Result<(), CliError> {
    let (path, f): (PathBuf, Handler) = match cli.command {
        Command::Trace { config } => (config, commands::cmd_trace),
        Command::Sweep { config } => (config, commands::cmd_sweep),
        Command::CompareStrategies { config } => (config, commands::cmd_compare_strategies),
        Command::ThermalScan { config } => (config, commands::cmd_thermal_scan),
    };
    f(&load_config(&path)?)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            log::error!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

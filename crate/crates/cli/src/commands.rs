//! The four subcommands. Each reads a parsed config and writes CSV files
//! into the configured output directory.

use std::fs;
use std::path::{Path, PathBuf};

use collsync::collision::{run_trajectory, ModelParams, Strategy, Trajectory};
use collsync::observables::SystemSpin;
use collsync::sweep::{run_sweep, run_sweep_with_threads, SweepGrid};
use collsync::sync::{final_sync_value, sliding_pearson, PearsonSeries};
use log::{info, warn};

use crate::config::{Config, RunConfig, SweepConfig};
use crate::error::CliError;
use crate::output;

/// Worker-thread count for sweeps; results do not depend on it.
pub const THREADS_ENV: &str = "COLLSYNC_THREADS";

fn write(dir: &Path, name: &str, contents: &str) -> Result<PathBuf, CliError> {
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|source| CliError::Io { path: path.clone(), source })?;
    info!("wrote {}", path.display());
    Ok(path)
}

fn prepare_output(cfg: &RunConfig) -> Result<&Path, CliError> {
    fs::create_dir_all(&cfg.output).map_err(|source| CliError::Io { path: cfg.output.clone(), source })?;
    Ok(&cfg.output)
}

fn simulate(cfg: &RunConfig, params: &ModelParams) -> Result<(Trajectory, PearsonSeries), CliError> {
    let t = run_trajectory(&cfg.init, params, cfg.n_collisions)?;
    let x = t.series(cfg.observable, SystemSpin::S1);
    let y = t.series(cfg.observable, SystemSpin::S2);
    let series = sliding_pearson(&x, &y, cfg.window)?;
    info!(
        "{} strategy, T = ({}, {}): final C12 = {:?}, worst drift {:e}",
        params.strategy.as_str(),
        params.temp1,
        params.temp2,
        final_sync_value(&series)?,
        t.drift.worst()
    );
    Ok((t, series))
}

pub fn cmd_trace(cfg: &Config) -> Result<(), CliError> {
    if matches!(cfg, Config::Sweep(_)) {
        warn!("axis tables are ignored by `trace`");
    }
    let cfg = cfg.run();
    let dir = prepare_output(cfg)?;
    let (t, series) = simulate(cfg, &cfg.params)?;
    write(dir, "trace.csv", &output::trace_csv(&t.records))?;
    write(dir, "pearson.csv", &output::pearson_csv(&series))?;
    Ok(())
}

/// Runs both strategies and writes `trace_<strategy>.csv` and
/// `pearson_<strategy>.csv` for each.
pub fn cmd_compare_strategies(cfg: &Config) -> Result<(), CliError> {
    let cfg = cfg.run();
    let dir = prepare_output(cfg)?;
    for strategy in [Strategy::KeepCorrelations, Strategy::EraseCorrelations] {
        let params = ModelParams { strategy, ..cfg.params };
        let (t, series) = simulate(cfg, &params)?;
        let tag = strategy.as_str();
        info!("{tag}: first window with C12 <= -0.9 starts at {:?}", series.first_start_where(|c| c <= -0.9));
        write(dir, &format!("trace_{tag}.csv"), &output::trace_csv(&t.records))?;
        write(dir, &format!("pearson_{tag}.csv"), &output::pearson_csv(&series))?;
    }
    Ok(())
}

/// Writes `pearson_<k>.csv` for the k-th temperature pair plus a
/// `thermal_scan.csv` summary of the final values.
pub fn cmd_thermal_scan(cfg: &Config) -> Result<(), CliError> {
    let cfg = cfg.run();
    let pairs = cfg
        .temperatures
        .as_ref()
        .ok_or_else(|| CliError::Usage("thermal-scan needs a `temperatures` list of [temp1, temp2] pairs".into()))?;
    let dir = prepare_output(cfg)?;
    let mut summary = Vec::with_capacity(pairs.len());
    for (k, &(temp1, temp2)) in pairs.iter().enumerate() {
        let params = ModelParams { temp1, temp2, ..cfg.params };
        let (_, series) = simulate(cfg, &params)?;
        write(dir, &format!("pearson_{k}.csv"), &output::pearson_csv(&series))?;
        summary.push((temp1, temp2, final_sync_value(&series)?));
    }
    write(dir, "thermal_scan.csv", &output::thermal_summary_csv(&summary))?;
    Ok(())
}

fn threads_from_env() -> Result<Option<usize>, CliError> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(CliError::Usage(format!("{THREADS_ENV} = '{v}' is not a positive integer"))),
        },
    }
}

pub fn run_sweep_config(cfg: &SweepConfig) -> Result<SweepGrid, CliError> {
    let spec = cfg.spec();
    let grid = match threads_from_env()? {
        Some(n) => run_sweep_with_threads(&spec, n)?,
        None => run_sweep(&spec)?,
    };
    if let Some(check) = grid.fast_path_check {
        info!("fast path matches direct steps at grid index {} within {:e}", check.index, check.max_deviation);
    }
    let missing = grid.values.iter().filter(|v| v.is_none()).count();
    if missing > 0 {
        warn!("{missing} of {} grid points have no value", grid.values.len());
    }
    Ok(grid)
}

pub fn cmd_sweep(cfg: &Config) -> Result<(), CliError> {
    let Config::Sweep(sweep) = cfg else {
        return Err(CliError::Usage("sweep needs [axis1] and [axis2] tables in the config".into()));
    };
    let dir = prepare_output(&sweep.run)?;
    let grid = run_sweep_config(sweep)?;
    write(dir, "sweep.csv", &output::sweep_csv(&grid))?;
    Ok(())
}

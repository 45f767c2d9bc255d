//! Final-C₁₂ maps over two-parameter grids.
//!
//! Every grid point is an independent trajectory; results are assembled in
//! index order so the grid does not depend on scheduling or thread count.

use std::fmt;

use log::warn;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::collision::{run_trajectory_with, DriftReport, InitialStateSpec, ModelParams, Propagation, Strategy, Trajectory};
use crate::error::{Error, Result};
use crate::observables::{Axis, SystemSpin};
use crate::sync::{final_sync_value, sliding_pearson, WindowSpec};

/// Largest tolerated deviation between the channel fast path and direct steps.
pub const FAST_PATH_TOL: f64 = 1e-10;

/// Default |C₁₂| threshold for [`classify`].
pub const DEFAULT_SYNC_THRESHOLD: f64 = 0.95;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SweepParam {
    /// Spin-spin coupling angle.
    GSs,
    /// Partial-SWAP strength.
    Gamma,
    /// `ω₂ / ω₁`, keeping `ω₁` from the base parameters.
    OmegaRatio,
}

impl SweepParam {
    pub fn as_str(self) -> &'static str {
        match self {
            SweepParam::GSs => "g_ss",
            SweepParam::Gamma => "gamma",
            SweepParam::OmegaRatio => "omega_ratio",
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "g_ss" => Ok(SweepParam::GSs),
            "gamma" => Ok(SweepParam::Gamma),
            "omega_ratio" => Ok(SweepParam::OmegaRatio),
            other => Err(Error::Input(format!("unknown sweep parameter '{other}' (expected g_ss, gamma or omega_ratio)"))),
        }
    }

    fn apply(self, params: &mut ModelParams, value: f64) {
        match self {
            SweepParam::GSs => params.g_ss = value,
            SweepParam::Gamma => params.gamma = value,
            SweepParam::OmegaRatio => params.omega2 = value * params.omega1,
        }
    }
}

impl fmt::Display for SweepParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Linearly spaced values of one parameter, endpoints included.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepAxis {
    pub param: SweepParam,
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl SweepAxis {
    pub fn new(param: SweepParam, min: f64, max: f64, count: usize) -> Result<Self> {
        let axis = Self { param, min, max, count };
        axis.validate()?;
        Ok(axis)
    }

    pub fn validate(&self) -> Result<()> {
        if self.count < 2 {
            return Err(Error::Input(format!("axis {} needs at least 2 points, got {}", self.param, self.count)));
        }
        if !self.min.is_finite() || !self.max.is_finite() {
            return Err(Error::Input(format!("axis {} bounds must be finite", self.param)));
        }
        if self.min > self.max {
            return Err(Error::Input(format!("axis {} has min {} > max {}", self.param, self.min, self.max)));
        }
        Ok(())
    }

    pub fn value(&self, i: usize) -> f64 {
        if i + 1 == self.count {
            return self.max;
        }
        self.min + (self.max - self.min) * i as f64 / (self.count - 1) as f64
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.count).map(|i| self.value(i)).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    /// Grid rows.
    pub axis1: SweepAxis,
    /// Grid columns.
    pub axis2: SweepAxis,
    pub base: ModelParams,
    pub init: InitialStateSpec,
    pub n_max: usize,
    pub window: WindowSpec,
    /// Spin component whose two series are correlated.
    pub observable: Axis,
    /// Seed for picking the grid point re-run along the direct path.
    pub check_seed: u64,
}

impl SweepSpec {
    pub fn new(axis1: SweepAxis, axis2: SweepAxis, base: ModelParams, n_max: usize, window: WindowSpec) -> Self {
        Self { axis1, axis2, base, init: InitialStateSpec::default(), n_max, window, observable: Axis::X, check_seed: 0 }
    }

    pub fn validate(&self) -> Result<()> {
        self.axis1.validate()?;
        self.axis2.validate()?;
        if self.axis1.param == self.axis2.param {
            return Err(Error::Input(format!("both sweep axes vary {}", self.axis1.param)));
        }
        if self.n_max < self.window.width() {
            return Err(Error::Input(format!(
                "n_max = {} is shorter than one window of {}",
                self.n_max,
                self.window.width()
            )));
        }
        self.base.validate()?;
        self.init.validate()?;
        for (a, b) in [(&self.axis1, &self.axis2), (&self.axis2, &self.axis1)] {
            for v in [a.min, a.max] {
                let mut p = self.base;
                a.param.apply(&mut p, v);
                b.param.apply(&mut p, b.min);
                p.validate().map_err(|e| Error::Input(format!("axis {} value {v}: {e}", a.param)))?;
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.axis1.count * self.axis2.count
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Model parameters at row `i`, column `j`.
    pub fn params_at(&self, i: usize, j: usize) -> ModelParams {
        let mut p = self.base;
        self.axis1.param.apply(&mut p, self.axis1.value(i));
        self.axis2.param.apply(&mut p, self.axis2.value(j));
        p
    }

    /// The same sweep with rows and columns exchanged.
    pub fn transposed(&self) -> Self {
        Self { axis1: self.axis2, axis2: self.axis1, ..self.clone() }
    }

    fn propagation(&self) -> Propagation {
        match self.base.strategy {
            Strategy::KeepCorrelations => Propagation::Channel,
            Strategy::EraseCorrelations => Propagation::Direct,
        }
    }
}

/// Outcome of re-running one grid point along the direct path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FastPathCheck {
    /// Row-major grid index of the checked point.
    pub index: usize,
    /// Largest entrywise difference over all recorded expectations and the
    /// final carried state.
    pub max_deviation: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepGrid {
    pub axis1: SweepAxis,
    pub axis2: SweepAxis,
    /// Final C₁₂ per point, row-major with `axis1` as rows; `None` where the
    /// trajectory failed or the last windows were all degenerate.
    pub values: Vec<Option<f64>>,
    /// Worst invariant deviations over every successful point.
    pub drift: DriftReport,
    /// Present for sweeps that use the channel fast path.
    pub fast_path_check: Option<FastPathCheck>,
}

impl SweepGrid {
    pub fn rows(&self) -> usize {
        self.axis1.count
    }

    pub fn cols(&self) -> usize {
        self.axis2.count
    }

    pub fn get(&self, i: usize, j: usize) -> Option<f64> {
        self.values[i * self.cols() + j]
    }

    pub fn row(&self, i: usize) -> &[Option<f64>] {
        &self.values[i * self.cols()..(i + 1) * self.cols()]
    }

    /// Classification of every cell under the given threshold; `None` for
    /// missing cells.
    pub fn classes(&self, threshold: f64) -> Result<Vec<Option<SyncClass>>> {
        self.values.iter().map(|v| v.map(|c| classify_with(c, threshold)).transpose()).collect()
    }
}

fn point_trajectory(spec: &SweepSpec, index: usize, propagation: Propagation) -> Result<Trajectory> {
    let params = spec.params_at(index / spec.axis2.count, index % spec.axis2.count);
    run_trajectory_with(&spec.init, &params, spec.n_max, propagation)
}

fn point_value(spec: &SweepSpec, index: usize) -> Result<(Option<f64>, DriftReport)> {
    let t = point_trajectory(spec, index, spec.propagation())?;
    let x = t.series(spec.observable, SystemSpin::S1);
    let y = t.series(spec.observable, SystemSpin::S2);
    let value = final_sync_value(&sliding_pearson(&x, &y, spec.window)?)?;
    Ok((value, t.drift))
}

fn trajectory_deviation(a: &Trajectory, b: &Trajectory) -> f64 {
    let records = a.records.iter().zip(&b.records).map(|(r, s)| {
        [r.sx1 - s.sx1, r.sx2 - s.sx2, r.sy1 - s.sy1, r.sy2 - s.sy2, r.sz1 - s.sz1, r.sz2 - s.sz2]
            .iter()
            .fold(0.0f64, |m, d| m.max(d.abs()))
    });
    let state = match (a.final_state.joint(), b.final_state.joint()) {
        (Some(p), Some(q)) => p.matrix().max_abs_diff(q.matrix()),
        _ => f64::INFINITY,
    };
    records.fold(state, f64::max)
}

fn check_fast_path(spec: &SweepSpec) -> Result<FastPathCheck> {
    let index = ChaCha8Rng::seed_from_u64(spec.check_seed).gen_range(0..spec.len());
    let fast = point_trajectory(spec, index, Propagation::Channel)?;
    let direct = point_trajectory(spec, index, Propagation::Direct)?;
    let max_deviation = trajectory_deviation(&fast, &direct);
    if !(max_deviation <= FAST_PATH_TOL) {
        return Err(Error::Numerical(format!(
            "channel fast path deviates from direct steps by {max_deviation:e} at grid index {index}"
        )));
    }
    Ok(FastPathCheck { index, max_deviation })
}

/// Evaluates the grid on the current rayon pool.
///
/// Only an invalid spec or a failed fast-path check fails the whole sweep;
/// a failing point is logged and left missing.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepGrid> {
    spec.validate()?;
    let results: Vec<_> = (0..spec.len()).into_par_iter().map(|k| point_value(spec, k)).collect();
    let mut drift = DriftReport::default();
    let values = results
        .into_iter()
        .enumerate()
        .map(|(k, r)| match r {
            Ok((v, d)) => {
                drift.max_hermiticity = drift.max_hermiticity.max(d.max_hermiticity);
                drift.max_trace_error = drift.max_trace_error.max(d.max_trace_error);
                drift.min_eigenvalue = drift.min_eigenvalue.min(d.min_eigenvalue);
                v
            }
            Err(e) => {
                let (i, j) = (k / spec.axis2.count, k % spec.axis2.count);
                warn!(
                    "sweep point ({}={}, {}={}) failed: {e}",
                    spec.axis1.param,
                    spec.axis1.value(i),
                    spec.axis2.param,
                    spec.axis2.value(j)
                );
                None
            }
        })
        .collect();
    let fast_path_check = match spec.propagation() {
        Propagation::Channel => Some(check_fast_path(spec)?),
        Propagation::Direct => None,
    };
    Ok(SweepGrid { axis1: spec.axis1, axis2: spec.axis2, values, drift, fast_path_check })
}

/// [`run_sweep`] on a dedicated pool of `threads` workers.
pub fn run_sweep_with_threads(spec: &SweepSpec, threads: usize) -> Result<SweepGrid> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Input(format!("cannot start {threads} worker threads: {e}")))?;
    pool.install(|| run_sweep(spec))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SyncClass {
    Synchronized,
    AntiSynchronized,
    Unsynchronized,
}

impl SyncClass {
    pub fn as_str(self) -> &'static str {
        match self {
            SyncClass::Synchronized => "synchronized",
            SyncClass::AntiSynchronized => "anti-synchronized",
            SyncClass::Unsynchronized => "unsynchronized",
        }
    }
}

pub fn classify(c12: f64) -> Result<SyncClass> {
    classify_with(c12, DEFAULT_SYNC_THRESHOLD)
}

pub fn classify_with(c12: f64, threshold: f64) -> Result<SyncClass> {
    if !(-1.0..=1.0).contains(&c12) {
        return Err(Error::Input(format!("C12 = {c12} outside [-1, 1]")));
    }
    if !(threshold > 0.0 && threshold <= 1.0) {
        return Err(Error::Input(format!("classification threshold {threshold} outside (0, 1]")));
    }
    Ok(if c12 >= threshold {
        SyncClass::Synchronized
    } else if c12 <= -threshold {
        SyncClass::AntiSynchronized
    } else {
        SyncClass::Unsynchronized
    })
}

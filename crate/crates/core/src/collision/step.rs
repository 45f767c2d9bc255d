use num_complex::Complex64;

use super::channel::StepChannel;
use super::labels::{self, pos, FULL_QUBITS};
use super::params::{InitialStateSpec, ModelParams, Strategy};
use super::state::{fresh_pair, initial_carried_state, CarriedParts, CarriedState, DriftReport, StepRecord, Trajectory};
use super::unitaries::{build_step_unitaries, StepUnitaries};
use crate::error::{Error, Result};
use crate::linalg::{conjugate_local, kron, trace_out_positions, ComplexMatrix, DensityMatrix, StateHealth, SubsystemLayout, Tolerances};
use crate::observables::{concurrence, mutual_information, single_qubit_expectation, Axis};

/// Applies every step factor to an operator on the six-qubit register.
/// Equivalent to conjugation by `u_total`.
pub(crate) fn evolve_register(full: &mut ComplexMatrix, u: &StepUnitaries) -> Result<()> {
    for f in u.factors() {
        conjugate_local(full, f.op, f.targets, FULL_QUBITS)?;
    }
    Ok(())
}

/// Validates a freshly produced state against the drift tolerances.
pub(crate) fn admit(matrix: ComplexMatrix, layout: SubsystemLayout, collision: usize) -> Result<(DensityMatrix, StateHealth)> {
    let health = StateHealth::measure(&matrix)?;
    if let Some((invariant, value)) = health.violation(&Tolerances::DRIFT) {
        return Err(Error::NumericalDrift { collision, invariant, value });
    }
    Ok((DensityMatrix::with_tolerances(matrix, layout, &Tolerances::DRIFT)?, health))
}

/// Observables of the system pair after collision `n`.
pub(crate) fn record_from_pair(pair: &ComplexMatrix, n: usize) -> Result<StepRecord> {
    let layout = SubsystemLayout::new([labels::S1, labels::S2])?;
    let rho = DensityMatrix::with_tolerances(pair.clone(), layout, &Tolerances::DRIFT)
        .map_err(|e| match e {
            Error::NotHermitian(v) => Error::NumericalDrift { collision: n, invariant: "hermiticity", value: v },
            Error::BadTrace(v) => Error::NumericalDrift { collision: n, invariant: "trace", value: v },
            Error::NotPositive(v) => Error::NumericalDrift { collision: n, invariant: "positivity", value: v },
            other => other,
        })?;
    let s1 = trace_out_positions(pair, &[0], 2);
    let s2 = trace_out_positions(pair, &[1], 2);
    Ok(StepRecord {
        n,
        sx1: single_qubit_expectation(&s1, Axis::X)?,
        sx2: single_qubit_expectation(&s2, Axis::X)?,
        sy1: single_qubit_expectation(&s1, Axis::Y)?,
        sy2: single_qubit_expectation(&s2, Axis::Y)?,
        sz1: single_qubit_expectation(&s1, Axis::Z)?,
        sz2: single_qubit_expectation(&s2, Axis::Z)?,
        concurrence: concurrence(&rho)?,
        mutual_info: mutual_information(&rho)?,
    })
}

/// One collision step. Returns the next carried state, the record of the
/// system pair taken right after the step unitary (before any discarding),
/// and the health of each stored matrix.
pub(crate) fn step_with_health(
    state: &CarriedState,
    u: &StepUnitaries,
    params: &ModelParams,
) -> Result<(CarriedState, StepRecord, Vec<StateHealth>)> {
    if state.strategy() != params.strategy {
        return Err(Error::Input(format!(
            "carried state uses the {} strategy but parameters select {}",
            state.strategy().as_str(),
            params.strategy.as_str()
        )));
    }
    let n = state.collisions + 1;
    let fresh = fresh_pair(params)?;
    // Erase strategy: evolve the product of unit-trace factors and give each
    // new marginal back its own trace. Rebuilding the product from unnormalized
    // factors would feed every factor's trace error into all three marginals
    // and triple the error each step.
    let (carried, own_traces) = match &state.parts {
        CarriedParts::Joint(rho) => (rho.matrix().clone(), [1.0; 3]),
        CarriedParts::Product { s1, s2, env } => {
            let t = [s1.matrix().trace().re, s2.matrix().trace().re, env.matrix().trace().re];
            let unit = |m: &ComplexMatrix, t: f64| m.scale(Complex64::new(1.0 / t, 0.0));
            let product = kron(&kron(&unit(s1.matrix(), t[0]), &unit(s2.matrix(), t[1])), &unit(env.matrix(), t[2]));
            (product, t)
        }
    };
    let mut full = kron(&carried, fresh.matrix());
    evolve_register(&mut full, u)?;
    full.hermitize();

    let record = record_from_pair(&trace_out_positions(&full, &[pos::S1, pos::S2], FULL_QUBITS), n)?;

    let (parts, health) = match params.strategy {
        Strategy::KeepCorrelations => {
            let m = trace_out_positions(&full, &[pos::S1, pos::S2, pos::E1_NEXT, pos::E2_NEXT], FULL_QUBITS);
            let (rho, h) = admit(m, labels::carried_layout(), n)?;
            (CarriedParts::Joint(rho), vec![h])
        }
        Strategy::EraseCorrelations => {
            let marginal = |keep: &[usize], t: f64| trace_out_positions(&full, keep, FULL_QUBITS).scale(Complex64::new(t, 0.0));
            let (s1, h1) = admit(marginal(&[pos::S1], own_traces[0]), SubsystemLayout::new([labels::S1])?, n)?;
            let (s2, h2) = admit(marginal(&[pos::S2], own_traces[1]), SubsystemLayout::new([labels::S2])?, n)?;
            let (env, h3) = admit(
                marginal(&[pos::E1_NEXT, pos::E2_NEXT], own_traces[2]),
                SubsystemLayout::new([labels::E1, labels::E2])?,
                n,
            )?;
            (CarriedParts::Product { s1, s2, env }, vec![h1, h2, h3])
        }
    };
    Ok((CarriedState { parts, collisions: n }, record, health))
}

/// Advances the carried state through one full collision step.
pub fn step(state: &CarriedState, u: &StepUnitaries, params: &ModelParams) -> Result<(CarriedState, StepRecord)> {
    let (next, record, _) = step_with_health(state, u, params)?;
    Ok((next, record))
}

/// How a trajectory is propagated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Propagation {
    /// Rebuild and evolve the six-qubit register every step.
    Direct,
    /// Iterate the precomputed linear step channel (keep strategy only).
    Channel,
}

/// Runs `n_max` collisions from the initial state using the direct path.
pub fn run_trajectory(init: &InitialStateSpec, params: &ModelParams, n_max: usize) -> Result<Trajectory> {
    run_trajectory_with(init, params, n_max, Propagation::Direct)
}

pub fn run_trajectory_with(
    init: &InitialStateSpec,
    params: &ModelParams,
    n_max: usize,
    propagation: Propagation,
) -> Result<Trajectory> {
    if n_max == 0 {
        return Err(Error::Input("a trajectory needs at least one collision".into()));
    }
    let u = build_step_unitaries(params)?;
    let mut state = initial_carried_state(init, params)?;
    let channel = match propagation {
        Propagation::Direct => None,
        Propagation::Channel => Some(StepChannel::build(&u, params)?),
    };
    let mut records = Vec::with_capacity(n_max);
    let mut drift = DriftReport::default();
    for _ in 0..n_max {
        let (next, record, health) = match &channel {
            None => step_with_health(&state, &u, params)?,
            Some(ch) => ch.step_with_health(&state)?,
        };
        health.iter().for_each(|h| drift.absorb(h));
        records.push(record);
        state = next;
    }
    Ok(Trajectory { records, drift, final_state: state })
}

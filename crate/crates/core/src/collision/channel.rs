use num_complex::Complex64;

use super::labels::{self, pos, FULL_QUBITS};
use super::params::{ModelParams, Strategy};
use super::state::{fresh_pair, CarriedParts, CarriedState, StepRecord};
use super::step::{admit, evolve_register, record_from_pair};
use super::unitaries::StepUnitaries;
use crate::error::{Error, Result};
use crate::linalg::{kron, trace_out_positions, ComplexMatrix, StateHealth};

const CARRIED_DIM: usize = 16;
const SUPER_DIM: usize = CARRIED_DIM * CARRIED_DIM;

/// Matrix of the linear map `ρ ↦ Tr_{e1e2}[U (ρ ⊗ ρ_fresh) U†]` on row-major
/// vectorized 16x16 carried states.
#[derive(Debug, Clone, PartialEq)]
pub struct StepChannel {
    matrix: ComplexMatrix,
}

/// The keep-strategy step map applied to an arbitrary 16x16 operator.
fn apply_step_map(x: &ComplexMatrix, fresh: &ComplexMatrix, u: &StepUnitaries) -> Result<ComplexMatrix> {
    let mut full = kron(x, fresh);
    evolve_register(&mut full, u)?;
    Ok(trace_out_positions(&full, &[pos::S1, pos::S2, pos::E1_NEXT, pos::E2_NEXT], FULL_QUBITS))
}

impl StepChannel {
    /// Builds the channel matrix column by column from the images of the
    /// 256 matrix units.
    pub fn build(u: &StepUnitaries, params: &ModelParams) -> Result<Self> {
        if params.strategy != Strategy::KeepCorrelations {
            return Err(Error::Strategy);
        }
        let fresh = fresh_pair(params)?;
        let mut matrix = ComplexMatrix::zeros(SUPER_DIM, SUPER_DIM);
        let mut unit = ComplexMatrix::zeros(CARRIED_DIM, CARRIED_DIM);
        for a in 0..CARRIED_DIM {
            for b in 0..CARRIED_DIM {
                unit[(a, b)] = Complex64::new(1.0, 0.0);
                let image = apply_step_map(&unit, fresh.matrix(), u)?;
                unit[(a, b)] = Complex64::new(0.0, 0.0);
                let col = a * CARRIED_DIM + b;
                for (row, &v) in image.as_slice().iter().enumerate() {
                    matrix[(row, col)] = v;
                }
            }
        }
        Ok(Self { matrix })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// Applies the map to a 16x16 operator, without any validation.
    pub fn apply_operator(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        if x.rows() != CARRIED_DIM || x.cols() != CARRIED_DIM {
            return Err(Error::Shape(format!("step channel acts on 16x16 operators, got {}x{}", x.rows(), x.cols())));
        }
        let v = x.as_slice();
        let m = self.matrix.as_slice();
        let mut out = ComplexMatrix::zeros(CARRIED_DIM, CARRIED_DIM);
        for (row, o) in out.as_mut_slice().iter_mut().enumerate() {
            let r = &m[row * SUPER_DIM..(row + 1) * SUPER_DIM];
            *o = r.iter().zip(v).map(|(a, b)| a * b).sum();
        }
        Ok(out)
    }

    pub(crate) fn step_with_health(&self, state: &CarriedState) -> Result<(CarriedState, StepRecord, Vec<StateHealth>)> {
        let CarriedParts::Joint(rho) = &state.parts else {
            return Err(Error::Strategy);
        };
        let n = state.collisions + 1;
        let mut next = self.apply_operator(rho.matrix())?;
        next.hermitize();
        // The pair marginal after discarding e1, e2 equals the pre-discard one.
        let record = record_from_pair(&trace_out_positions(&next, &[0, 1], 4), n)?;
        let (rho, h) = admit(next, labels::carried_layout(), n)?;
        Ok((CarriedState { parts: CarriedParts::Joint(rho), collisions: n }, record, vec![h]))
    }

    /// One keep-strategy step through the channel.
    pub fn step(&self, state: &CarriedState) -> Result<(CarriedState, StepRecord)> {
        let (next, record, _) = self.step_with_health(state)?;
        Ok((next, record))
    }
}

pub fn build_step_channel(u: &StepUnitaries, params: &ModelParams) -> Result<StepChannel> {
    StepChannel::build(u, params)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::collision::{build_step_unitaries, initial_carried_state, step, InitialStateSpec};
    use crate::linalg::{partial_trace, DensityMatrix};

    #[test]
    fn erase_strategy_has_no_channel() {
        let params = ModelParams { strategy: Strategy::EraseCorrelations, ..ModelParams::reference() };
        let u = build_step_unitaries(&params).unwrap();
        assert_eq!(build_step_channel(&u, &params), Err(Error::Strategy));
    }

    #[test]
    fn preserves_trace_of_maximally_mixed_state() {
        let params = ModelParams::reference();
        let u = build_step_unitaries(&params).unwrap();
        let ch = build_step_channel(&u, &params).unwrap();
        let mixed = DensityMatrix::maximally_mixed(labels::carried_layout());
        let out = ch.apply_operator(mixed.matrix()).unwrap();
        assert!((out.trace() - Complex64::new(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn fifty_iterations_match_direct_steps() {
        let params = ModelParams::reference();
        let u = build_step_unitaries(&params).unwrap();
        let ch = build_step_channel(&u, &params).unwrap();
        let mut direct = initial_carried_state(&InitialStateSpec::default(), &params).unwrap();
        let mut fast = direct.clone();
        for _ in 0..50 {
            let (d, rd) = step(&direct, &u, &params).unwrap();
            let (f, rf) = ch.step(&fast).unwrap();
            assert!((rd.sx1 - rf.sx1).abs() < 1e-10 && (rd.sx2 - rf.sx2).abs() < 1e-10);
            direct = d;
            fast = f;
        }
        let diff = direct.joint().unwrap().matrix().max_abs_diff(fast.joint().unwrap().matrix());
        assert!(diff <= 1e-10, "max entry difference {diff:e}");
        assert_eq!(fast.collisions(), 50);
    }

    #[test]
    fn trivial_generators_leave_system_block_alone() {
        // All system generators vanish: g_se = g_ss = 0 and ω = 0.
        let params = ModelParams { g_se: 0.0, g_ss: 0.0, omega1: 0.0, omega2: 0.0, ..ModelParams::reference() };
        let u = build_step_unitaries(&params).unwrap();
        let ch = build_step_channel(&u, &params).unwrap();
        let state = initial_carried_state(&InitialStateSpec { theta1: 0.3, phi1: 1.1, theta2: 1.2, phi2: -0.4 }, &params).unwrap();
        let before = partial_trace(state.joint().unwrap(), &[labels::S1, labels::S2]).unwrap();
        let (after, _) = ch.step(&state).unwrap();
        let after = partial_trace(after.joint().unwrap(), &[labels::S1, labels::S2]).unwrap();
        assert!(after.matrix().max_abs_diff(before.matrix()) < 1e-14);
    }
}

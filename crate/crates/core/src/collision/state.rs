use super::labels;
use super::params::{InitialStateSpec, ModelParams, Strategy};
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, DensityMatrix, StateHealth, SubsystemLayout};

/// Temperatures at or above this multiple of the level splitting are treated
/// as infinite.
pub const INFINITE_TEMPERATURE_RATIO: f64 = 1e12;

/// Gibbs state of a spin with self-Hamiltonian `−(ω/2)σᶻ` at temperature
/// `temp` (k = 1), labeled `label`.
///
/// Zero temperature gives the ground state `|0⟩⟨0|`; a vanishing splitting at
/// positive temperature gives `𝕀/2`.
pub fn thermal_state_labeled(temp: f64, omega: f64, label: &str) -> Result<DensityMatrix> {
    if !(temp >= 0.0) || !temp.is_finite() {
        return Err(Error::Domain(format!("temperature {temp} must be finite and non-negative")));
    }
    if !(omega >= 0.0) || !omega.is_finite() {
        return Err(Error::Domain(format!("self-energy {omega} must be finite and non-negative")));
    }
    let layout = SubsystemLayout::new([label])?;
    let (p0, p1) = if temp == 0.0 {
        (1.0, 0.0)
    } else if temp >= INFINITE_TEMPERATURE_RATIO * omega {
        (0.5, 0.5)
    } else {
        // Populations ∝ e^{±ω/(2T)}; normalized through the ratio e^{−ω/T}.
        let r = (-omega / temp).exp();
        (1.0 / (1.0 + r), r / (1.0 + r))
    };
    DensityMatrix::new(ComplexMatrix::diagonal_real(&[p0, p1]), layout)
}

pub fn thermal_state(temp: f64, omega: f64) -> Result<DensityMatrix> {
    thermal_state_labeled(temp, omega, "e")
}

/// Fresh environment pair `ρ(e1') ⊗ ρ(e2')`.
pub(crate) fn fresh_pair(params: &ModelParams) -> Result<DensityMatrix> {
    let a = thermal_state_labeled(params.temp1, params.omega1, labels::E1_NEXT)?;
    let b = thermal_state_labeled(params.temp2, params.omega2, labels::E2_NEXT)?;
    a.tensor(&b)
}

/// Environment pair occupying the slots of the current collision.
pub(crate) fn current_pair(params: &ModelParams) -> Result<DensityMatrix> {
    let a = thermal_state_labeled(params.temp1, params.omega1, labels::E1)?;
    let b = thermal_state_labeled(params.temp2, params.omega2, labels::E2)?;
    a.tensor(&b)
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum CarriedParts {
    /// Joint state on `[s1, s2, e1, e2]`.
    Joint(DensityMatrix),
    /// Independent marginals; correlations between them are not stored.
    Product { s1: DensityMatrix, s2: DensityMatrix, env: DensityMatrix },
}

/// State propagated between collision steps: the two system spins and the
/// environment pair they meet next.
#[derive(Debug, Clone, PartialEq)]
pub struct CarriedState {
    pub(crate) parts: CarriedParts,
    pub(crate) collisions: usize,
}

impl CarriedState {
    /// Number of collision steps already applied.
    pub fn collisions(&self) -> usize {
        self.collisions
    }

    pub fn strategy(&self) -> Strategy {
        match self.parts {
            CarriedParts::Joint(_) => Strategy::KeepCorrelations,
            CarriedParts::Product { .. } => Strategy::EraseCorrelations,
        }
    }

    /// The stored joint state (keep strategy only).
    pub fn joint(&self) -> Option<&DensityMatrix> {
        match &self.parts {
            CarriedParts::Joint(rho) => Some(rho),
            CarriedParts::Product { .. } => None,
        }
    }

    /// The stored marginals `(ρ_{s1}, ρ_{s2}, ρ_{e1e2})` (erase strategy only).
    pub fn marginals(&self) -> Option<(&DensityMatrix, &DensityMatrix, &DensityMatrix)> {
        match &self.parts {
            CarriedParts::Joint(_) => None,
            CarriedParts::Product { s1, s2, env } => Some((s1, s2, env)),
        }
    }

    /// Builds a keep-strategy carried state from an arbitrary joint state on
    /// `[s1, s2, e1, e2]`.
    pub fn from_joint(rho: DensityMatrix, collisions: usize) -> Result<Self> {
        if rho.layout().labels() != labels::CARRIED {
            return Err(Error::Layout(format!("carried state must be on {:?}", labels::CARRIED)));
        }
        Ok(Self { parts: CarriedParts::Joint(rho), collisions })
    }

    /// The stored matrix on `[s1, s2, e1, e2]`, assembling the product for
    /// the erase strategy.
    pub fn joint_matrix(&self) -> Result<DensityMatrix> {
        match &self.parts {
            CarriedParts::Joint(rho) => Ok(rho.clone()),
            CarriedParts::Product { s1, s2, env } => s1.tensor(s2)?.tensor(env),
        }
    }

    /// Health of every stored density matrix.
    pub fn health(&self) -> Result<Vec<StateHealth>> {
        match &self.parts {
            CarriedParts::Joint(rho) => Ok(vec![rho.health()?]),
            CarriedParts::Product { s1, s2, env } => Ok(vec![s1.health()?, s2.health()?, env.health()?]),
        }
    }
}

/// Two-qubit system state `ρ_{s1} ⊗ ρ_{s2}` for the given spec, as separate factors.
pub fn initial_system_states(init: &InitialStateSpec) -> Result<(DensityMatrix, DensityMatrix)> {
    init.validate()?;
    let s1 = DensityMatrix::pure(&init.ket1(), SubsystemLayout::new([labels::S1])?)?;
    let s2 = DensityMatrix::pure(&init.ket2(), SubsystemLayout::new([labels::S2])?)?;
    Ok((s1, s2))
}

/// State before the first collision: the system product state next to a
/// thermal environment pair.
pub fn initial_carried_state(init: &InitialStateSpec, params: &ModelParams) -> Result<CarriedState> {
    params.validate()?;
    let (s1, s2) = initial_system_states(init)?;
    let env = current_pair(params)?;
    let parts = match params.strategy {
        Strategy::KeepCorrelations => CarriedParts::Joint(s1.tensor(&s2)?.tensor(&env)?),
        Strategy::EraseCorrelations => CarriedParts::Product { s1, s2, env },
    };
    Ok(CarriedState { parts, collisions: 0 })
}

/// Observables recorded after collision `n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepRecord {
    pub n: usize,
    pub sx1: f64,
    pub sx2: f64,
    pub sy1: f64,
    pub sy2: f64,
    pub sz1: f64,
    pub sz2: f64,
    pub concurrence: f64,
    pub mutual_info: f64,
}

impl StepRecord {
    pub fn spin(&self, axis: crate::observables::Axis, spin: crate::observables::SystemSpin) -> f64 {
        use crate::observables::{Axis, SystemSpin};
        match (axis, spin) {
            (Axis::X, SystemSpin::S1) => self.sx1,
            (Axis::X, SystemSpin::S2) => self.sx2,
            (Axis::Y, SystemSpin::S1) => self.sy1,
            (Axis::Y, SystemSpin::S2) => self.sy2,
            (Axis::Z, SystemSpin::S1) => self.sz1,
            (Axis::Z, SystemSpin::S2) => self.sz2,
        }
    }
}

/// Worst-case invariant deviations seen over a trajectory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriftReport {
    pub max_hermiticity: f64,
    pub max_trace_error: f64,
    pub min_eigenvalue: f64,
}

impl Default for DriftReport {
    fn default() -> Self {
        Self { max_hermiticity: 0.0, max_trace_error: 0.0, min_eigenvalue: f64::INFINITY }
    }
}

impl DriftReport {
    pub(crate) fn absorb(&mut self, h: &StateHealth) {
        self.max_hermiticity = self.max_hermiticity.max(h.hermiticity);
        self.max_trace_error = self.max_trace_error.max(h.trace_error);
        self.min_eigenvalue = self.min_eigenvalue.min(h.min_eigenvalue);
    }

    /// Largest of the three deviations, counting only negative eigenvalues.
    pub fn worst(&self) -> f64 {
        self.max_hermiticity.max(self.max_trace_error).max((-self.min_eigenvalue).max(0.0))
    }
}

/// Per-collision records of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub records: Vec<StepRecord>,
    pub drift: DriftReport,
    pub final_state: CarriedState,
}

impl Trajectory {
    pub fn series(&self, axis: crate::observables::Axis, spin: crate::observables::SystemSpin) -> Vec<f64> {
        self.records.iter().map(|r| r.spin(axis, spin)).collect()
    }
}

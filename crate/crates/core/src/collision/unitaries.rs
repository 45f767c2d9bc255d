use num_complex::Complex64;

use super::labels::{pos, FULL_QUBITS};
use super::params::ModelParams;
use crate::error::Result;
use crate::linalg::{embed, kron, ComplexMatrix};

/// The six unitaries of one collision step and their product on the full
/// six-qubit register `[s1, s2, e1, e2, e1', e2']`.
#[derive(Debug, Clone, PartialEq)]
pub struct StepUnitaries {
    pub u_s1e1: ComplexMatrix,
    pub u_s2e2: ComplexMatrix,
    pub u_ss: ComplexMatrix,
    pub u_s1: ComplexMatrix,
    pub u_s2: ComplexMatrix,
    pub u_swap: ComplexMatrix,
    /// `U_{e2e1'} U_{s2} U_{s1} U_{s1s2} U_{s2e2} U_{s1e1}`, rightmost first.
    pub u_total: ComplexMatrix,
}

/// One factor of the step together with the register qubits it acts on.
pub(crate) struct Factor<'a> {
    pub op: &'a ComplexMatrix,
    pub targets: &'a [usize],
}

impl StepUnitaries {
    /// Factors in application order.
    pub(crate) fn factors(&self) -> [Factor<'_>; 6] {
        [
            Factor { op: &self.u_s1e1, targets: &[pos::S1, pos::E1] },
            Factor { op: &self.u_s2e2, targets: &[pos::S2, pos::E2] },
            Factor { op: &self.u_ss, targets: &[pos::S1, pos::S2] },
            Factor { op: &self.u_s1, targets: &[pos::S1] },
            Factor { op: &self.u_s2, targets: &[pos::S2] },
            Factor { op: &self.u_swap, targets: &[pos::E2, pos::E1_NEXT] },
        ]
    }
}

/// `(σˣσˣ + σʸσʸ) / 2`, the XX exchange generator with unit coupling.
pub fn exchange_generator() -> ComplexMatrix {
    let xx = kron(&ComplexMatrix::pauli_x(), &ComplexMatrix::pauli_x());
    let yy = kron(&ComplexMatrix::pauli_y(), &ComplexMatrix::pauli_y());
    (&xx + &yy).scale(Complex64::new(0.5, 0.0))
}

/// `σˣσˣ / 2`, the Ising generator with unit coupling.
pub fn ising_generator() -> ComplexMatrix {
    kron(&ComplexMatrix::pauli_x(), &ComplexMatrix::pauli_x()).scale(Complex64::new(0.5, 0.0))
}

/// `−σᶻ / 2`, the free spin Hamiltonian per unit self-energy.
pub fn free_generator() -> ComplexMatrix {
    ComplexMatrix::pauli_z().scale(Complex64::new(-0.5, 0.0))
}

/// `exp(−i g (σˣσˣ + σʸσʸ)/2)`: identity on `|00⟩, |11⟩`, rotation in the
/// single-excitation block.
pub fn exchange_unitary(g: f64) -> ComplexMatrix {
    let mut u = ComplexMatrix::identity(4);
    let (s, c) = g.sin_cos();
    u[(1, 1)] = Complex64::new(c, 0.0);
    u[(2, 2)] = Complex64::new(c, 0.0);
    u[(1, 2)] = Complex64::new(0.0, -s);
    u[(2, 1)] = Complex64::new(0.0, -s);
    u
}

/// `exp(−i g σˣσˣ/2) = cos(g/2) 𝕀 − i sin(g/2) σˣσˣ`.
pub fn ising_unitary(g: f64) -> ComplexMatrix {
    let (s, c) = (g / 2.0).sin_cos();
    let xx = kron(&ComplexMatrix::pauli_x(), &ComplexMatrix::pauli_x());
    &ComplexMatrix::identity(4).scale(Complex64::new(c, 0.0)) + &xx.scale(Complex64::new(0.0, -s))
}

/// `exp(+i θ σᶻ/2)` with `θ = ω δt_s`.
pub fn free_unitary(theta: f64) -> ComplexMatrix {
    ComplexMatrix::diagonal(&[Complex64::from_polar(1.0, theta / 2.0), Complex64::from_polar(1.0, -theta / 2.0)])
}

/// `cos γ 𝕀 + i sin γ SWAP`.
pub fn partial_swap(gamma: f64) -> ComplexMatrix {
    let (s, c) = gamma.sin_cos();
    &ComplexMatrix::identity(4).scale(Complex64::new(c, 0.0)) + &ComplexMatrix::swap().scale(Complex64::new(0.0, s))
}

pub fn build_step_unitaries(params: &ModelParams) -> Result<StepUnitaries> {
    params.validate()?;
    let u_se = exchange_unitary(params.g_se);
    let mut u = StepUnitaries {
        u_s1e1: u_se.clone(),
        u_s2e2: u_se,
        u_ss: ising_unitary(params.g_ss),
        u_s1: free_unitary(params.omega1 * params.dt_s),
        u_s2: free_unitary(params.omega2 * params.dt_s),
        u_swap: partial_swap(params.gamma),
        u_total: ComplexMatrix::identity(1 << FULL_QUBITS),
    };
    let mut total = ComplexMatrix::identity(1 << FULL_QUBITS);
    for f in u.factors() {
        total = embed(f.op, f.targets, FULL_QUBITS)?.matmul(&total)?;
    }
    u.u_total = total;
    Ok(u)
}

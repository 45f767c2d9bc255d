//! Local spin expectations and two-qubit correlation measures.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, kron, partial_trace, psd_sqrt, von_neumann_entropy, ComplexMatrix, DensityMatrix};

/// Pauli axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub fn pauli(self) -> ComplexMatrix {
        match self {
            Axis::X => ComplexMatrix::pauli_x(),
            Axis::Y => ComplexMatrix::pauli_y(),
            Axis::Z => ComplexMatrix::pauli_z(),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Axis::X => "x",
            Axis::Y => "y",
            Axis::Z => "z",
        }
    }
}

/// One of the two system spins.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SystemSpin {
    S1,
    S2,
}

impl SystemSpin {
    pub fn label(self) -> &'static str {
        match self {
            SystemSpin::S1 => crate::collision::labels::S1,
            SystemSpin::S2 => crate::collision::labels::S2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ObservableSelector {
    pub axis: Axis,
    pub subsystem: SystemSpin,
}

impl ObservableSelector {
    pub fn new(axis: Axis, subsystem: SystemSpin) -> Self {
        Self { axis, subsystem }
    }
}

const IMAG_TOL: f64 = 1e-10;

/// `Tr[ρ_s σ_axis]` for the selected spin.
pub fn expectation(rho: &DensityMatrix, sel: ObservableSelector) -> Result<f64> {
    let reduced = if rho.layout().len() == 1 && rho.layout().labels()[0] == sel.subsystem.label() {
        rho.clone()
    } else {
        partial_trace(rho, &[sel.subsystem.label()])?
    };
    single_qubit_expectation(reduced.matrix(), sel.axis)
}

pub(crate) fn single_qubit_expectation(rho: &ComplexMatrix, axis: Axis) -> Result<f64> {
    let value: Complex64 = match axis {
        // Tr[ρ σ] written out for the 2x2 case.
        Axis::X => rho[(0, 1)] + rho[(1, 0)],
        Axis::Y => Complex64::i() * (rho[(0, 1)] - rho[(1, 0)]),
        Axis::Z => rho[(0, 0)] - rho[(1, 1)],
    };
    if value.im.abs() > IMAG_TOL {
        return Err(Error::Numerical(format!(
            "<sigma_{}> has imaginary part {:e}",
            axis.as_str(),
            value.im
        )));
    }
    Ok(value.re.clamp(-1.0, 1.0))
}

fn require_two_qubit(rho: &DensityMatrix) -> Result<()> {
    if rho.layout().len() != 2 {
        return Err(Error::Shape(format!("expected a two-qubit state, got {} qubits", rho.layout().len())));
    }
    Ok(())
}

/// Spin-flipped state `(σʸ⊗σʸ) ρ* (σʸ⊗σʸ)` in the computational basis.
pub fn spin_flip(rho: &ComplexMatrix) -> ComplexMatrix {
    let yy = kron(&ComplexMatrix::pauli_y(), &ComplexMatrix::pauli_y());
    &(&yy * &rho.conj()) * &yy
}

/// Wootters concurrence of a two-qubit state.
///
/// The eigenvalues of the non-Hermitian `ρρ̃` are obtained from the Hermitian
/// similar matrix `√ρ ρ̃ √ρ`.
pub fn concurrence(rho: &DensityMatrix) -> Result<f64> {
    require_two_qubit(rho)?;
    let m = rho.matrix();
    let sqrt_rho = psd_sqrt(m)?;
    let mut r = &(&sqrt_rho * &spin_flip(m)) * &sqrt_rho;
    r.hermitize();
    let eig = hermitian_eig(&r)?;
    let floor = eig.resolution();
    let roots: Vec<f64> = eig.values.iter().map(|&l| if l <= floor { 0.0 } else { l.sqrt() }).collect();
    let c = roots[0] - roots[1] - roots[2] - roots[3];
    Ok(c.clamp(0.0, 1.0))
}

/// Base-2 quantum mutual information `S(ρ₁) + S(ρ₂) − S(ρ₁₂)`.
pub fn mutual_information(rho: &DensityMatrix) -> Result<f64> {
    require_two_qubit(rho)?;
    let labels = rho.layout().labels();
    let a = partial_trace(rho, &[labels[0].as_str()])?;
    let b = partial_trace(rho, &[labels[1].as_str()])?;
    let i = von_neumann_entropy(&a)? + von_neumann_entropy(&b)? - von_neumann_entropy(rho)?;
    if i < -1e-10 {
        return Err(Error::Numerical(format!("negative mutual information {i:e}")));
    }
    Ok(i.max(0.0))
}

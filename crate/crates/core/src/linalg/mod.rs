//! Dense complex linear algebra for small multi-qubit operators.

mod density;
mod eig;
mod matrix;

pub use density::{partial_trace, von_neumann_entropy, DensityMatrix, StateHealth, SubsystemLayout, Tolerances};
pub use eig::{hermitian_eig, psd_sqrt, unitary_from_hamiltonian, HermitianEigen, HERMITIAN_TOL, POSITIVITY_TOL};
pub use matrix::{conjugate_local, embed, kron, kron_all, ComplexMatrix};

pub(crate) use matrix::trace_out_positions;

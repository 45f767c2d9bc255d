//! Repeated-collision simulation of two spin-1/2 open systems, each coupled to
//! its own stream of environment spins, with an intra-environment partial SWAP
//! as the only indirect link between the two systems.
//!
//! The crate covers the full pipeline used to study environment-induced
//! (anti-)synchronization:
//!
//! - [`linalg`]: dense complex matrices, subsystem layouts, density matrices,
//!   partial traces and Hermitian spectral tools.
//! - [`collision`]: step unitaries, thermal environment states and the
//!   four-stage collision step under both trace-out strategies, plus a
//!   precomputed linear step channel for the correlation-keeping strategy.
//! - [`observables`]: local Pauli expectations, concurrence and quantum
//!   mutual information of the system pair.
//! - [`sync`]: Pearson coefficient and its sliding-window series.
//! - [`sweep`]: deterministic, parallel two-parameter grids of the final
//!   windowed Pearson value.

pub mod collision;
pub mod error;
pub mod linalg;
pub mod observables;
pub mod sweep;
pub mod sync;

pub use error::{Error, Result};
pub use num_complex::Complex64;

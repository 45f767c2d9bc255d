//! The repeated-collision protocol.
//!
//! One step acts on the register `[s1, s2, e1, e2, e1', e2']`:
//! each system spin exchanges with its own environment spin (XX coupling),
//! the system spins interact directly (Ising coupling), both precess freely,
//! and `e2` undergoes a partial SWAP with the upcoming `e1'`. The used pair
//! `e1, e2` is then traced out and `e1', e2'` move into their slots.

mod channel;
mod params;
mod state;
mod step;
mod unitaries;

pub use channel::{build_step_channel, StepChannel};
pub use params::{InitialStateSpec, ModelParams, Strategy};
pub use state::{
    initial_carried_state, initial_system_states, thermal_state, thermal_state_labeled, CarriedState, DriftReport,
    StepRecord, Trajectory, INFINITE_TEMPERATURE_RATIO,
};
pub use step::{run_trajectory, run_trajectory_with, step, Propagation};
pub use unitaries::{
    build_step_unitaries, exchange_generator, exchange_unitary, free_generator, free_unitary, ising_generator,
    ising_unitary, partial_swap, StepUnitaries,
};

/// Subsystem labels and their register positions.
pub mod labels {
    use crate::linalg::SubsystemLayout;

    pub const S1: &str = "s1";
    pub const S2: &str = "s2";
    pub const E1: &str = "e1";
    pub const E2: &str = "e2";
    pub const E1_NEXT: &str = "e1'";
    pub const E2_NEXT: &str = "e2'";

    /// Layout of the carried joint state.
    pub const CARRIED: [&str; 4] = [S1, S2, E1, E2];
    /// Layout of the full register during a step.
    pub const FULL: [&str; 6] = [S1, S2, E1, E2, E1_NEXT, E2_NEXT];

    pub const FULL_QUBITS: usize = 6;

    pub mod pos {
        pub const S1: usize = 0;
        pub const S2: usize = 1;
        pub const E1: usize = 2;
        pub const E2: usize = 3;
        pub const E1_NEXT: usize = 4;
        pub const E2_NEXT: usize = 5;
    }

    pub fn carried_layout() -> SubsystemLayout {
        SubsystemLayout::new(CARRIED).expect("static layout")
    }

    pub fn full_layout() -> SubsystemLayout {
        SubsystemLayout::new(FULL).expect("static layout")
    }
}

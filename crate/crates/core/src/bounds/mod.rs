//! Closed-form work, time and probability bounds for exhaustive search.

pub mod energy;
pub mod prefactor;
pub mod query;
pub mod solve;

pub use energy::{
    battery_relative_uncertainty, init_readout_work, landauer_energy, margolus_levitin_energy, work_floor, ReadoutMode,
};
pub use prefactor::{optimal_k, prefactor_b};
pub use query::{BoundFlag, BoundKind, BoundQuery, BoundResult, Unknown};
pub use solve::{
    ballistic_bound, ballistic_deterministic_time, ballistic_deterministic_work, ballistic_success, classical_bound,
    gate_bound, quantum_bound, quantum_time_at_power, solve_bound, MAX_SOLVE_BITS,
};

//! Exact two-level dynamics of the search Hamiltonian `ħω_i|i⟩⟨i| + ħω_s|s⟩⟨s|`.

pub mod analytics;
pub mod evolve;
pub mod experiments;
pub mod reference;
pub mod schedule;
pub mod space;

pub use analytics::{
    analytic_rates, averaged_overlap, modulated_detuning_suppression, optimal_detuning, DetuningRegime,
};
pub use evolve::{evolve, propagate, Trace, TracePoint, NORM_TOLERANCE, TRACE_CSV_HEADER};
pub use reference::{full_space_reference, FULL_SPACE_MAX_BITS};
pub use schedule::{
    adiabatic_gap, adiabatic_schedule, ballistic_frequency, ballistic_schedule, ballistic_schedule_for,
    control_bandwidth, grover_iterations, grover_pulsed_schedule, local_adiabatic_runtime, modulated_detuning_schedule,
    AdiabaticKind, ControlSchedule, Segment,
};
pub use space::{effective_hamiltonian, eigenenergies, EffectiveHamiltonian, EffectiveState, Observables, SearchSpace};

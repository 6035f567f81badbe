//! Simulation engines for the N-player, N-road quantum truckers game.
//!
//! Every trucker holds an N-level qudit. The players share a phase-weighted
//! GHZ state `Σ_k ω^{kp} |k…k⟩ / √N`, each applies the N×N discrete Fourier
//! transform locally, and the measured basis label tells which road each
//! trucker takes. Two engines compute the outcome distribution:
//!
//! * [`game::run_dense`] materializes all `N^N` amplitudes and applies the
//!   strategy gate slot by slot.
//! * [`game::closed_form_amplitude`] evaluates a single coefficient in O(N)
//!   using the geometric sum over roots of unity.
//!
//! The [`oracle`] module holds deliberately independent recomputations used to
//! check both engines, plus the classical baselines.

pub mod amplitude;
pub mod error;
pub mod game;
pub mod gates;
pub mod oracle;
pub mod statevector;

pub use amplitude::{amp_norm_sq, omega, Amplitude, Tolerance};
pub use error::{Error, Result};
pub use game::{
    classical_best_probability, classical_worst_probability, closed_form_amplitude,
    closed_form_report, congestion_payoffs, quantum_best_probability, run_dense, sweep_phase,
    GameConfig, GameReport, OutcomeClass, OutcomeRecord, SweepRow,
};
pub use gates::{hadamard, identity, r_gate, strategy_unitary, verify_unitary, UnitaryMatrix};
pub use oracle::{
    brute_force_amplitude, classical_monte_carlo, exhaustive_classical, MonteCarloResult,
};
pub use statevector::{index_of, outcome_of, OutcomeDistribution, OutcomeTuple, StateVector};

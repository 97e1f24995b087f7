//! Exact state-vector machinery for small quantum systems: Hamiltonian
//! builders over explicit bases, time-dependent Schrodinger integration,
//! low-lying spectra and gaps, the adiabatic criterion, analog Grover search,
//! macroscopic-well spatial search, and clause Hamiltonians.
//!
//! Conventions: hbar = 1, all Hamiltonians real symmetric, times in units of
//! inverse energy.

pub mod adiabatic;
pub mod clause;
pub mod evolve;
pub mod grover;
pub mod op;
pub mod spatial;
pub mod spectrum;
pub mod state;

pub use adiabatic::{adiabatic_factor, landau_zener_p};
pub use clause::{clause_annealer, clause_hamiltonian, exact_cover_clause, Clause, ClauseSet};
pub use evolve::{evolve, EvolveReport};
pub use grover::{grover_first_maximum, grover_hamiltonian, grover_p_w_exact, GroverOp};
pub use op::{
    build_tim_matrix, marked_state_cost, BitFlipOp, DiagonalOp, LinearInterp, RealSymOp,
    StaticHam, TimOp, TimeDependentHam,
};
pub use spatial::{spatial_search_run, tau_min_bisection, SpatialSearch};
pub use spectrum::{spectrum_and_gap, spectrum_and_gap_op, Spectrum};
pub use state::{Basis, StateVector};

#[derive(Debug, thiserror::Error)]
pub enum SchroError {
    #[error("dimension {0} exceeds the supported limit {1}")]
    DimensionTooLarge(usize, usize),
    #[error("integrator norm blew up at step {step}: |psi| = {norm}")]
    NormBlowup { step: usize, norm: f64 },
    #[error("gap vanished on the sample grid (s = {0})")]
    VanishingGap(f64),
    #[error("no crossing of the target inside the bracket [{0}, {1}]")]
    NoCrossing(f64, f64),
    #[error("parse error: {0}")]
    Parse(String),
}

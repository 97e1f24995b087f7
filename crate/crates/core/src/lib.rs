//! Desk-scale annealing laboratory: Ising spin glasses, simulated annealing,
//! and path-integral Monte Carlo quantum annealing on the Suzuki-Trotter
//! mapped lattice.
//!
//! Everything stochastic takes an explicit 64-bit seed and draws from a
//! ChaCha8 stream, so runs are bit-reproducible across platforms.

pub mod anneal;
pub mod fit;
pub mod meanfield;
pub mod pimc;
pub mod rng;
pub mod schedule;
pub mod spin;

pub use anneal::{anneal, metropolis_accept, residual_energy, AnnealOptions, RunRecord, TraceRow};
pub use fit::{fit_log_power, FitResult};
pub use meanfield::{mf_order_parameter, phase_boundary, phase_boundary_inverse};
pub use pimc::{
    mn_schedule, pimc_anneal, pimc_equilibrium_estimate, trotter_couplings, PimcRunRecord,
    QaParams, TrotterLattice,
};
pub use schedule::Schedule;
pub use spin::{
    brute_force_ground_state, ea_order_parameter, overlap, overlap_histogram, sample_disorder,
    DisorderKind, DisorderModel, IsingProblem, OverlapHistogram, ScaleConvention, SpinConfig,
    Topology,
};

/// Errors shared across the annealing kernels.
#[derive(Debug, thiserror::Error)]
pub enum CoreError {
    #[error("spin configuration length {got} does not match problem size {want}")]
    LengthMismatch { got: usize, want: usize },
    #[error("bond probability p={0} outside [0,1]")]
    InvalidProbability(f64),
    #[error("N={0} is not a perfect square, cannot build a square lattice")]
    NotPerfectSquare(usize),
    #[error("N={n} exceeds the exhaustive-enumeration limit {limit}")]
    TooLarge { n: usize, limit: usize },
    #[error("need at least {want} inputs, got {got}")]
    TooFew { got: usize, want: usize },
    #[error("self-consistency iteration did not converge after {0} steps")]
    NonConvergence(usize),
    #[error("inter-slice coupling undefined at gamma=0; clamp gamma to a floor")]
    GammaZero,
    #[error("residual energy {0} is negative beyond tolerance; oracle or energy bug")]
    NegativeResidual(f64),
    #[error("fit abscissae are degenerate")]
    DegenerateFit,
    #[error("parse error: {0}")]
    Parse(String),
}

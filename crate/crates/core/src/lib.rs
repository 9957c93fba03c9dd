//! Device-yield analysis for three-donor coherent tunnelling adiabatic
//! passage (CTAP) structures made by single-ion implantation.
//!
//! The pipeline samples donor triples through three apertures, turns each
//! triple into hydrogenic couplings, derives the protocol time needed for a
//! target adiabaticity, and reports the fraction of devices that finish
//! inside a decoherence budget. A fixed-step Schrödinger propagator checks
//! that the adiabaticity target really gives high-fidelity transfer.

pub mod error;
pub mod exec;
pub mod implant;
pub mod kv;
pub mod physics;
pub mod propagator;
pub mod protocol;
pub mod report;
pub mod srim;
pub mod stats;

pub use error::{Error, Result};
pub use exec::Execution;
pub use implant::{
    builtin_strategies, builtin_strategy, ImplantStrategy, StraggleSample, StraggleSource,
    TripleSampler,
};
pub use physics::{
    pair_distances, tunnel_coupling, DonorTriple, MaterialParams, Position3D, HBAR_MEV_NS,
};
pub use propagator::{evolve, fidelity_vs_adiabaticity_sweep, EvolutionResult};
pub use protocol::{
    adiabaticity_analytic, adiabaticity_numeric, bright_energies, dark_state,
    metrics_from_distances, tmax_for_adiabaticity, PulseSchedule, StateVector3, TripleMetrics,
};
pub use srim::parse_srim_range3d;
pub use stats::{empirical_cdf, evaluate_population, YieldReport};

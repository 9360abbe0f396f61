//! Delta-kicked quantum ratchet toolkit.
//!
//! A particle on a ring is kicked periodically by the asymmetric potential
//! `K [sin x + alpha sin 2x]`. The crate covers the quantum side (split-operator
//! propagation on the integer momentum ladder, ratchet current, resonance
//! classification), the classical side (kicked map, Lyapunov exponents, chaotic
//! fraction of phase space), the static Bloch band problem of the same
//! potential, and deterministic parameter sweeps over the effective Planck
//! constant and the kick amplitude.

pub mod bands;
pub mod classical;
pub mod error;
pub mod fit;
pub mod model;
pub mod quantum;
pub mod sweep;

pub use error::RatchetError;
pub use model::{
    barrier_height, classify_resonance, hbar_from_physical, potential_shape, Grid, ModelParams,
    ResonanceLabel,
};
pub use quantum::{
    apply_free, apply_kick, dense_oracle_step, evolve, init_uniform, quasimomentum_average, step,
    CurrentEntry, CurrentSeries, Propagator, QuantumState,
};

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, RatchetError>;

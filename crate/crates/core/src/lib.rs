//! Groverian entanglement of multi-qubit pure states, the periodic states
//! produced by Shor's preprocessing stage, and how the quantum Fourier
//! transform changes their entanglement.
//!
//! The modules build on each other bottom-up:
//!
//! - [`statevec`]: dense states, product states, overlaps and local gates.
//! - [`states`]: named state families (periodic, ES, GHZ, W, random, ...).
//! - [`qft`]: the transform and the closed-form spectrum of periodic states.
//! - [`shorprep`]: order finding at desk scale.
//! - [`groverian`]: numerical `P_max` and `G = -ln P_max`.
//! - [`approx`]: closed forms and approximations for ES and periodic states.
//! - [`experiments`]: sweeps, `ΔG` statistics and CSV output.

pub mod approx;
pub mod error;
pub mod experiments;
pub mod groverian;
pub mod qft;
pub mod shorprep;
pub mod states;
pub mod statevec;

pub use error::{Error, Result};
pub use groverian::{groverian, p_max, OptimizerConfig, OptimizerResult};
pub use states::{EsSpec, PeriodicSpec};
pub use statevec::{ProductState, StateVector};

/// SplitMix64 finalizer; derives independent seeds from a master seed.
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

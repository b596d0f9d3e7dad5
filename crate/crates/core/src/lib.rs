//! Decoherence of the central qubit in a spin-star network.
//!
//! A central spin-½ couples to `M` ambient spins through Ising, XX or XXX
//! interactions while every spin decays and dephases into a zero-temperature
//! Markovian bath. The crate builds the Hamiltonian and jump channels,
//! integrates the Lindblad master equation, and reduces the state to the
//! central spin to track its coherence.
//!
//! ```
//! use spinstar::prelude::*;
//!
//! let cfg = ModelConfig { ambient_count: 1, ..ModelConfig::default() };
//! let grid = TimeGrid::new(1.0, 0.01, 10).unwrap();
//! let result = run_single(&cfg, &grid).unwrap();
//! assert_eq!(result.samples[0].sx, 1.0);
//! ```

pub mod dynamics;
pub mod error;
pub mod measures;
pub mod model;
pub mod operators;
pub mod runner;
pub mod states;

pub use error::{Error, Result};

pub mod prelude {
    pub use crate::dynamics::{evolve, EvolveOptions, Frame, TimeGrid};
    pub use crate::measures::{coherence_time, detect_revivals, CoherenceSample, SimulationResult};
    pub use crate::model::{AmbientState, Coupling, DecayJump, ModelConfig};
    pub use crate::runner::{run_single, Preset};
    pub use crate::states::DensityMatrix;
    pub use crate::{Error, Result};
}

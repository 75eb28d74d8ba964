//! Noisy density-matrix simulation with readout error and crosstalk.

pub mod backend;
pub mod crosstalk;
pub mod density;
pub mod distribution;
pub mod evolve;
pub mod model;
pub mod superop;

pub use backend::{registers, Backend, Compiled, Execution};
pub use crosstalk::{insert_zz_crosstalk, rzz_count};
pub use density::DensityMatrix;
pub use distribution::{apply_readout, apply_readout_labelled, exact_probs, Counts, Distribution};
pub use evolve::{evolve, evolve_from, evolve_limited, DEFAULT_MAX_QUBITS};
pub use model::{NoiseModel, Preset};

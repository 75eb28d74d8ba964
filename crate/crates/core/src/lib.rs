//! Circuit representation shared by the simulation, routing and mitigation crates.

pub mod ansatz;
pub mod circuit;
pub mod dag;
pub mod error;
pub mod linalg;
pub mod observable;

pub use ansatz::{Entanglement, RealAmplitudes};
pub use circuit::{Circuit, Gate, GateKind};
pub use dag::{build_dag, lightcone, Dag};
pub use error::{Error, Result};
pub use linalg::{CMatrix, C64};
pub use observable::{Pauli, PauliObservable, PauliString};

/// Derives an independent seed for sub-task `stream` from `base` (SplitMix64 finaliser).
pub fn derive_seed(base: u64, stream: u64) -> u64 {
    let mut z = base ^ stream.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

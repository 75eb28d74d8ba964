//! Mapping logical circuits onto device coupling graphs.

pub mod coupling;
pub mod decompose;
pub mod kak;
pub mod route;

pub use coupling::{CouplingMap, MapKind};
pub use decompose::{cnot_count, decompose_to_basis, is_basis};
pub use route::{route, RoutedCircuit};

//! Virtual distillation with two copies and a per-pair diagonalizing gate.

pub mod circuit;
pub mod estimator;
pub mod oracle;

pub use circuit::{build_vd_circuit, diagonalizing_layer, DiagonalizingGate};
pub use estimator::{estimate_from_counts, estimate_from_distribution, estimate_from_execution, VDEstimate};
pub use oracle::{oracle_mitigated_expectation, Spectrum};

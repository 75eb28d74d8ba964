//! MaxCut VQE benchmarks for cut-assisted virtual distillation: problem
//! construction, parameter search, the method × noise experiment matrix,
//! result files and CNOT overhead sweeps.

pub mod config;
pub mod emit;
pub mod experiment;
pub mod maxcut;
pub mod optimize;
pub mod selftest;
pub mod sweep;

pub use config::{parse_methods, read_parameters, write_parameters, ExperimentConfig, MapSpec, Method, ProblemConfig};
pub use emit::{emit, from_json, to_csv, to_json, write_csv, CSV_HEADER};
pub use experiment::{
    cell_seed, ideal_expectation, prepare_circuit, run_experiment, Cell, ExperimentResult, PresetSummary, ScalePoint,
};
pub use maxcut::MaxCutProblem;
pub use optimize::{minimize, noiseless_energy, optimize_parameters, Minimum, TrustRegion};
pub use selftest::{cut_check, pipeline_check, random_circuit, random_cut_check, CutCheck};
pub use sweep::{fit_exponent, overhead_sweep, parse_range, OverheadRow};

//! Wire cutting and the pairwise cut scheme for two-copy virtual distillation.

pub mod cut;
pub mod pairwise;
pub mod recombine;
pub mod terms;

pub use cut::{cut_wire, cut_wires, reconstruct, CutPoint, Fragment, FragmentJob, FragmentRole, Precision, ReconstructionPlan, Side};
pub use pairwise::{
    build_pairwise_pipelines, mitigate_with_cuts, mitigated_expectation_cut, run_pairwise, ClassicalCache, CutOutcome,
    PairwisePipeline, PairwiseRun,
};
pub use recombine::{recombine, MISSING_MARGINAL};
pub use terms::{MeasureBasis, PrepState, Term, TERMS};

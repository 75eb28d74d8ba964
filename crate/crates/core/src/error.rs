use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("qubit index {index} out of range for width {width}")]
    QubitOutOfRange { index: usize, width: usize },
    #[error("gate acts twice on qubit {0}")]
    DuplicateQubit(usize),
    #[error("gate after measurement on qubit {0}")]
    GateAfterMeasure(usize),
    #[error("explicit two-qubit matrix is not unitary (deviation {0:.3e})")]
    NotUnitary(f64),
    #[error("circuit contains measurements")]
    ContainsMeasurement,
    #[error("width {width} exceeds the dense simulator limit of {limit} qubits")]
    TooManyQubits { width: usize, limit: usize },
    #[error("circuit width {width} exceeds device size {device}")]
    DeviceTooSmall { width: usize, device: usize },
    #[error("observable has {found} letters, expected {expected}")]
    ObservableWidth { expected: usize, found: usize },
    #[error("observable is not diagonal in the computational basis")]
    NonDiagonalObservable,
    #[error("density matrix diagonal entry {0:.3e} is negative beyond tolerance")]
    NegativeProbability(f64),
    #[error("reconstructed probability {value:.3e} below clamp threshold -{threshold:.3e}")]
    ReconstructionNegativity { value: f64, threshold: f64 },
    #[error("denominator {value:.3e} is not significant against its standard error {stderr:.3e}")]
    InsignificantDenominator { value: f64, stderr: f64 },
    #[error("Tr(rho^M) = {0:.3e} is degenerate")]
    DegenerateTrace(f64),
    #[error("invalid cut: {0}")]
    InvalidCut(String),
    #[error("recombination produced an all-zero distribution")]
    DisjointSupport,
    #[error("scale factor {0} must be an odd positive integer")]
    InvalidScale(usize),
    #[error("extrapolation needs at least two distinct scale factors")]
    InsufficientScales,
    #[error("invalid coupling map: {0}")]
    InvalidCouplingMap(String),
    #[error("invalid noise model: {0}")]
    InvalidNoise(String),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("{path}: {msg}")]
    Io { path: String, msg: String },
    #[error("{0}")]
    Invalid(String),
}

impl Error {
    pub fn io(path: impl AsRef<std::path::Path>, err: impl std::fmt::Display) -> Self {
        Error::Io { path: path.as_ref().display().to_string(), msg: err.to_string() }
    }
}

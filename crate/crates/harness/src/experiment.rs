//! The method × noise-preset experiment matrix.

use crate::config::{read_parameters, ExperimentConfig, Method};
use crate::maxcut::MaxCutProblem;
use crate::optimize::optimize_parameters;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::time::Instant;
use vdcut_core::circuit::TAG_DIAG;
use vdcut_core::{derive_seed, Circuit, Error, PauliObservable, Result};
use vdcut_cutkit::{mitigate_with_cuts, ClassicalCache};
use vdcut_noise::{evolve, Backend, Execution, NoiseModel, Preset};
use vdcut_vdistill::{build_vd_circuit, estimate_from_distribution, estimate_from_execution, VDEstimate};
use vdcut_zne::run_zne;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalePoint {
    pub scale: usize,
    pub expectation: f64,
    pub stderr: f64,
}

/// One (method, preset) entry. Gate counts list one entry per executed
/// circuit: the circuit itself for `none` and `vd`, each noise scale for
/// `vd+zne`, each pair's quantum fragment for `vd+cut`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub method: Method,
    pub preset: Preset,
    pub expectation: Option<f64>,
    pub abs_error: Option<f64>,
    pub stderr: Option<f64>,
    pub cnot: Vec<usize>,
    pub rzz: Vec<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub scales: Vec<ScalePoint>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    /// The distilled estimate was withheld because its denominator was not
    /// significant; the error is unbounded rather than unknown.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub refused: bool,
    pub seed: u64,
    pub wall_seconds: f64,
}

impl Cell {
    /// `method@preset`, the row label used in tables.
    pub fn label(&self) -> String {
        format!("{}@{}", self.method, self.preset)
    }
}

/// Noise parameters and the noise-free-diagonalization reference for one preset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PresetSummary {
    pub preset: Preset,
    pub noise: NoiseModel,
    /// VD value when the diagonalizing gates are noiseless; routing SWAPs,
    /// crosstalk and readout error still apply. Absent when no method distils.
    pub noiseless_diag: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub noiseless_diag_error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub config: ExperimentConfig,
    pub problem: MaxCutProblem,
    pub parameters: Vec<f64>,
    /// Noiseless expectation of the unrouted circuit.
    pub ideal: f64,
    pub presets: Vec<PresetSummary>,
    /// Presets in config order, methods in config order within each preset.
    pub cells: Vec<Cell>,
}

impl ExperimentResult {
    pub fn cell(&self, method: Method, preset: Preset) -> Option<&Cell> {
        self.cells.iter().find(|c| c.method == method && c.preset == preset)
    }

    pub fn failed_cells(&self) -> usize {
        self.cells.iter().filter(|c| c.error.is_some()).count()
    }

    /// A copy with wall-clock times zeroed, the only non-deterministic field.
    pub fn without_timing(&self) -> Self {
        let mut copy = self.clone();
        copy.cells.iter_mut().for_each(|c| c.wall_seconds = 0.0);
        copy
    }
}

/// The circuit under test: the configured circuit file, or the ansatz bound
/// to parameters read from file or found by noiseless optimization.
pub fn prepare_circuit(config: &ExperimentConfig, problem: &MaxCutProblem) -> Result<(Circuit, Vec<f64>)> {
    if let Some(circuit) = config.problem.load_circuit()? {
        if circuit.width() != problem.vertices() {
            return Err(Error::Invalid(format!(
                "circuit width {} differs from the graph's {} vertices",
                circuit.width(),
                problem.vertices()
            )));
        }
        return Ok((circuit, Vec::new()));
    }
    let ansatz = config.ansatz(problem.vertices())?;
    let parameters = match &config.parameters {
        Some(path) => read_parameters(path)?,
        None => optimize_parameters(problem, &ansatz, config.seed)?,
    };
    Ok((ansatz.bind(&parameters)?, parameters))
}

/// Noiseless expectation of `h` for the logical circuit.
pub fn ideal_expectation(circuit: &Circuit, h: &PauliObservable) -> Result<f64> {
    evolve(circuit, &NoiseModel::noiseless())?.expectation(h)
}

/// Seed of a cell: derived from the config seed, the preset's position in
/// [`Preset::ALL`] and the method's position in [`Method::ALL`].
pub fn cell_seed(seed: u64, preset: Preset, method: Method) -> u64 {
    let preset_index = Preset::ALL.iter().position(|&p| p == preset).expect("listed") as u64;
    derive_seed(derive_seed(seed, preset_index + 1), method.index() as u64)
}

/// Mean and standard error of `h` over a sampled distribution.
fn plain_estimate(run: &Execution, h: &PauliObservable, shots: u64) -> Result<(f64, f64)> {
    let observed = run.observed();
    let mean = observed.expectation(h)?;
    let second: f64 = observed.probs().iter().enumerate().map(|(x, p)| p * h.diagonal_value(x).powi(2)).sum();
    Ok((mean, ((second - mean * mean).max(0.0) / shots as f64).sqrt()))
}

/// VD estimate from the exact output of the compiled two-copy circuit with
/// the diagonalizing gates evolved noiselessly.
fn noiseless_diag_reference(vd: &Circuit, h: &PauliObservable, device: &Backend, seed: u64) -> Result<f64> {
    let run = device.run_with_ideal_tag(vd, TAG_DIAG, seed)?;
    estimate_from_distribution(&run.exact, h, None)?.mitigated()
}

struct Context<'a> {
    config: &'a ExperimentConfig,
    original: Circuit,
    measured: Circuit,
    vd: Circuit,
    h: PauliObservable,
    ideal: f64,
    cache: ClassicalCache,
}

/// What one cell produced. Gate counts survive a failed estimate whenever
/// the circuits themselves ran.
#[derive(Default)]
struct Outcome {
    cnot: Vec<usize>,
    rzz: Vec<usize>,
    scales: Vec<ScalePoint>,
    value: Option<Result<(f64, f64)>>,
}

impl Outcome {
    fn failed(error: Error) -> Self {
        Self { value: Some(Err(error)), ..Self::default() }
    }

    fn counted(cnot: Vec<usize>, rzz: Vec<usize>, value: Result<(f64, f64)>) -> Self {
        Self { cnot, rzz, scales: Vec::new(), value: Some(value) }
    }
}

fn vd_value(estimate: Result<VDEstimate>) -> Result<(f64, f64)> {
    let estimate = estimate?;
    Ok((estimate.mitigated()?, estimate.mitigated_stderr()?))
}

impl Context<'_> {
    fn run_method(&self, method: Method, device: &Backend, seed: u64, vd_run: &Result<Execution>) -> Outcome {
        let config = self.config;
        match method {
            Method::None => match device.run(&self.measured, seed) {
                Ok(run) => Outcome::counted(vec![run.cnot], vec![run.rzz], plain_estimate(&run, &self.h, config.shots)),
                Err(e) => Outcome::failed(e),
            },
            Method::Vd => match vd_run {
                Ok(run) => Outcome::counted(vec![run.cnot], vec![run.rzz], vd_value(estimate_from_execution(run, &self.h))),
                Err(e) => Outcome::failed(e.clone()),
            },
            Method::VdZne => match run_zne(&self.original, &self.h, device, &config.zne_scales, seed) {
                Ok(zne) => Outcome {
                    scales: zne
                        .runs
                        .iter()
                        .map(|r| ScalePoint { scale: r.scale, expectation: r.expectation, stderr: r.stderr })
                        .collect(),
                    cnot: zne.cnot,
                    rzz: zne.rzz,
                    value: Some(Ok((zne.extrapolated, zne.stderr))),
                },
                Err(e) => Outcome::failed(e),
            },
            Method::VdCut => {
                let cut = vd_run.clone().and_then(|run| {
                    mitigate_with_cuts(&self.original, &self.h, &run.observed(), device, &self.cache, seed)
                });
                match cut {
                    Ok(cut) => Outcome::counted(
                        cut.pairwise.iter().map(|p| p.cnot).collect(),
                        cut.pairwise.iter().map(|p| p.rzz).collect(),
                        vd_value(Ok(cut.estimate)),
                    ),
                    Err(e) => Outcome::failed(e),
                }
            }
        }
    }

    fn run_preset(&self, preset: Preset) -> Result<(PresetSummary, Vec<Cell>)> {
        let config = self.config;
        let noise = NoiseModel::preset(preset);
        let map = config.map.build(self.vd.width())?;
        let device = Backend::new(noise.clone(), Some(map), Some(config.shots));
        let seed_of = |method| cell_seed(config.seed, preset, method);

        // The reference is only computed when some method distils.
        let reference = config
            .methods
            .iter()
            .any(|&m| m != Method::None)
            .then(|| noiseless_diag_reference(&self.vd, &self.h, &device, seed_of(Method::Vd)));
        let summary = PresetSummary {
            preset,
            noise,
            noiseless_diag: reference.as_ref().and_then(|r| r.as_ref().ok().copied()),
            noiseless_diag_error: reference.and_then(|r| r.err()).map(|e| e.to_string()),
        };

        // The uncut two-copy run serves both `vd` and `vd+cut`.
        let needs_vd = config.methods.iter().any(|m| matches!(m, Method::Vd | Method::VdCut));
        let vd_run = if needs_vd { device.run(&self.vd, seed_of(Method::Vd)) } else { Err(Error::Invalid("unused".into())) };
        let cells = config
            .methods
            .iter()
            .map(|&method| {
                let start = Instant::now();
                let seed = seed_of(method);
                let outcome = self.run_method(method, &device, seed, &vd_run);
                let (expectation, stderr, error) = match outcome.value.expect("every method sets a value") {
                    Ok((value, stderr)) => (Some(value), Some(stderr), None),
                    Err(e) => (None, None, Some(e)),
                };
                let refused = matches!(error, Some(Error::InsignificantDenominator { .. }));
                Cell {
                    method,
                    preset,
                    expectation,
                    abs_error: expectation.map(|v| (v - self.ideal).abs()),
                    stderr,
                    cnot: outcome.cnot,
                    rzz: outcome.rzz,
                    scales: outcome.scales,
                    error: error.map(|e| e.to_string()),
                    refused,
                    seed,
                    wall_seconds: start.elapsed().as_secs_f64(),
                }
            })
            .collect();
        Ok((summary, cells))
    }
}

/// Runs every requested method under every requested preset. Setup errors
/// (problem, parameters, map) abort; a failing cell records its error and
/// the rest of the matrix still runs.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentResult> {
    config.validate()?;
    let problem = config.problem.build()?;
    let (original, parameters) = prepare_circuit(config, &problem)?;
    let h = problem.hamiltonian();
    let vd = build_vd_circuit(&original)?;
    config.map.build(vd.width())?.region(vd.width())?;
    let ctx = Context {
        config,
        ideal: ideal_expectation(&original, &h)?,
        measured: original.measure_all(),
        vd,
        original,
        h,
        cache: ClassicalCache::new(),
    };
    let per_preset = config.presets.par_iter().map(|&p| ctx.run_preset(p)).collect::<Result<Vec<_>>>()?;
    let (presets, cells): (Vec<_>, Vec<_>) = per_preset.into_iter().unzip();
    Ok(ExperimentResult {
        config: config.clone(),
        problem,
        parameters,
        ideal: ctx.ideal,
        presets,
        cells: cells.into_iter().flatten().collect(),
    })
}

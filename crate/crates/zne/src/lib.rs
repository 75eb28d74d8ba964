//! Zero-noise extrapolation of virtual distillation by folding the
//! diagonalizing gates.

use rayon::prelude::*;
use vdcut_core::circuit::TAG_DIAG;
use vdcut_core::{derive_seed, Circuit, Error, PauliObservable, Result};
use vdcut_noise::Backend;
use vdcut_vdistill::{build_vd_circuit, estimate_from_execution};

/// Scale factors used by default.
pub const DEFAULT_SCALES: [usize; 3] = [1, 3, 5];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledRun {
    pub scale: usize,
    pub expectation: f64,
    pub stderr: f64,
}

/// Replaces each diag-tagged gate `G` with `G (G† G)^k`, `k = (scale − 1) / 2`.
pub fn fold_diagonalizing(circuit: &Circuit, scale: usize) -> Result<Circuit> {
    if scale == 0 || scale.is_multiple_of(2) {
        return Err(Error::InvalidScale(scale));
    }
    if circuit.count_tag(TAG_DIAG) == 0 {
        return Err(Error::Invalid("circuit has no diagonalizing gates to fold".into()));
    }
    let mut folded = Circuit::named(circuit.width(), circuit.name());
    for gate in circuit.ops() {
        folded.push(gate.clone())?;
        if gate.has_tag(TAG_DIAG) {
            let inverse = gate.inverse().expect("diagonalizing gates are unitary");
            for _ in 0..(scale - 1) / 2 {
                folded.push(inverse.clone())?;
                folded.push(gate.clone())?;
            }
        }
    }
    Ok(folded)
}

/// Least-squares line through `(scale, expectation)`, evaluated at zero.
pub fn extrapolate_linear(runs: &[ScaledRun]) -> Result<f64> {
    if runs.len() < 2 {
        return Err(Error::InsufficientScales);
    }
    let n = runs.len() as f64;
    let mean_x = runs.iter().map(|r| r.scale as f64).sum::<f64>() / n;
    let mean_y = runs.iter().map(|r| r.expectation).sum::<f64>() / n;
    let sxx: f64 = runs.iter().map(|r| (r.scale as f64 - mean_x).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::InsufficientScales);
    }
    let sxy: f64 = runs.iter().map(|r| (r.scale as f64 - mean_x) * (r.expectation - mean_y)).sum();
    Ok(mean_y - sxy / sxx * mean_x)
}

/// Standard error of the [`extrapolate_linear`] intercept, propagating the
/// independent per-scale standard errors through the least-squares weights.
pub fn extrapolation_stderr(runs: &[ScaledRun]) -> Result<f64> {
    if runs.len() < 2 {
        return Err(Error::InsufficientScales);
    }
    let n = runs.len() as f64;
    let mean_x = runs.iter().map(|r| r.scale as f64).sum::<f64>() / n;
    let sxx: f64 = runs.iter().map(|r| (r.scale as f64 - mean_x).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::InsufficientScales);
    }
    let variance: f64 = runs
        .iter()
        .map(|r| {
            let weight = 1.0 / n - mean_x * (r.scale as f64 - mean_x) / sxx;
            (weight * r.stderr).powi(2)
        })
        .sum();
    Ok(variance.sqrt())
}

#[derive(Debug, Clone)]
pub struct ZneOutcome {
    pub runs: Vec<ScaledRun>,
    pub extrapolated: f64,
    pub stderr: f64,
    /// Compiled gate counts per scale, in `runs` order.
    pub cnot: Vec<usize>,
    pub rzz: Vec<usize>,
}

/// Runs the two-copy circuit of `original` at each scale on `device` and
/// extrapolates the mitigated expectation to zero noise.
pub fn run_zne(
    original: &Circuit,
    obs: &PauliObservable,
    device: &Backend,
    scales: &[usize],
    seed: u64,
) -> Result<ZneOutcome> {
    let vd = build_vd_circuit(original)?;
    let results = scales
        .par_iter()
        .enumerate()
        .map(|(i, &scale)| {
            let run = device.run(&fold_diagonalizing(&vd, scale)?, derive_seed(seed, i as u64))?;
            let estimate = estimate_from_execution(&run, obs)?;
            let scaled = ScaledRun { scale, expectation: estimate.mitigated()?, stderr: estimate.mitigated_stderr()? };
            Ok((scaled, run.cnot, run.rzz))
        })
        .collect::<Result<Vec<_>>>()?;
    let runs: Vec<ScaledRun> = results.iter().map(|r| r.0).collect();
    Ok(ZneOutcome {
        extrapolated: extrapolate_linear(&runs)?,
        stderr: extrapolation_stderr(&runs)?,
        cnot: results.iter().map(|r| r.1).collect(),
        rzz: results.iter().map(|r| r.2).collect(),
        runs,
    })
}

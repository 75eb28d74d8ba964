//! Exact wire-cutting self-test: random circuits with one random cut, and the
//! noiseless pairwise pipelines of a benchmark circuit.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use vdcut_core::{Circuit, Gate, Result};
use vdcut_cutkit::{build_pairwise_pipelines, cut_wire, reconstruct, run_pairwise, ClassicalCache, CutPoint, Precision};
use vdcut_noise::{evolve, exact_probs, Backend, Distribution, NoiseModel};
use vdcut_vdistill::build_vd_circuit;

#[derive(Debug, Clone, Serialize)]
pub struct CutCheck {
    pub random_trials: usize,
    pub random_max_tv: f64,
    pub pipelines: usize,
    pub pipeline_max_tv: f64,
}

fn noiseless(circuit: &Circuit) -> Result<Distribution> {
    let dist = exact_probs(&evolve(&circuit.without_measurements(), &NoiseModel::noiseless())?)?;
    Ok(if circuit.has_measurements() { dist.marginal(&circuit.measured_qubits()) } else { dist })
}

/// Random circuit over RY, RZ, H, X, CNOT and RZZ on `width` qubits.
pub fn random_circuit(rng: &mut impl Rng, width: usize, gates: usize) -> Circuit {
    let mut circuit = Circuit::new(width);
    for _ in 0..gates {
        let a = rng.gen_range(0..width);
        let angle = rng.gen_range(-3.2..3.2);
        let gate = match rng.gen_range(0..6) {
            0 => Gate::ry(angle, a),
            1 => Gate::rz(angle, a),
            2 => Gate::h(a),
            3 | 4 if width > 1 => Gate::cnot(a, (a + rng.gen_range(1..width)) % width),
            5 if width > 1 => Gate::rzz(angle, a, (a + rng.gen_range(1..width)) % width),
            _ => Gate::x(a),
        };
        circuit.push(gate).expect("generated gates are valid");
    }
    circuit
}

/// Largest TV distance between the reconstruction of a random single cut
/// and the uncut distribution, over `trials` circuits of 1 to 4 qubits.
pub fn random_cut_check(trials: usize, seed: u64) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for trial in 0..trials {
        let gates = rng.gen_range(1..14);
        let circuit = random_circuit(&mut rng, 1 + trial % 4, gates);
        let (jobs, plan) = loop {
            let cut = CutPoint::new(rng.gen_range(0..circuit.width()), rng.gen_range(0..=circuit.len()));
            if let Ok(found) = cut_wire(&circuit, cut) {
                break found;
            }
        };
        let results = jobs.iter().map(|j| noiseless(&j.circuit)).collect::<Result<Vec<_>>>()?;
        let got = reconstruct(&plan, &results, Precision::Exact)?;
        worst = worst.max(got.total_variation(&noiseless(&circuit)?));
    }
    Ok(worst)
}

/// Largest TV distance between each noiseless exact pairwise pipeline of
/// `original` and the matching pair marginal of the uncut two-copy circuit.
pub fn pipeline_check(original: &Circuit) -> Result<(usize, f64)> {
    let n = original.width();
    let uncut = noiseless(&build_vd_circuit(original)?)?;
    let pipelines = build_pairwise_pipelines(original)?;
    let cache = ClassicalCache::new();
    let mut worst: f64 = 0.0;
    for pipeline in &pipelines {
        let run = run_pairwise(pipeline, &Backend::ideal(), &cache, 0)?;
        let expected = uncut.marginal(&[pipeline.pair, n + pipeline.pair]);
        worst = worst.max(run.distribution.total_variation(&expected));
    }
    Ok((pipelines.len(), worst))
}

pub fn cut_check(trials: usize, seed: u64, benchmark: &Circuit) -> Result<CutCheck> {
    let random_max_tv = random_cut_check(trials, seed)?;
    let (pipelines, pipeline_max_tv) = pipeline_check(benchmark)?;
    Ok(CutCheck { random_trials: trials, random_max_tv, pipelines, pipeline_max_tv })
}

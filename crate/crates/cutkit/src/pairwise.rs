//! Pairwise cut scheme: every diagonalizing gate is cut out of its own pruned
//! copy of the two-copy circuit and simulated noiselessly, while the state
//! preparation runs on the device.

use crate::cut::{reconstruct, CutPoint, Fragment, FragmentRole, Precision, ReconstructionPlan, Side};
use crate::recombine::recombine;
use rayon::prelude::*;
use std::collections::{BTreeSet, HashMap};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, RwLock};
use vdcut_core::circuit::TAG_DIAG;
use vdcut_core::{derive_seed, lightcone, Circuit, Error, Gate, PauliObservable, Result};
use vdcut_noise::{evolve, exact_probs, Backend, Distribution};
use vdcut_vdistill::{build_vd_circuit, estimate_from_distribution, VDEstimate};

#[derive(Debug, Clone)]
pub struct PairwisePipeline {
    pub pair: usize,
    /// Copy-0 and copy-1 qubits of the pair in the two-copy circuit.
    pub qubits: (usize, usize),
    pub plan: ReconstructionPlan,
    quantum: usize,
    classical: usize,
}

impl PairwisePipeline {
    /// State preparation of both copies, pruned to the pair's light cone.
    pub fn quantum_part(&self) -> &Fragment {
        &self.plan.fragments()[self.quantum]
    }

    /// The diagonalizing gate on two fresh wires.
    pub fn classical_part(&self) -> &Fragment {
        &self.plan.fragments()[self.classical]
    }
}

/// One pipeline per qubit of `original`, cutting both wires entering the
/// pair's diagonalizing gate.
pub fn build_pairwise_pipelines(original: &Circuit) -> Result<Vec<PairwisePipeline>> {
    let n = original.width();
    let body = build_vd_circuit(original)?.without_measurements();
    (0..n)
        .map(|i| {
            let sinks = BTreeSet::from([i, n + i]);
            let mut pruned = lightcone(&body, &sinks);
            let position = pruned
                .ops()
                .iter()
                .position(|g| g.has_tag(TAG_DIAG) && g.qubits() == [i, n + i])
                .ok_or_else(|| Error::InvalidCut(format!("no diagonalizing gate on pair {i}")))?;
            pruned.push(Gate::measure(i))?;
            pruned.push(Gate::measure(n + i))?;
            let plan = ReconstructionPlan::new(&pruned, &[CutPoint::new(i, position), CutPoint::new(n + i, position)])?;
            let find = |role| plan.fragments().iter().position(|f| f.role == role);
            let (Some(quantum), Some(classical)) = (find(FragmentRole::Measure), find(FragmentRole::Prepare)) else {
                return Err(Error::InvalidCut(format!("pair {i} does not separate into two fragments")));
            };
            Ok(PairwisePipeline { pair: i, qubits: (i, n + i), plan, quantum, classical })
        })
        .collect()
}

/// Exact noiseless results of classical fragments, shared across pipelines
/// with identical classical parts.
#[derive(Debug, Default)]
pub struct ClassicalCache {
    entries: RwLock<HashMap<String, Arc<Vec<Distribution>>>>,
    hits: AtomicUsize,
    misses: AtomicUsize,
}

impl ClassicalCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn hits(&self) -> usize {
        self.hits.load(Ordering::SeqCst)
    }

    pub fn misses(&self) -> usize {
        self.misses.load(Ordering::SeqCst)
    }

    fn key(fragment: &Fragment) -> String {
        format!("{:?}|{:?}|{}", fragment.measured, fragment.cut_inputs, fragment.body.to_text())
    }

    /// Variant results of `fragment`, simulated at most once per distinct part.
    pub fn results(&self, fragment: &Fragment) -> Result<Arc<Vec<Distribution>>> {
        let key = Self::key(fragment);
        if let Some(found) = self.entries.read().expect("cache lock").get(&key) {
            self.hits.fetch_add(1, Ordering::SeqCst);
            return Ok(found.clone());
        }
        let mut entries = self.entries.write().expect("cache lock");
        if let Some(found) = entries.get(&key) {
            self.hits.fetch_add(1, Ordering::SeqCst);
            return Ok(found.clone());
        }
        let ideal = Backend::ideal();
        let results = (0..fragment.variant_count())
            .map(|v| {
                let (bases, preps) = fragment.variant(v);
                let circuit = fragment.circuit(&bases, &preps)?;
                let rho = evolve(&circuit.without_measurements(), &ideal.noise)?;
                Ok(exact_probs(&rho)?.marginal(&fragment.measured))
            })
            .collect::<Result<Vec<_>>>()?;
        let results = Arc::new(results);
        entries.insert(key, results.clone());
        self.misses.fetch_add(1, Ordering::SeqCst);
        Ok(results)
    }
}

#[derive(Debug, Clone)]
pub struct PairwiseRun {
    pub pair: usize,
    /// Mitigated distribution over (copy-0 bit, copy-1 bit).
    pub distribution: Distribution,
    /// Gate counts of the compiled quantum part.
    pub cnot: usize,
    pub rzz: usize,
}

/// Runs the quantum part's variants on `device` (one state evolution, one
/// basis change per variant) and the classical part through `cache`.
pub fn run_pairwise(
    pipeline: &PairwisePipeline,
    device: &Backend,
    cache: &ClassicalCache,
    seed: u64,
) -> Result<PairwiseRun> {
    let plan = &pipeline.plan;
    let mut results: Vec<Distribution> = Vec::with_capacity(plan.job_count());
    let (mut cnot, mut rzz) = (0, 0);
    for fragment in plan.fragments() {
        match fragment.side() {
            Side::Device => {
                if !fragment.cut_inputs.is_empty() {
                    return Err(Error::InvalidCut("device fragment with fresh wires".into()));
                }
                let suffixes: Vec<Vec<Gate>> =
                    (0..fragment.variant_count()).map(|v| fragment.suffix(&fragment.variant(v).0)).collect();
                let runs = device.run_variants(&fragment.body, &fragment.measured, &suffixes, seed)?;
                cnot = runs[0].cnot;
                rzz = runs[0].rzz;
                results.extend(runs.iter().map(|r| r.observed()));
            }
            Side::Classical => results.extend(cache.results(fragment)?.iter().cloned()),
        }
    }
    let precision = device.shots.map_or(Precision::Exact, Precision::Sampled);
    let distribution = reconstruct(plan, &results, precision)?;
    Ok(PairwiseRun { pair: pipeline.pair, distribution, cnot, rzz })
}

#[derive(Debug, Clone)]
pub struct CutOutcome {
    pub estimate: VDEstimate,
    pub recombined: Distribution,
    pub pairwise: Vec<PairwiseRun>,
}

/// Runs every pipeline, recombines with the uncut two-copy distribution
/// `unmitigated`, and weights the result exactly (standard errors as if
/// `device.shots` samples had been drawn).
pub fn mitigate_with_cuts(
    original: &Circuit,
    obs: &PauliObservable,
    unmitigated: &Distribution,
    device: &Backend,
    cache: &ClassicalCache,
    seed: u64,
) -> Result<CutOutcome> {
    obs.check_width(original.width())?;
    let pipelines = build_pairwise_pipelines(original)?;
    let pairwise = pipelines
        .par_iter()
        .map(|p| run_pairwise(p, device, cache, derive_seed(seed, p.pair as u64)))
        .collect::<Result<Vec<_>>>()?;
    let pairs: Vec<(usize, usize)> = pipelines.iter().map(|p| p.qubits).collect();
    let dists: Vec<Distribution> = pairwise.iter().map(|r| r.distribution.clone()).collect();
    let recombined = recombine(unmitigated, &dists, &pairs)?;
    let estimate = estimate_from_distribution(&recombined, obs, device.shots)?;
    Ok(CutOutcome { estimate, recombined, pairwise })
}

/// End to end: runs the uncut two-copy circuit on `device` for the
/// unmitigated distribution, then [`mitigate_with_cuts`].
pub fn mitigated_expectation_cut(
    original: &Circuit,
    obs: &PauliObservable,
    device: &Backend,
    seed: u64,
) -> Result<CutOutcome> {
    let vd = build_vd_circuit(original)?;
    let unmitigated = device.run(&vd, derive_seed(seed, 0))?.observed();
    mitigate_with_cuts(original, obs, &unmitigated, device, &ClassicalCache::new(), derive_seed(seed, 1))
}

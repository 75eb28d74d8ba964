//! Simulated device: routing, lowering, crosstalk, noisy evolution and readout.

use crate::crosstalk::{insert_zz_crosstalk, rzz_count};
use crate::density::DensityMatrix;
use crate::distribution::{apply_readout_labelled, exact_probs, Counts, Distribution};
use crate::evolve::{evolve_from, evolve_limited, DEFAULT_MAX_QUBITS};
use crate::model::NoiseModel;
use vdcut_core::{derive_seed, Circuit, Error, Gate, Result};
use vdcut_transpiler::{cnot_count, decompose_to_basis, route, CouplingMap};

#[derive(Debug, Clone)]
pub struct Backend {
    pub noise: NoiseModel,
    /// Device connectivity; `None` runs the logical circuit all-to-all with no
    /// gate or readout crosstalk.
    pub map: Option<CouplingMap>,
    /// Shots per execution; `None` reports exact distributions only.
    pub shots: Option<u64>,
    pub max_qubits: usize,
}

/// A circuit prepared for the device.
#[derive(Debug, Clone)]
pub struct Compiled {
    /// Measurement-free physical circuit in the CNOT basis over the routing region.
    pub physical: Circuit,
    /// Final position of each logical qubit within the region.
    pub final_layout: Vec<usize>,
    /// Device index of each region qubit.
    pub region_qubits: Vec<usize>,
    pub region: Option<CouplingMap>,
    pub cnot: usize,
    /// Crosstalk gates the layering rule produces (counted whether or not
    /// gate crosstalk is simulated).
    pub rzz: usize,
    pub swaps: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Execution {
    /// Logical qubit behind each outcome bit.
    pub measured: Vec<usize>,
    /// Exact outcome distribution including readout error.
    pub exact: Distribution,
    pub counts: Option<Counts>,
    pub cnot: usize,
    pub rzz: usize,
}

impl Execution {
    /// Sampled frequencies when shots were taken, the exact distribution otherwise.
    pub fn observed(&self) -> Distribution {
        self.counts.as_ref().map_or_else(|| self.exact.clone(), Counts::to_distribution)
    }
}

impl Backend {
    pub fn new(noise: NoiseModel, map: Option<CouplingMap>, shots: Option<u64>) -> Self {
        Self { noise, map, shots, max_qubits: DEFAULT_MAX_QUBITS }
    }

    /// Noiseless, exact, all-to-all.
    pub fn ideal() -> Self {
        Self::new(NoiseModel::noiseless(), None, None)
    }

    pub fn compile(&self, circuit: &Circuit) -> Result<Compiled> {
        let body = circuit.without_measurements();
        let width = body.width();
        let Some(map) = &self.map else {
            let physical = decompose_to_basis(&body);
            return Ok(Compiled {
                cnot: cnot_count(&physical),
                physical,
                final_layout: (0..width).collect(),
                region_qubits: (0..width).collect(),
                region: None,
                rzz: 0,
                swaps: 0,
            });
        };
        let (region, region_qubits) = map.region(width)?;
        let routed = route(&body, &region)?;
        let lowered = decompose_to_basis(&routed.circuit);
        let with_xtalk = insert_zz_crosstalk(&lowered, &region, self.noise.crosstalk_angle);
        let rzz = rzz_count(&with_xtalk) - rzz_count(&lowered);
        let physical = if self.noise.gate_crosstalk { with_xtalk } else { lowered };
        Ok(Compiled {
            cnot: cnot_count(&physical),
            physical,
            final_layout: routed.final_layout,
            region_qubits,
            region: Some(region),
            rzz,
            swaps: routed.swaps_inserted,
        })
    }

    /// Splits `body` into independent registers, compiles each as if alone
    /// on the device (so registers share no crosstalk) and evolves it, with
    /// gates tagged `ideal_tag` applied noiselessly.
    fn execute(&self, body: &Circuit, measured: &[usize], ideal_tag: Option<&str>) -> Result<Vec<Part>> {
        registers(body)
            .into_iter()
            .filter(|reg| reg.iter().any(|q| measured.contains(q)))
            .map(|qubits| {
                let local = |q: usize| qubits.binary_search(&q).expect("register holds the gate's qubits");
                let sub = Circuit::from_gates(
                    qubits.len(),
                    body.ops().iter().filter(|g| qubits.contains(&g.qubits()[0])).map(|g| g.remapped(local)),
                )?;
                let compiled = self.compile(&sub)?;
                let rho = self.evolve_tagged(&compiled.physical, ideal_tag)?;
                Ok(Part { qubits, compiled, rho })
            })
            .collect()
    }

    fn evolve_tagged(&self, physical: &Circuit, ideal_tag: Option<&str>) -> Result<DensityMatrix> {
        let Some(tag) = ideal_tag else {
            return evolve_limited(physical, &self.noise, self.max_qubits);
        };
        if physical.width() > self.max_qubits {
            return Err(Error::TooManyQubits { width: physical.width(), limit: self.max_qubits });
        }
        let ideal = NoiseModel::noiseless();
        let mut rho = DensityMatrix::zero_state(physical.width());
        for run in physical.ops().chunk_by(|a, b| a.has_tag(tag) == b.has_tag(tag)) {
            let model = if run[0].has_tag(tag) { &ideal } else { &self.noise };
            rho = evolve_from(rho, &Circuit::from_gates(physical.width(), run.iter().cloned())?, model)?;
        }
        Ok(rho)
    }

    /// Applies readout (with crosstalk only between qubits of one register)
    /// to the joint outcome distribution of `parts` and samples it.
    /// `per_part[k]` is part `k`'s distribution over its measured qubits, in
    /// `measured` order.
    fn finish(&self, parts: &[Part], per_part: &[Distribution], measured: Vec<usize>, seed: u64) -> Execution {
        let mut labels = vec![0; measured.len()];
        let mut adjacency = Vec::new();
        let mut slots: Vec<Vec<usize>> = Vec::with_capacity(parts.len());
        for part in parts {
            let bits: Vec<usize> = (0..measured.len()).filter(|&j| part.qubits.contains(&measured[j])).collect();
            let physical: Vec<usize> =
                bits.iter().map(|&j| part.compiled.final_layout[part.local(measured[j])]).collect();
            for (&j, &p) in bits.iter().zip(&physical) {
                labels[j] = part.compiled.region_qubits[p];
            }
            if let Some(region) = &part.compiled.region {
                for a in 0..bits.len() {
                    for b in a + 1..bits.len() {
                        if region.are_adjacent(physical[a], physical[b]) {
                            adjacency.push((bits[a], bits[b]));
                        }
                    }
                }
            }
            slots.push(bits);
        }
        adjacency.sort_unstable();
        let joint = product(measured.len(), &slots, per_part);
        let exact = apply_readout_labelled(&joint, &self.noise, &labels, &adjacency);
        let counts = self.shots.map(|s| exact.sample(s, seed));
        let cnot = parts.iter().map(|p| p.compiled.cnot).sum();
        let rzz = parts.iter().map(|p| p.compiled.rzz).sum();
        Execution { measured, exact, counts, cnot, rzz }
    }

    fn measure_parts(&self, body: &Circuit, measured: Vec<usize>, ideal_tag: Option<&str>, seed: u64) -> Result<Execution> {
        let parts = self.execute(body, &measured, ideal_tag)?;
        let per_part = parts
            .iter()
            .map(|part| exact_probs(&part.reduced(&measured)))
            .collect::<Result<Vec<_>>>()?;
        Ok(self.finish(&parts, &per_part, measured, seed))
    }

    /// Runs a circuit with terminal measurements; outcome bit `j` is the
    /// `j`-th measured logical qubit in ascending order.
    pub fn run(&self, circuit: &Circuit, seed: u64) -> Result<Execution> {
        let measured = circuit.measured_qubits();
        if measured.is_empty() {
            return Err(Error::Invalid("circuit has no measurements".into()));
        }
        self.measure_parts(&circuit.without_measurements(), measured, None, seed)
    }

    /// Like [`run`](Self::run), but gates tagged `tag` (and everything they
    /// lower to) evolve without gate noise; routing, crosstalk insertion and
    /// readout error are unchanged.
    pub fn run_with_ideal_tag(&self, circuit: &Circuit, tag: &str, seed: u64) -> Result<Execution> {
        let measured = circuit.measured_qubits();
        if measured.is_empty() {
            return Err(Error::Invalid("circuit has no measurements".into()));
        }
        self.measure_parts(&circuit.without_measurements(), measured, Some(tag), seed)
    }

    /// Runs `prefix` once, then each single-qubit `suffix` on the reduced state
    /// of `measured` (logical qubits; outcome bit `j` is `measured[j]`).
    /// Equivalent to running `prefix + suffix + measure` for every suffix.
    pub fn run_variants(
        &self,
        prefix: &Circuit,
        measured: &[usize],
        suffixes: &[Vec<Gate>],
        seed: u64,
    ) -> Result<Vec<Execution>> {
        let parts = self.execute(&prefix.without_measurements(), measured, None)?;
        let reduced: Vec<DensityMatrix> = parts.iter().map(|p| p.reduced(measured)).collect();
        suffixes
            .iter()
            .enumerate()
            .map(|(i, suffix)| {
                let mut tails: Vec<Circuit> = parts.iter().map(|p| Circuit::new(p.measured_in(measured).len())).collect();
                for g in suffix {
                    if g.is_two_qubit() || g.is_measure() {
                        return Err(Error::Invalid("variant suffixes hold single-qubit gates only".into()));
                    }
                    let q = g.qubits()[0];
                    let (k, part) = parts
                        .iter()
                        .enumerate()
                        .find(|(_, p)| p.qubits.contains(&q))
                        .filter(|_| measured.contains(&q))
                        .ok_or(Error::Invalid("suffix gate on unmeasured qubit".into()))?;
                    let slot = part.measured_in(measured).iter().position(|&m| m == q).expect("measured");
                    tails[k].push(g.remapped(|_| slot))?;
                }
                let per_part = reduced
                    .iter()
                    .zip(&tails)
                    .map(|(rho, tail)| exact_probs(&evolve_from(rho.clone(), tail, &self.noise)?))
                    .collect::<Result<Vec<_>>>()?;
                Ok(self.finish(&parts, &per_part, measured.to_vec(), derive_seed(seed, i as u64)))
            })
            .collect()
    }
}

/// A register's compiled circuit and final state.
struct Part {
    /// Logical qubits, ascending.
    qubits: Vec<usize>,
    compiled: Compiled,
    rho: DensityMatrix,
}

impl Part {
    fn local(&self, q: usize) -> usize {
        self.qubits.binary_search(&q).expect("qubit in register")
    }

    fn measured_in(&self, measured: &[usize]) -> Vec<usize> {
        measured.iter().copied().filter(|q| self.qubits.contains(q)).collect()
    }

    /// Reduced state on this register's measured qubits, in `measured` order.
    fn reduced(&self, measured: &[usize]) -> DensityMatrix {
        let physical: Vec<usize> =
            self.measured_in(measured).iter().map(|&q| self.compiled.final_layout[self.local(q)]).collect();
        self.rho.partial_trace(&physical)
    }
}

/// Connected components of the two-qubit interaction graph, each ascending,
/// ordered by lowest qubit. Idle qubits form their own registers.
pub fn registers(circuit: &Circuit) -> Vec<Vec<usize>> {
    let width = circuit.width();
    let mut parent: Vec<usize> = (0..width).collect();
    fn root(parent: &mut [usize], mut q: usize) -> usize {
        while parent[q] != q {
            parent[q] = parent[parent[q]];
            q = parent[q];
        }
        q
    }
    for g in circuit.ops().iter().filter(|g| g.is_two_qubit()) {
        let (a, b) = (root(&mut parent, g.qubits()[0]), root(&mut parent, g.qubits()[1]));
        parent[a.max(b)] = a.min(b);
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut index = vec![usize::MAX; width];
    for q in 0..width {
        let r = root(&mut parent, q);
        if index[r] == usize::MAX {
            index[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[index[r]].push(q);
    }
    groups
}

/// Joint distribution of independent parts; `slots[k]` lists the output bits
/// carried by part `k`'s distribution, in its bit order.
fn product(width: usize, slots: &[Vec<usize>], per_part: &[Distribution]) -> Distribution {
    let probs = (0..1usize << width)
        .map(|x| {
            slots
                .iter()
                .zip(per_part)
                .map(|(bits, dist)| {
                    let local = bits.iter().enumerate().fold(0, |acc, (i, &j)| acc | (((x >> j) & 1) << i));
                    dist.prob(local)
                })
                .product()
        })
        .collect();
    Distribution::new(width, probs).expect("product of distributions is normalised")
}

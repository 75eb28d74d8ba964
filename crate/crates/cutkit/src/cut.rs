//! Wire cuts: fragment construction and quasiprobability reconstruction.
//!
//! Each cut severs one wire: gates before the cut stay on the original
//! segment, gates from the cut on move to a fresh wire. The severed segment is
//! measured in X, Y or Z and the fresh wire starts in one of four states; the
//! identity channel is rebuilt from [`TERMS`].

use crate::terms::{MeasureBasis, PrepState, TERMS};
use vdcut_core::{Circuit, Error, Gate, Result};
use vdcut_noise::Distribution;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CutPoint {
    pub qubit: usize,
    /// Number of (non-measurement) operations preceding the cut.
    pub position: usize,
}

impl CutPoint {
    pub fn new(qubit: usize, position: usize) -> Self {
        Self { qubit, position }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FragmentRole {
    /// Ends severed wires; variants are measurement bases.
    Measure,
    /// Starts fresh wires; variants are preparations.
    Prepare,
    /// Cuts do not separate the circuit, so one fragment carries both.
    Joint,
}

/// Where a fragment is meant to execute.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Device,
    Classical,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum BitSource {
    /// Position in the plan's output list.
    Output(usize),
    Cut(usize),
}

#[derive(Debug, Clone)]
pub struct Fragment {
    pub role: FragmentRole,
    /// Gates on local qubits, without preparations, basis changes or measurements.
    pub body: Circuit,
    /// Local qubit behind each outcome bit, ascending.
    pub measured: Vec<usize>,
    /// `(cut, local qubit)` for severed segments ending in this fragment.
    pub cut_outputs: Vec<(usize, usize)>,
    /// `(cut, local qubit)` for fresh wires starting in this fragment.
    pub cut_inputs: Vec<(usize, usize)>,
    sources: Vec<BitSource>,
}

impl Fragment {
    pub fn side(&self) -> Side {
        match self.role {
            FragmentRole::Prepare => Side::Classical,
            FragmentRole::Measure | FragmentRole::Joint => Side::Device,
        }
    }

    pub fn variant_count(&self) -> usize {
        3usize.pow(self.cut_outputs.len() as u32) * 4usize.pow(self.cut_inputs.len() as u32)
    }

    /// Bases (per cut output) and preparations (per cut input) of a variant.
    /// Bases are the low mixed-radix digits, first cut least significant.
    pub fn variant(&self, mut index: usize) -> (Vec<MeasureBasis>, Vec<PrepState>) {
        let bases = self
            .cut_outputs
            .iter()
            .map(|_| {
                let b = MeasureBasis::ALL[index % 3];
                index /= 3;
                b
            })
            .collect();
        let preps = self
            .cut_inputs
            .iter()
            .map(|_| {
                let p = PrepState::ALL[index % 4];
                index /= 4;
                p
            })
            .collect();
        (bases, preps)
    }

    fn variant_index(&self, bases: impl Iterator<Item = MeasureBasis>, preps: impl Iterator<Item = PrepState>) -> usize {
        let (mut index, mut radix) = (0, 1);
        for b in bases {
            index += b.index() * radix;
            radix *= 3;
        }
        for p in preps {
            index += p.index() * radix;
            radix *= 4;
        }
        index
    }

    /// Basis-change gates for the severed segments.
    pub fn suffix(&self, bases: &[MeasureBasis]) -> Vec<Gate> {
        self.cut_outputs.iter().zip(bases).flat_map(|(&(_, q), b)| b.rotation(q)).collect()
    }

    /// Complete variant circuit: preparations, body, basis changes, measurements.
    pub fn circuit(&self, bases: &[MeasureBasis], preps: &[PrepState]) -> Result<Circuit> {
        let mut c = Circuit::named(self.body.width(), self.body.name());
        for (&(_, q), p) in self.cut_inputs.iter().zip(preps) {
            for g in p.preparation(q) {
                c.push(g)?;
            }
        }
        for g in self.body.ops().iter().cloned().chain(self.suffix(bases)) {
            c.push(g)?;
        }
        for &q in &self.measured {
            c.push(Gate::measure(q))?;
        }
        Ok(c)
    }
}

/// One fragment variant to execute.
#[derive(Debug, Clone)]
pub struct FragmentJob {
    pub fragment: usize,
    pub variant: usize,
    pub role: FragmentRole,
    pub bases: Vec<MeasureBasis>,
    pub preps: Vec<PrepState>,
    pub circuit: Circuit,
    pub side: Side,
}

/// Negative-probability tolerance for stitched distributions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Precision {
    Exact,
    Sampled(u64),
}

impl Precision {
    pub fn threshold(self) -> f64 {
        match self {
            Precision::Exact => 1e-9,
            Precision::Sampled(shots) => 10.0 / (shots.max(1) as f64).sqrt(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ReconstructionPlan {
    cuts: Vec<CutPoint>,
    outputs: Vec<usize>,
    fragments: Vec<Fragment>,
    offsets: Vec<usize>,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let parent = self.0[x];
        if parent == x {
            return x;
        }
        let root = self.find(parent);
        self.0[x] = root;
        root
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

impl ReconstructionPlan {
    /// Splits `circuit` at `cuts`. Outcome bits of the reconstruction are the
    /// circuit's measured qubits in ascending order (all qubits when it has no
    /// measurements).
    pub fn new(circuit: &Circuit, cuts: &[CutPoint]) -> Result<Self> {
        let body = circuit.without_measurements();
        let width = circuit.width();
        let outputs = if circuit.has_measurements() { circuit.measured_qubits() } else { (0..width).collect() };
        for (c, cut) in cuts.iter().enumerate() {
            if cut.qubit >= width {
                return Err(Error::QubitOutOfRange { index: cut.qubit, width });
            }
            if cut.position > body.len() {
                return Err(Error::InvalidCut(format!("position {} beyond {} operations", cut.position, body.len())));
            }
            if cuts[..c].contains(cut) {
                return Err(Error::InvalidCut(format!("duplicate cut on qubit {} at {}", cut.qubit, cut.position)));
            }
            let downstream = body.ops()[cut.position..].iter().any(|g| g.qubits().contains(&cut.qubit));
            if !downstream && !outputs.contains(&cut.qubit) {
                return Err(Error::InvalidCut(format!("qubit {} is idle after position {}", cut.qubit, cut.position)));
            }
        }

        // Segment of `qubit` holding operation `k`: the wire of the latest cut at or before `k`.
        let segment = |qubit: usize, k: usize, strict: bool| -> usize {
            cuts.iter()
                .enumerate()
                .filter(|(_, c)| c.qubit == qubit && if strict { c.position < k } else { c.position <= k })
                .max_by_key(|(_, c)| c.position)
                .map_or(qubit, |(i, _)| width + i)
        };
        let wires = width + cuts.len();
        let ops: Vec<Gate> =
            body.ops().iter().enumerate().map(|(k, g)| g.remapped(|q| segment(q, k, false))).collect();
        let final_wire = |q: usize| segment(q, usize::MAX, false);
        let up: Vec<usize> = cuts.iter().map(|c| segment(c.qubit, c.position, true)).collect();
        let down: Vec<usize> = (0..cuts.len()).map(|c| width + c).collect();

        let mut uf = UnionFind((0..wires).collect());
        for g in &ops {
            if let [a, b] = g.qubits() {
                uf.union(*a, *b);
            }
        }
        let mut has_up = vec![false; wires];
        let mut has_down = vec![false; wires];
        let mut keep = vec![false; wires];
        for &w in &up {
            let r = uf.find(w);
            has_up[r] = true;
            keep[r] = true;
        }
        for &w in &down {
            let r = uf.find(w);
            has_down[r] = true;
            keep[r] = true;
        }
        for &q in &outputs {
            let r = uf.find(final_wire(q));
            keep[r] = true;
        }
        let roots: Vec<usize> = (0..wires).map(|w| uf.find(w)).collect();
        let joint = (0..wires).any(|r| has_up[r] && has_down[r]);
        let mut groups: Vec<(FragmentRole, Vec<usize>)> = if joint {
            vec![(FragmentRole::Joint, (0..wires).filter(|&w| keep[roots[w]]).collect())]
        } else {
            vec![
                (FragmentRole::Measure, (0..wires).filter(|&w| keep[roots[w]] && !has_down[roots[w]]).collect()),
                (FragmentRole::Prepare, (0..wires).filter(|&w| keep[roots[w]] && has_down[roots[w]]).collect()),
            ]
        };
        groups.retain(|(_, ws)| !ws.is_empty());

        let output_wires: Vec<usize> = outputs.iter().map(|&q| final_wire(q)).collect();
        let mut fragments = Vec::with_capacity(groups.len());
        for (role, ws) in groups {
            let local = |w: usize| ws.binary_search(&w).ok();
            let mut frag_body = Circuit::named(ws.len(), circuit.name());
            for g in ops.iter().filter(|g| local(g.qubits()[0]).is_some()) {
                frag_body.push(g.remapped(|w| local(w).expect("gate stays inside its component")))?;
            }
            let mut bits: Vec<(usize, BitSource)> = Vec::new();
            for (p, &w) in output_wires.iter().enumerate() {
                if let Some(l) = local(w) {
                    bits.push((l, BitSource::Output(p)));
                }
            }
            let cut_outputs: Vec<(usize, usize)> =
                up.iter().enumerate().filter_map(|(c, &w)| local(w).map(|l| (c, l))).collect();
            let cut_inputs: Vec<(usize, usize)> =
                down.iter().enumerate().filter_map(|(c, &w)| local(w).map(|l| (c, l))).collect();
            bits.extend(cut_outputs.iter().map(|&(c, l)| (l, BitSource::Cut(c))));
            bits.sort_by_key(|&(l, _)| l);
            if bits.is_empty() {
                // Nothing observed downstream: every preparation has unit trace,
                // and the measure side's Z terms already sum to the marginal.
                continue;
            }
            fragments.push(Fragment {
                role,
                body: frag_body,
                measured: bits.iter().map(|&(l, _)| l).collect(),
                sources: bits.iter().map(|&(_, s)| s).collect(),
                cut_outputs,
                cut_inputs,
            });
        }
        let offsets = fragments
            .iter()
            .scan(0, |acc, f| {
                let start = *acc;
                *acc += f.variant_count();
                Some(start)
            })
            .collect();
        Ok(Self { cuts: cuts.to_vec(), outputs, fragments, offsets })
    }

    pub fn cuts(&self) -> &[CutPoint] {
        &self.cuts
    }

    /// Original qubits behind the reconstructed outcome bits.
    pub fn outputs(&self) -> &[usize] {
        &self.outputs
    }

    pub fn fragments(&self) -> &[Fragment] {
        &self.fragments
    }

    pub fn job_count(&self) -> usize {
        self.fragments.iter().map(Fragment::variant_count).sum()
    }

    /// Position of `(fragment, variant)` in [`Self::jobs`] order.
    pub fn job_index(&self, fragment: usize, variant: usize) -> usize {
        self.offsets[fragment] + variant
    }

    pub fn jobs(&self) -> Result<Vec<FragmentJob>> {
        let mut jobs = Vec::with_capacity(self.job_count());
        for (f, frag) in self.fragments.iter().enumerate() {
            for v in 0..frag.variant_count() {
                let (bases, preps) = frag.variant(v);
                jobs.push(FragmentJob {
                    fragment: f,
                    variant: v,
                    role: frag.role,
                    circuit: frag.circuit(&bases, &preps)?,
                    bases,
                    preps,
                    side: frag.side(),
                });
            }
        }
        Ok(jobs)
    }
}

pub fn cut_wire(circuit: &Circuit, cut: CutPoint) -> Result<(Vec<FragmentJob>, ReconstructionPlan)> {
    cut_wires(circuit, &[cut])
}

pub fn cut_wires(circuit: &Circuit, cuts: &[CutPoint]) -> Result<(Vec<FragmentJob>, ReconstructionPlan)> {
    let plan = ReconstructionPlan::new(circuit, cuts)?;
    Ok((plan.jobs()?, plan))
}

/// Stitches fragment distributions (in [`ReconstructionPlan::jobs`] order;
/// bit `j` of each is the fragment's `measured[j]`) into the uncut distribution.
pub fn reconstruct(plan: &ReconstructionPlan, results: &[Distribution], precision: Precision) -> Result<Distribution> {
    if results.len() != plan.job_count() {
        return Err(Error::Invalid(format!("expected {} fragment results, got {}", plan.job_count(), results.len())));
    }
    for (f, frag) in plan.fragments.iter().enumerate() {
        for v in 0..frag.variant_count() {
            let found = results[plan.job_index(f, v)].width();
            if found != frag.measured.len() {
                return Err(Error::Invalid(format!(
                    "fragment {f} variant {v} has {found} bits, expected {}",
                    frag.measured.len()
                )));
            }
        }
    }
    let out_width = plan.outputs.len();
    let cut_count = plan.cuts.len();
    // Outcome-bit offsets of each fragment contributed by the uncut outputs.
    let base_index: Vec<Vec<usize>> = plan
        .fragments
        .iter()
        .map(|frag| {
            (0..1usize << out_width)
                .map(|x| {
                    frag.sources.iter().enumerate().fold(0, |acc, (j, s)| match s {
                        BitSource::Output(p) => acc | (((x >> p) & 1) << j),
                        BitSource::Cut(_) => acc,
                    })
                })
                .collect()
        })
        .collect();

    let mut stitched = vec![0.0; 1 << out_width];
    let mut choice = vec![0usize; cut_count];
    let mut factors: Vec<(&Distribution, usize)> = Vec::with_capacity(plan.fragments.len());
    loop {
        let coefficient: f64 = choice.iter().map(|&t| TERMS[t].coefficient()).product();
        factors.clear();
        for (f, frag) in plan.fragments.iter().enumerate() {
            let variant = frag.variant_index(
                frag.cut_outputs.iter().map(|&(c, _)| TERMS[choice[c]].basis),
                frag.cut_inputs.iter().map(|&(c, _)| TERMS[choice[c]].prep),
            );
            let cut_bits = frag.sources.iter().enumerate().fold(0, |acc, (j, s)| match s {
                BitSource::Cut(c) => acc | (usize::from(TERMS[choice[*c]].outcome) << j),
                BitSource::Output(_) => acc,
            });
            factors.push((&results[plan.job_index(f, variant)], cut_bits));
        }
        for (x, slot) in stitched.iter_mut().enumerate() {
            let product: f64 =
                factors.iter().zip(&base_index).map(|((dist, cut_bits), base)| dist.prob(base[x] | cut_bits)).product();
            *slot += coefficient * product;
        }
        // Advance the mixed-radix term counter; stop after the last tuple.
        let mut k = 0;
        while k < cut_count {
            choice[k] += 1;
            if choice[k] < TERMS.len() {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
        if k == cut_count {
            break;
        }
    }

    let threshold = precision.threshold();
    if let Some(&worst) = stitched.iter().filter(|&&p| p < -threshold).min_by(|a, b| a.total_cmp(b)) {
        return Err(Error::ReconstructionNegativity { value: worst, threshold });
    }
    Distribution::from_weights(out_width, stitched.into_iter().map(|p| p.max(0.0)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use vdcut_noise::{evolve, exact_probs, NoiseModel};

    fn run_exact(jobs: &[FragmentJob]) -> Vec<Distribution> {
        jobs.iter()
            .map(|j| {
                let rho = evolve(&j.circuit.without_measurements(), &NoiseModel::noiseless()).unwrap();
                exact_probs(&rho).unwrap().marginal(&j.circuit.measured_qubits())
            })
            .collect()
    }

    #[test]
    fn single_wire_cut_has_three_measure_and_four_prepare_jobs() {
        let c = Circuit::from_gates(1, [Gate::ry(0.4, 0), Gate::rz(0.3, 0), Gate::ry(1.1, 0), Gate::measure(0)]).unwrap();
        let (jobs, plan) = cut_wire(&c, CutPoint::new(0, 2)).unwrap();
        let count = |r| jobs.iter().filter(|j| j.role == r).count();
        assert_eq!((count(FragmentRole::Measure), count(FragmentRole::Prepare)), (3, 4));
        let got = reconstruct(&plan, &run_exact(&jobs), Precision::Exact).unwrap();
        let want = exact_probs(&evolve(&c.without_measurements(), &NoiseModel::noiseless()).unwrap()).unwrap();
        assert!(got.total_variation(&want) < 1e-12);
    }

    #[test]
    fn zero_wire_into_identity() {
        let c = Circuit::from_gates(1, [Gate::measure(0)]).unwrap();
        let (jobs, plan) = cut_wire(&c, CutPoint::new(0, 0)).unwrap();
        let got = reconstruct(&plan, &run_exact(&jobs), Precision::Exact).unwrap();
        assert!((got.prob(0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn plus_state_cut_before_measurement() {
        let c = Circuit::from_gates(1, [Gate::h(0), Gate::measure(0)]).unwrap();
        let (jobs, plan) = cut_wire(&c, CutPoint::new(0, 1)).unwrap();
        let got = reconstruct(&plan, &run_exact(&jobs), Precision::Exact).unwrap();
        assert!((got.prob(0) - 0.5).abs() < 1e-15 && (got.prob(1) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn vacuous_and_out_of_range_cuts_are_rejected() {
        let c = Circuit::from_gates(2, [Gate::h(0), Gate::cnot(0, 1), Gate::measure(1)]).unwrap();
        assert!(matches!(cut_wire(&c, CutPoint::new(0, 2)), Err(Error::InvalidCut(_))));
        assert!(matches!(cut_wire(&c, CutPoint::new(0, 3)), Err(Error::InvalidCut(_))));
        assert!(matches!(cut_wire(&c, CutPoint::new(2, 0)), Err(Error::QubitOutOfRange { .. })));
        assert!(cut_wire(&c, CutPoint::new(1, 2)).is_ok());
    }

    #[test]
    fn non_separating_cut_becomes_joint() {
        let c = Circuit::from_gates(2, [Gate::cnot(0, 1), Gate::ry(0.3, 0), Gate::cnot(1, 0)]).unwrap();
        let (jobs, plan) = cut_wire(&c, CutPoint::new(0, 1)).unwrap();
        assert_eq!(plan.fragments().len(), 1);
        assert_eq!(jobs.len(), 12);
        let got = reconstruct(&plan, &run_exact(&jobs), Precision::Exact).unwrap();
        let want = exact_probs(&evolve(&c, &NoiseModel::noiseless()).unwrap()).unwrap();
        assert!(got.total_variation(&want) < 1e-12);
    }

    #[test]
    fn negativity_beyond_threshold_is_an_error() {
        let c = Circuit::from_gates(1, [Gate::ry(std::f64::consts::FRAC_PI_4, 0), Gate::measure(0)]).unwrap();
        let (jobs, plan) = cut_wire(&c, CutPoint::new(0, 0)).unwrap();
        let mut results = run_exact(&jobs);
        // Claiming X = −1 on top of Z = +1 describes no physical state.
        results[plan.job_index(0, 0)] = Distribution::point(1, 1);
        assert!(matches!(
            reconstruct(&plan, &results, Precision::Exact),
            Err(Error::ReconstructionNegativity { .. })
        ));
    }
}

//! Noisy circuit evolution.

use crate::density::DensityMatrix;
use crate::model::NoiseModel;
use crate::superop::Superop;
use vdcut_core::circuit::TAG_XTALK;
use vdcut_core::linalg::gates;
use vdcut_core::{Circuit, Error, Gate, Result};

pub const DEFAULT_MAX_QUBITS: usize = 14;

/// Channel for one gate: ideal unitary, then depolarizing, then relaxation.
/// Crosstalk-tagged gates stay ideal.
pub fn gate_channel(gate: &Gate, noise: &NoiseModel) -> Result<Superop> {
    let u = gate.matrix().ok_or(Error::ContainsMeasurement)?;
    let ideal = Superop::unitary(&u);
    if gate.has_tag(TAG_XTALK) {
        return Ok(ideal);
    }
    let k = gate.qubits().len();
    let (p, duration) = if k == 1 {
        (noise.depolarizing_1q, noise.duration_1q)
    } else {
        (noise.depolarizing_2q, noise.duration_2q)
    };
    let mut s = ideal;
    if p > 0.0 {
        s = Superop::depolarizing(k, p).after(&s);
    }
    if let Some((gamma, dephase)) = noise.relaxation(duration) {
        let r = Superop::relaxation(gamma, dephase);
        let relax = if k == 1 { r } else { Superop::pair(&r, &r) };
        s = relax.after(&s);
    }
    Ok(s)
}

/// A circuit lowered to a sequence of fused local channels.
struct Program {
    steps: Vec<(Superop, Vec<usize>)>,
}

fn swap_superop() -> Superop {
    Superop::unitary(&gates::swap())
}

fn compile(circuit: &Circuit, noise: &NoiseModel) -> Result<Program> {
    let width = circuit.width();
    let mut pending: Vec<Option<Superop>> = vec![None; width];
    let mut steps: Vec<(Superop, Vec<usize>)> = Vec::new();
    let mut last_step: Vec<Option<usize>> = vec![None; width];
    for gate in circuit.ops() {
        if gate.is_measure() {
            return Err(Error::ContainsMeasurement);
        }
        let channel = gate_channel(gate, noise)?;
        let qs = gate.qubits();
        if qs.len() == 1 {
            let q = qs[0];
            pending[q] = Some(match pending[q].take() {
                Some(prev) => channel.after(&prev),
                None => channel,
            });
            continue;
        }
        let (a, b) = (qs[0], qs[1]);
        let pa = pending[a].take().unwrap_or_else(|| Superop::identity(1));
        let pb = pending[b].take().unwrap_or_else(|| Superop::identity(1));
        let local = Superop::pair(&pa, &pb);
        let op = channel.after(&local);
        match (last_step[a], last_step[b]) {
            (Some(i), Some(j)) if i == j => {
                // Nothing touched a or b since step i: fuse into it.
                let (prev, prev_qs) = &steps[i];
                let op_in_prev_order = if prev_qs[0] == a { op } else { swap_superop().after(&op).after(&swap_superop()) };
                let fused = op_in_prev_order.after(prev);
                steps[i].0 = fused;
            }
            _ => {
                steps.push((op, vec![a, b]));
                last_step[a] = Some(steps.len() - 1);
                last_step[b] = Some(steps.len() - 1);
            }
        }
    }
    for (q, p) in pending.into_iter().enumerate() {
        if let Some(op) = p {
            steps.push((op, vec![q]));
        }
    }
    Ok(Program { steps })
}

/// Evolves `|0…0⟩` through `circuit` under `noise`.
pub fn evolve(circuit: &Circuit, noise: &NoiseModel) -> Result<DensityMatrix> {
    evolve_limited(circuit, noise, DEFAULT_MAX_QUBITS)
}

pub fn evolve_limited(circuit: &Circuit, noise: &NoiseModel, max_qubits: usize) -> Result<DensityMatrix> {
    if circuit.width() > max_qubits {
        return Err(Error::TooManyQubits { width: circuit.width(), limit: max_qubits });
    }
    evolve_from(DensityMatrix::zero_state(circuit.width()), circuit, noise)
}

/// Evolves an arbitrary starting state of matching width.
pub fn evolve_from(mut rho: DensityMatrix, circuit: &Circuit, noise: &NoiseModel) -> Result<DensityMatrix> {
    if rho.width() != circuit.width() {
        return Err(Error::Invalid(format!(
            "state has {} qubits, circuit {}",
            rho.width(),
            circuit.width()
        )));
    }
    let program = compile(circuit, noise)?;
    for (op, qs) in &program.steps {
        rho.apply(&op.sparse(), qs);
    }
    Ok(rho)
}

//! Lowering to the {RY, RZ, X, H, CNOT} basis.

use crate::kak::decompose_unitary;
use vdcut_core::{Circuit, Gate, GateKind};

/// Rewrites SWAP, RZZ and explicit two-qubit unitaries into CNOTs and
/// single-qubit rotations. Tags carry over to every emitted gate.
pub fn decompose_to_basis(circuit: &Circuit) -> Circuit {
    let mut ops = Vec::with_capacity(circuit.len());
    for g in circuit.ops() {
        let tag = g.tag();
        let q = g.qubits();
        match g.kind() {
            GateKind::SWAP => {
                let (a, b) = (q[0], q[1]);
                ops.extend([Gate::cnot(a, b), Gate::cnot(b, a), Gate::cnot(a, b)].map(|x| x.with_tag_opt(tag)));
            }
            GateKind::RZZ(theta) => {
                let (a, b) = (q[0], q[1]);
                ops.extend([Gate::cnot(a, b), Gate::rz(*theta, b), Gate::cnot(a, b)].map(|x| x.with_tag_opt(tag)));
            }
            GateKind::Unitary(m) => {
                ops.extend(decompose_unitary(m, q[0], q[1]).into_iter().map(|x| x.with_tag_opt(tag)));
            }
            _ => ops.push(g.clone()),
        }
    }
    Circuit::from_gates(circuit.width(), ops)
        .expect("decomposition preserves validity")
        .with_name(circuit.name().to_owned())
}

pub fn cnot_count(circuit: &Circuit) -> usize {
    circuit.count_kind(|k| matches!(k, GateKind::CNOT))
}

pub fn is_basis(circuit: &Circuit) -> bool {
    circuit.ops().iter().all(|g| {
        matches!(
            g.kind(),
            GateKind::RY(_) | GateKind::RZ(_) | GateKind::X | GateKind::H | GateKind::CNOT | GateKind::Measure
        )
    })
}

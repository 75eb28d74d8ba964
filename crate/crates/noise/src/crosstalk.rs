//! ZZ crosstalk between simultaneous neighbouring two-qubit gates.

use vdcut_core::circuit::TAG_XTALK;
use vdcut_core::{build_dag, Circuit, Gate, GateKind};
use vdcut_transpiler::CouplingMap;

fn is_entangling_slot(g: &Gate) -> bool {
    matches!(g.kind(), GateKind::CNOT | GateKind::SWAP)
}

/// Lowest-index adjacent qubit pair linking two gates, if any.
fn linking_pair(a: &Gate, b: &Gate, map: &CouplingMap) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for &p in a.qubits() {
        for &q in b.qubits() {
            if p < map.qubits() && q < map.qubits() && map.are_adjacent(p, q) {
                let pair = (p.min(q), p.max(q));
                if best.is_none_or(|b| pair < b) {
                    best = Some(pair);
                }
            }
        }
    }
    best
}

/// Crosstalk gates per DAG layer (ops re-emitted layer by layer, each layer
/// followed by its `RZZ(angle)` crosstalk gates tagged "xtalk").
pub fn insert_zz_crosstalk(circuit: &Circuit, map: &CouplingMap, angle: f64) -> Circuit {
    let dag = build_dag(circuit);
    let ops = circuit.ops();
    let mut out = Vec::with_capacity(ops.len());
    for layer in dag.layers() {
        let slots: Vec<&Gate> = layer.iter().map(|&k| &ops[k]).filter(|g| is_entangling_slot(g)).collect();
        let mut extra = Vec::new();
        for (i, a) in slots.iter().enumerate() {
            for b in &slots[i + 1..] {
                if let Some((p, q)) = linking_pair(a, b, map) {
                    extra.push(Gate::rzz(angle, p, q).with_tag(TAG_XTALK));
                }
            }
        }
        out.extend(layer.iter().map(|&k| ops[k].clone()));
        out.extend(extra);
    }
    // Crosstalk gates only touch qubits of the current layer's gates, so
    // measurements stay terminal.
    Circuit::from_gates(circuit.width(), out)
        .expect("layer order is a valid topological order")
        .with_name(circuit.name().to_owned())
}

pub fn rzz_count(circuit: &Circuit) -> usize {
    circuit.count_kind(|k| matches!(k, GateKind::RZZ(_)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::DEFAULT_CROSSTALK_ANGLE;

    #[test]
    fn neighbouring_cnots_get_one_rzz() {
        let c = Circuit::from_gates(4, [Gate::cnot(0, 1), Gate::cnot(2, 3)]).unwrap();
        let out = insert_zz_crosstalk(&c, &CouplingMap::linear(4), DEFAULT_CROSSTALK_ANGLE);
        assert_eq!(out.len(), 3);
        assert_eq!(out.ops()[2], Gate::rzz(DEFAULT_CROSSTALK_ANGLE, 1, 2).with_tag("xtalk"));
    }

    #[test]
    fn lone_cnot_unchanged() {
        let c = Circuit::from_gates(2, [Gate::cnot(0, 1)]).unwrap();
        assert_eq!(insert_zz_crosstalk(&c, &CouplingMap::linear(2), DEFAULT_CROSSTALK_ANGLE), c);
    }

    #[test]
    fn distant_cnots_unchanged() {
        let c = Circuit::from_gates(6, [Gate::cnot(0, 1), Gate::cnot(4, 5)]).unwrap();
        let out = insert_zz_crosstalk(&c, &CouplingMap::linear(6), DEFAULT_CROSSTALK_ANGLE);
        assert_eq!(rzz_count(&out), 0);
    }

    #[test]
    fn lowest_index_link_chosen() {
        // Ring 0-1-2-3-0: CNOT(0,1) and CNOT(2,3) touch via (1,2) and (0,3).
        let map = CouplingMap::custom(4, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let c = Circuit::from_gates(4, [Gate::cnot(0, 1), Gate::cnot(3, 2)]).unwrap();
        let out = insert_zz_crosstalk(&c, &map, 0.5);
        assert_eq!(out.ops()[2].qubits(), &[0, 3]);
    }
}

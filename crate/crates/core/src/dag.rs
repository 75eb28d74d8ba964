//! Dependency graph over circuit operations and lightcone pruning.

use crate::circuit::Circuit;
use std::collections::BTreeSet;

/// Data-dependency DAG: node `k` is operation `k` of the circuit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dag {
    predecessors: Vec<Vec<usize>>,
    layer: Vec<usize>,
}

impl Dag {
    pub fn node_count(&self) -> usize {
        self.layer.len()
    }

    /// Direct predecessors of a node (the last earlier op on each of its qubits).
    pub fn predecessors(&self, node: usize) -> &[usize] {
        &self.predecessors[node]
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.predecessors.iter().enumerate().flat_map(|(to, ps)| ps.iter().map(move |&from| (from, to)))
    }

    /// Earliest layer of each node.
    pub fn layer(&self, node: usize) -> usize {
        self.layer[node]
    }

    pub fn depth(&self) -> usize {
        self.layer.iter().map(|l| l + 1).max().unwrap_or(0)
    }

    /// Node indices grouped by layer, ascending within each layer.
    pub fn layers(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.depth()];
        for (node, &l) in self.layer.iter().enumerate() {
            out[l].push(node);
        }
        out
    }
}

pub fn build_dag(circuit: &Circuit) -> Dag {
    let mut last_on_qubit: Vec<Option<usize>> = vec![None; circuit.width()];
    let mut predecessors = Vec::with_capacity(circuit.len());
    let mut layer = Vec::with_capacity(circuit.len());
    for (node, gate) in circuit.ops().iter().enumerate() {
        let mut preds: Vec<usize> = gate.qubits().iter().filter_map(|&q| last_on_qubit[q]).collect();
        preds.sort_unstable();
        preds.dedup();
        let l = preds.iter().map(|&p| layer[p] + 1).max().unwrap_or(0);
        for &q in gate.qubits() {
            last_on_qubit[q] = Some(node);
        }
        predecessors.push(preds);
        layer.push(l);
    }
    Dag { predecessors, layer }
}

/// Keeps only operations in the backward dependency cone of the final
/// segments of `sinks`. Width and relative order are preserved.
pub fn lightcone(circuit: &Circuit, sinks: &BTreeSet<usize>) -> Circuit {
    let mut live = vec![false; circuit.width()];
    for &q in sinks {
        if q < live.len() {
            live[q] = true;
        }
    }
    let mut keep = vec![false; circuit.len()];
    for (k, gate) in circuit.ops().iter().enumerate().rev() {
        if gate.qubits().iter().any(|&q| live[q]) {
            keep[k] = true;
            for &q in gate.qubits() {
                live[q] = true;
            }
        }
    }
    let ops = circuit.ops().iter().zip(&keep).filter(|(_, &k)| k).map(|(g, _)| g.clone()).collect();
    Circuit::from_parts_unchecked(circuit.width(), ops, circuit.name().to_owned())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::Gate;

    fn circ(width: usize, gates: Vec<Gate>) -> Circuit {
        Circuit::from_gates(width, gates).unwrap()
    }

    #[test]
    fn independent_rotations_share_layer_zero() {
        let dag = build_dag(&circ(2, vec![Gate::ry(0.1, 0), Gate::ry(0.2, 1)]));
        assert_eq!(dag.node_count(), 2);
        assert_eq!(dag.edges().count(), 0);
        assert_eq!((dag.layer(0), dag.layer(1)), (0, 0));
    }

    #[test]
    fn chained_cnots_are_layered() {
        let dag = build_dag(&circ(3, vec![Gate::cnot(0, 1), Gate::cnot(1, 2)]));
        assert_eq!(dag.edges().collect::<Vec<_>>(), vec![(0, 1)]);
        assert_eq!((dag.layer(0), dag.layer(1)), (0, 1));
    }

    #[test]
    fn disjoint_cnots_share_layer() {
        let dag = build_dag(&circ(4, vec![Gate::cnot(0, 1), Gate::cnot(2, 3)]));
        assert_eq!(dag.edges().count(), 0);
        assert_eq!(dag.layers(), vec![vec![0, 1]]);
    }

    #[test]
    fn lightcone_drops_unrelated_rotation() {
        let c = circ(2, vec![Gate::ry(0.1, 0), Gate::ry(0.2, 1)]);
        let pruned = lightcone(&c, &BTreeSet::from([0]));
        assert_eq!(pruned.ops(), &[Gate::ry(0.1, 0)]);
    }

    #[test]
    fn lightcone_follows_cnot() {
        let c = circ(3, vec![Gate::cnot(0, 1), Gate::ry(0.3, 2)]);
        let pruned = lightcone(&c, &BTreeSet::from([1]));
        assert_eq!(pruned.ops(), &[Gate::cnot(0, 1)]);
    }

    #[test]
    fn lightcone_ignores_gates_after_last_interaction() {
        // The CNOT(1,2) happens after qubit 0's last use and cannot influence it.
        let c = circ(3, vec![Gate::cnot(0, 1), Gate::cnot(1, 2)]);
        let pruned = lightcone(&c, &BTreeSet::from([0]));
        assert_eq!(pruned.ops(), &[Gate::cnot(0, 1)]);
    }
}

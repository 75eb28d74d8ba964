//! Greedy lookahead SWAP routing.

use crate::coupling::{CouplingMap, MapKind};
use vdcut_core::{Circuit, Error, Gate, GateKind, Result};

/// Number of upcoming two-qubit gates scored when choosing a SWAP.
pub const LOOKAHEAD: usize = 20;
/// Weight of the mean lookahead distance relative to the front-layer sum.
const LOOKAHEAD_WEIGHT: f64 = 0.5;
/// Penalty growth per SWAP on a qubit since the last executed gate.
const DECAY_STEP: f64 = 0.001;

#[derive(Debug, Clone, PartialEq)]
pub struct RoutedCircuit {
    /// Circuit over physical qubits; every two-qubit gate lies on a coupling edge.
    pub circuit: Circuit,
    /// `initial_layout[logical] = physical` before the first gate.
    pub initial_layout: Vec<usize>,
    /// Placement after all inserted SWAPs; measurements use this layout.
    pub final_layout: Vec<usize>,
    pub swaps_inserted: usize,
}

/// Initial placement: identity on fully-connected and linear maps,
/// breadth-first from the hub qubit otherwise.
pub fn initial_layout(width: usize, map: &CouplingMap) -> Vec<usize> {
    match map.kind() {
        MapKind::FullyConnected | MapKind::Linear => (0..width).collect(),
        _ => map.bfs_order().into_iter().take(width).collect(),
    }
}

struct Router<'a> {
    map: &'a CouplingMap,
    /// logical -> physical
    layout: Vec<usize>,
    /// physical -> logical
    occupant: Vec<Option<usize>>,
    out: Vec<Gate>,
    swaps: usize,
}

impl Router<'_> {
    fn phys(&self, logical: usize) -> usize {
        self.layout[logical]
    }

    fn swap(&mut self, a: usize, b: usize) {
        let (la, lb) = (self.occupant[a], self.occupant[b]);
        self.occupant[a] = lb;
        self.occupant[b] = la;
        if let Some(l) = la {
            self.layout[l] = b;
        }
        if let Some(l) = lb {
            self.layout[l] = a;
        }
        self.out.push(Gate::swap(a, b));
        self.swaps += 1;
    }

    fn executable(&self, g: &Gate) -> bool {
        !g.is_two_qubit() || self.map.are_adjacent(self.phys(g.qubits()[0]), self.phys(g.qubits()[1]))
    }

    fn distance_sum(&self, pairs: &[(usize, usize)]) -> f64 {
        pairs.iter().map(|&(a, b)| self.map.distance(self.layout[a], self.layout[b]) as f64).sum()
    }

    /// Front-layer distance plus the weighted mean distance of the lookahead gates.
    fn cost(&self, front: &[(usize, usize)], lookahead: &[(usize, usize)]) -> f64 {
        let ahead = if lookahead.is_empty() {
            0.0
        } else {
            LOOKAHEAD_WEIGHT * self.distance_sum(lookahead) / lookahead.len() as f64
        };
        self.distance_sum(front) + ahead
    }
}

/// Routes `circuit` onto `map`. Measurements are removed before routing and
/// re-attached at each measured qubit's final physical location.
pub fn route(circuit: &Circuit, map: &CouplingMap) -> Result<RoutedCircuit> {
    let width = circuit.width();
    if width > map.qubits() {
        return Err(Error::DeviceTooSmall { width, device: map.qubits() });
    }
    let measured = circuit.measured_qubits();
    let ops: Vec<Gate> = circuit.ops().iter().filter(|g| !g.is_measure()).cloned().collect();
    let layout = initial_layout(width, map);
    let mut occupant = vec![None; map.qubits()];
    for (l, &p) in layout.iter().enumerate() {
        occupant[p] = Some(l);
    }
    let mut r = Router { map, layout: layout.clone(), occupant, out: Vec::with_capacity(ops.len()), swaps: 0 };
    let mut done = vec![false; ops.len()];
    let mut remaining = ops.len();
    let mut last_swap: Option<(usize, usize)> = None;
    let mut swaps_without_progress = 0usize;
    let mut decay = vec![1.0f64; map.qubits()];
    let stall_limit = 2 * map.qubits().max(4);

    while remaining > 0 {
        // Execute every front gate that is already routable.
        let mut progressed = true;
        while progressed {
            progressed = false;
            let mut blocked = vec![false; width];
            for (k, g) in ops.iter().enumerate() {
                if done[k] {
                    continue;
                }
                let free = g.qubits().iter().all(|&q| !blocked[q]);
                if free && r.executable(g) {
                    r.out.push(g.remapped(|q| r.layout[q]));
                    done[k] = true;
                    remaining -= 1;
                    progressed = true;
                    last_swap = None;
                    swaps_without_progress = 0;
                    decay.iter_mut().for_each(|d| *d = 1.0);
                } else {
                    for &q in g.qubits() {
                        blocked[q] = true;
                    }
                }
            }
        }
        if remaining == 0 {
            break;
        }

        let mut blocked = vec![false; width];
        let mut front: Vec<(usize, usize)> = Vec::new();
        let mut lookahead: Vec<(usize, usize)> = Vec::new();
        for (k, g) in ops.iter().enumerate() {
            if done[k] {
                continue;
            }
            if g.is_two_qubit() {
                let pair = (g.qubits()[0], g.qubits()[1]);
                if g.qubits().iter().all(|&q| !blocked[q]) {
                    front.push(pair);
                } else if lookahead.len() < LOOKAHEAD {
                    lookahead.push(pair);
                }
            }
            for &q in g.qubits() {
                blocked[q] = true;
            }
            if lookahead.len() >= LOOKAHEAD {
                break;
            }
        }

        if swaps_without_progress >= stall_limit {
            // Fallback: walk the first front gate's control along a shortest path.
            let (a, b) = front[0];
            let path = map.shortest_path(r.phys(a), r.phys(b));
            for w in path.windows(2).take(path.len().saturating_sub(2)) {
                r.swap(w[0], w[1]);
            }
            swaps_without_progress = 0;
            last_swap = None;
            continue;
        }

        let mut touched: Vec<usize> = front.iter().flat_map(|&(a, b)| [r.phys(a), r.phys(b)]).collect();
        touched.sort_unstable();
        touched.dedup();
        let mut best: Option<(f64, (usize, usize))> = None;
        for &(a, b) in map.edges() {
            if touched.binary_search(&a).is_err() && touched.binary_search(&b).is_err() {
                continue;
            }
            if last_swap == Some((a, b)) {
                continue;
            }
            r.swap_layout_only(a, b);
            let score = decay[a].max(decay[b]) * r.cost(&front, &lookahead);
            r.swap_layout_only(a, b);
            let better = match best {
                None => true,
                Some((s, e)) => score < s || (score == s && (a, b) < e),
            };
            if better {
                best = Some((score, (a, b)));
            }
        }
        let (_, (a, b)) = best.expect("a connected map offers a SWAP next to every front gate");
        r.swap(a, b);
        decay[a] += DECAY_STEP;
        decay[b] += DECAY_STEP;
        last_swap = Some((a, b));
        swaps_without_progress += 1;
    }

    let final_layout = r.layout.clone();
    for &q in &measured {
        r.out.push(Gate::measure(final_layout[q]));
    }
    let swaps_inserted = r.swaps;
    let physical = Circuit::from_gates(map.qubits(), r.out)?.with_name(circuit.name().to_owned());
    Ok(RoutedCircuit { circuit: physical, initial_layout: layout, final_layout, swaps_inserted })
}

impl Router<'_> {
    fn swap_layout_only(&mut self, a: usize, b: usize) {
        let (la, lb) = (self.occupant[a], self.occupant[b]);
        self.occupant[a] = lb;
        self.occupant[b] = la;
        if let Some(l) = la {
            self.layout[l] = b;
        }
        if let Some(l) = lb {
            self.layout[l] = a;
        }
    }
}

impl RoutedCircuit {
    /// Checks that every two-qubit gate acts on a coupling edge and that the
    /// SWAP history carries the initial layout to the final layout.
    pub fn verify(&self, map: &CouplingMap) -> bool {
        let mut occupant: Vec<Option<usize>> = vec![None; map.qubits()];
        for (l, &p) in self.initial_layout.iter().enumerate() {
            occupant[p] = Some(l);
        }
        for g in self.circuit.ops() {
            if g.is_two_qubit() {
                let (a, b) = (g.qubits()[0], g.qubits()[1]);
                if !map.are_adjacent(a, b) {
                    return false;
                }
                if matches!(g.kind(), GateKind::SWAP) {
                    occupant.swap(a, b);
                }
            }
        }
        self.final_layout.iter().enumerate().all(|(l, &p)| occupant[p] == Some(l))
    }
}

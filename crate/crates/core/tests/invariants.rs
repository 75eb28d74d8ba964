use proptest::prelude::*;
use std::collections::BTreeSet;
use vdcut_core::linalg::{circuit_unitary, CMatrix};
use vdcut_core::{build_dag, lightcone, Circuit, Gate};

fn gate_strategy(width: usize) -> impl Strategy<Value = Gate> {
    let angle = -3.2f64..3.2;
    let q = 0..width;
    (0..7u8, angle, q.clone(), 1..width.max(2)).prop_map(move |(kind, theta, a, offset)| {
        let b = (a + offset) % width;
        match kind {
            0 => Gate::ry(theta, a),
            1 => Gate::rz(theta, a),
            2 => Gate::h(a),
            3 if width > 1 => Gate::cnot(a, b),
            4 if width > 1 => Gate::rzz(theta, a, b),
            5 if width > 1 => Gate::swap(a, b),
            _ => Gate::x(a),
        }
    })
}

fn circuit_strategy() -> impl Strategy<Value = Circuit> {
    (1usize..=4).prop_flat_map(|width| {
        prop::collection::vec(gate_strategy(width), 0..20)
            .prop_map(move |gates| Circuit::from_gates(width, gates).expect("indices in range"))
    })
}

proptest! {
    #[test]
    fn text_round_trip(c in circuit_strategy()) {
        let parsed = Circuit::from_text(&c.to_text()).unwrap();
        prop_assert_eq!(parsed.to_text(), c.to_text());
        prop_assert_eq!(parsed.len(), c.len());
    }

    #[test]
    fn dag_layers_never_share_a_qubit(c in circuit_strategy()) {
        let dag = build_dag(&c);
        for layer in dag.layers() {
            let mut seen = BTreeSet::new();
            for node in layer {
                for &q in c.ops()[node].qubits() {
                    prop_assert!(seen.insert(q), "qubit {} twice in one layer", q);
                }
            }
        }
        for (from, to) in dag.edges() {
            prop_assert!(from < to && dag.layer(from) < dag.layer(to));
        }
    }

    #[test]
    fn lightcone_is_idempotent(c in circuit_strategy(), mask in 1usize..16) {
        let sinks: BTreeSet<usize> = (0..c.width()).filter(|q| mask & (1 << q) != 0).collect();
        let once = lightcone(&c, &sinks);
        prop_assert_eq!(lightcone(&once, &sinks).to_text(), once.to_text());
    }

    #[test]
    fn two_copies_double_the_gates(c in circuit_strategy()) {
        let both = c.tensor_two_copies().unwrap();
        prop_assert_eq!(both.width(), 2 * c.width());
        prop_assert_eq!(both.len(), 2 * c.len());
        prop_assert!(both.ops()[c.len()..].iter().all(|g| g.qubits().iter().all(|&q| q >= c.width())));
    }

    #[test]
    fn inverse_gates_undo_the_circuit(c in circuit_strategy()) {
        let mut round = c.clone();
        for gate in c.ops().iter().rev() {
            round.push(gate.inverse().unwrap()).unwrap();
        }
        let identity = CMatrix::identity(1 << c.width());
        prop_assert!(circuit_unitary(&round).phase_distance(&identity) < 1e-9);
    }

    #[test]
    fn append_leaves_the_input_unchanged(c in circuit_strategy()) {
        let before = c.to_text();
        let longer = c.append(Gate::x(0)).unwrap();
        prop_assert_eq!(c.to_text(), before);
        prop_assert_eq!(longer.len(), c.len() + 1);
    }

    #[test]
    fn gates_after_measurement_are_rejected(c in circuit_strategy(), q in 0usize..4) {
        let q = q % c.width();
        let measured = c.append(Gate::measure(q)).unwrap();
        prop_assert!(measured.append(Gate::ry(0.1, q)).is_err());
    }
}

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use vdcut_core::linalg::circuit_unitary;
use vdcut_core::{Circuit, Gate, GateKind};
use vdcut_transpiler::{route, CouplingMap};

fn random_circuit(seed: u64, width: usize, len: usize) -> Circuit {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut c = Circuit::new(width);
    for _ in 0..len {
        let a = rng.gen_range(0..width);
        let mut b = rng.gen_range(0..width - 1);
        if b >= a {
            b += 1;
        }
        let g = match rng.gen_range(0..4) {
            0 => Gate::ry(rng.gen_range(-3.0..3.0), a),
            1 => Gate::rzz(rng.gen_range(-3.0..3.0), a, b),
            _ => Gate::cnot(a, b),
        };
        c.push(g).unwrap();
    }
    c
}

/// Output distribution over logical qubits, reading qubit `l` from `layout[l]`.
fn logical_probs(c: &Circuit, layout: &[usize]) -> Vec<f64> {
    let u = circuit_unitary(&c.without_measurements());
    let mut out = vec![0.0; 1 << layout.len()];
    for phys in 0..(1usize << c.width()) {
        let p = u[(phys, 0)].norm_sqr();
        let logical = layout.iter().enumerate().fold(0, |acc, (l, &q)| acc | (((phys >> q) & 1) << l));
        out[logical] += p;
    }
    out
}

fn maps(width: usize) -> Vec<CouplingMap> {
    let mut v = vec![CouplingMap::linear(width), CouplingMap::fully_connected(width)];
    if width == 4 {
        v.push(CouplingMap::custom(4, [(0, 1), (1, 2), (1, 3)]).unwrap());
    }
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn routing_preserves_semantics(seed in any::<u64>(), width in 2usize..=4, len in 0usize..15) {
        let c = random_circuit(seed, width, len);
        let reference = logical_probs(&c, &(0..width).collect::<Vec<_>>());
        for map in maps(width) {
            let r = route(&c, &map).unwrap();
            prop_assert!(r.verify(&map));
            let got = logical_probs(&r.circuit, &r.final_layout);
            let tv: f64 = got.iter().zip(&reference).map(|(a, b)| (a - b).abs()).sum::<f64>() / 2.0;
            prop_assert!(tv < 1e-10, "tv {}", tv);
        }
    }
}

#[test]
fn every_two_qubit_gate_on_heavy_hex_edges() {
    let map = CouplingMap::heavy_hex(3).unwrap();
    for seed in 0..20 {
        let c = random_circuit(seed, 12, 60);
        let r = route(&c, &map).unwrap();
        assert!(r.verify(&map));
        for g in r.circuit.ops().iter().filter(|g| g.is_two_qubit()) {
            assert!(map.are_adjacent(g.qubits()[0], g.qubits()[1]));
        }
        let orig = c.count_kind(|k| !matches!(k, GateKind::SWAP));
        assert_eq!(r.circuit.len(), orig + r.swaps_inserted);
    }
}

#[test]
fn routing_is_deterministic() {
    let map = CouplingMap::heavy_hex(3).unwrap();
    let c = random_circuit(5, 10, 40);
    assert_eq!(route(&c, &map).unwrap(), route(&c, &map).unwrap());
}

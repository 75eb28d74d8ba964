use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::FRAC_1_SQRT_2;
use vdcut_core::linalg::{circuit_unitary, gates, CMatrix, C64};
use vdcut_core::{Circuit, Gate};
use vdcut_transpiler::kak::{canonical, decompose_unitary};
use vdcut_transpiler::{cnot_count, decompose_to_basis, is_basis};

fn haar_unitary(rng: &mut impl Rng, dim: usize) -> CMatrix {
    let normal = |rng: &mut dyn rand::RngCore| {
        let u1: f64 = rng.gen_range(1e-12..1.0);
        let u2: f64 = rng.gen();
        (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
    };
    let g = DMatrix::from_fn(dim, dim, |_, _| Complex64::new(normal(rng), normal(rng)));
    let qr = g.qr();
    let (q, r) = (qr.q(), qr.r());
    let mut m = CMatrix::zeros(dim);
    for c in 0..dim {
        let phase = r[(c, c)] / r[(c, c)].norm();
        for row in 0..dim {
            m[(row, c)] = q[(row, c)] * phase;
        }
    }
    m
}

fn diag_gate() -> CMatrix {
    let s = FRAC_1_SQRT_2;
    CMatrix::from_real([[1.0, 0.0, 0.0, 0.0], [0.0, -s, s, 0.0], [0.0, s, s, 0.0], [0.0, 0.0, 0.0, 1.0]])
}

fn check(u: &CMatrix) -> usize {
    let ops = decompose_unitary(u, 0, 1);
    let c = Circuit::from_gates(2, ops).unwrap();
    let err = circuit_unitary(&c).phase_distance(u);
    assert!(err < 1e-9, "decomposition error {err}");
    assert!(is_basis(&c));
    cnot_count(&c)
}

#[test]
fn random_unitaries_need_at_most_three_cnots() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..300 {
        let u = haar_unitary(&mut rng, 4);
        assert!(check(&u) <= 3);
    }
}

#[test]
fn diagonalizing_gate_needs_three_cnots() {
    // Coordinates (π/8, π/8, π/4): no coordinate vanishes.
    assert_eq!(check(&diag_gate()), 3);
}

fn pauli_rotation(p: &CMatrix, angle: f64) -> CMatrix {
    let pp = gates::pair(p, p);
    let mut m = CMatrix::identity(4).scale(C64::new(angle.cos(), 0.0));
    let s = pp.scale(C64::new(0.0, angle.sin()));
    for r in 0..4 {
        for c in 0..4 {
            m[(r, c)] += s[(r, c)];
        }
    }
    m
}

#[test]
fn two_active_coordinates_use_two_cnots() {
    let (x, y, z) = (gates::x(), gates::y(), gates::z());
    let xy = &pauli_rotation(&x, 0.3) * &pauli_rotation(&y, -0.2);
    let yz = &pauli_rotation(&y, 0.5) * &pauli_rotation(&z, 0.1);
    let xz = &pauli_rotation(&x, 0.7) * &pauli_rotation(&z, 0.25);
    let local = gates::pair(&gates::ry(0.4), &gates::h());
    for m in [xy, yz, xz, pauli_rotation(&y, 0.33)] {
        assert_eq!(check(&m), 2);
        assert_eq!(check(&(&local * &(&m * &local))), 2);
    }
}

#[test]
fn textbook_gates() {
    assert_eq!(check(&gates::cnot()), 2);
    assert_eq!(check(&gates::swap()), 3);
    assert_eq!(check(&gates::rzz(0.7)), 2);
    assert_eq!(check(&gates::pair(&gates::ry(0.3), &gates::rz(1.1))), 0);
    assert_eq!(check(&CMatrix::identity(4)), 0);
    let czlike = gates::pair(&gates::h(), &gates::x());
    assert_eq!(check(&(&gates::cnot() * &czlike)), 2);
}

#[test]
fn canonical_coordinates_of_swap_are_all_active() {
    let c = canonical(&gates::swap());
    assert!(c.coords.iter().all(|x| (x.abs() - std::f64::consts::FRAC_PI_4).abs() < 1e-9));
    assert_eq!(c.cnot_cost(), 3);
}

#[test]
fn swap_and_rzz_lowering() {
    let c = Circuit::from_gates(2, [Gate::swap(0, 1), Gate::rzz(0.4, 0, 1)]).unwrap();
    let d = decompose_to_basis(&c);
    assert_eq!(cnot_count(&d), 5);
    assert_eq!(d.count_kind(|k| matches!(k, vdcut_core::GateKind::RZ(_))), 1);
    assert!(circuit_unitary(&d).phase_distance(&circuit_unitary(&c)) < 1e-12);
}

#[test]
fn empty_circuit_has_no_cnots() {
    assert_eq!(cnot_count(&Circuit::new(3)), 0);
}

fn random_circuit(seed: u64, width: usize, len: usize) -> Circuit {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut c = Circuit::new(width);
    for _ in 0..len {
        let a = rng.gen_range(0..width);
        let mut b = rng.gen_range(0..width - 1);
        if b >= a {
            b += 1;
        }
        let g = match rng.gen_range(0..7) {
            0 => Gate::ry(rng.gen_range(-3.0..3.0), a),
            1 => Gate::rz(rng.gen_range(-3.0..3.0), a),
            2 => Gate::h(a),
            3 => Gate::cnot(a, b),
            4 => Gate::swap(a, b),
            5 => Gate::rzz(rng.gen_range(-3.0..3.0), a, b),
            _ => Gate::unitary(haar_unitary(&mut rng, 4), a, b).unwrap(),
        };
        c.push(g).unwrap();
    }
    c
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn decomposition_preserves_unitary(seed in any::<u64>(), width in 2usize..=4, len in 0usize..12) {
        let c = random_circuit(seed, width, len);
        let d = decompose_to_basis(&c);
        prop_assert!(is_basis(&d));
        prop_assert!(circuit_unitary(&d).phase_distance(&circuit_unitary(&c)) < 1e-9);
    }

    #[test]
    fn decomposition_is_idempotent(seed in any::<u64>(), width in 2usize..=4, len in 0usize..12) {
        let d = decompose_to_basis(&random_circuit(seed, width, len));
        prop_assert_eq!(decompose_to_basis(&d), d);
    }
}


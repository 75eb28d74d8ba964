//! Canonical (KAK) synthesis of two-qubit unitaries into CNOTs and Euler rotations.
//!
//! A unitary is written as `(A1 ⊗ B1) · exp(i(a XX + b YY + c ZZ)) · (A2 ⊗ B2)`.
//! Coordinates that are multiples of π/2 are local and cost nothing, one or two
//! non-trivial coordinates cost two CNOTs, three cost three.

use nalgebra::{Matrix4, SymmetricEigen};
use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};
use vdcut_core::linalg::{gates, CMatrix, C64, ONE, ZERO};
use vdcut_core::Gate;

const COORD_EPS: f64 = 1e-10;

/// Canonical coordinates `(a, b, c)` and the decomposition's entangling cost.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Canonical {
    pub coords: [f64; 3],
}

impl Canonical {
    pub fn cnot_cost(&self) -> usize {
        match self.coords.iter().filter(|c| c.abs() > COORD_EPS).count() {
            0 => 0,
            1 | 2 => 2,
            _ => 3,
        }
    }
}

fn magic() -> CMatrix {
    let s = C64::new(FRAC_1_SQRT_2, 0.0);
    let si = C64::new(0.0, FRAC_1_SQRT_2);
    CMatrix::from_rows([
        [s, ZERO, ZERO, si],
        [ZERO, si, s, ZERO],
        [ZERO, si, -s, ZERO],
        [s, ZERO, ZERO, -si],
    ])
}

fn mul(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b
}

/// Splits a local operator into `(on_second, on_first)` with
/// `op = on_second ⊗ on_first` in the `b0 + 2*b1` convention.
fn factor_local(op: &CMatrix) -> Option<(CMatrix, CMatrix)> {
    // Reshape: R[(h1,h2),(l1,l2)] = op[(2*h1+l1, 2*h2+l2)].
    let entry = |h1: usize, h2: usize, l1: usize, l2: usize| op[(2 * h1 + l1, 2 * h2 + l2)];
    let mut best = (0, 0, 0, 0);
    let mut best_norm = -1.0;
    for h1 in 0..2 {
        for h2 in 0..2 {
            for l1 in 0..2 {
                for l2 in 0..2 {
                    let n = entry(h1, h2, l1, l2).norm();
                    if n > best_norm {
                        best_norm = n;
                        best = (h1, h2, l1, l2);
                    }
                }
            }
        }
    }
    let (bh1, bh2, bl1, bl2) = best;
    let pivot = entry(bh1, bh2, bl1, bl2);
    let mut high = CMatrix::zeros(2);
    let mut low = CMatrix::zeros(2);
    for a in 0..2 {
        for b in 0..2 {
            high[(a, b)] = entry(a, b, bl1, bl2);
            low[(a, b)] = entry(bh1, bh2, a, b) / pivot;
        }
    }
    // Move the scale onto the low factor so the high factor is special unitary.
    let hs = high.det().sqrt();
    let high = high.scale(ONE / hs);
    let low = low.scale(hs);
    if high.kron(&low).max_abs_diff(op) > 1e-9 {
        return None;
    }
    Some((high, low))
}

/// ZYZ Euler angles `(lambda, theta, phi)` with `u ≅ RZ(phi) RY(theta) RZ(lambda)`.
pub fn euler_zyz(u: &CMatrix) -> (f64, f64, f64) {
    let w = u.scale(ONE / u.det().sqrt());
    let a = w[(0, 0)];
    let b = w[(1, 0)];
    let theta = 2.0 * b.norm().atan2(a.norm());
    let (sum, diff) = if b.norm() < 1e-14 {
        (-2.0 * a.arg(), 0.0)
    } else if a.norm() < 1e-14 {
        (0.0, 2.0 * b.arg())
    } else {
        (-2.0 * a.arg(), 2.0 * b.arg())
    };
    let phi = (sum + diff) / 2.0;
    let lambda = (sum - diff) / 2.0;
    (lambda, theta, phi)
}

fn is_trivial_angle(t: f64) -> bool {
    let r = t.rem_euclid(2.0 * PI);
    r.min(2.0 * PI - r) < 1e-12
}

fn push_single(out: &mut Vec<Gate>, u: &CMatrix, q: usize) {
    let (lambda, theta, phi) = euler_zyz(u);
    if !is_trivial_angle(lambda) {
        out.push(Gate::rz(lambda, q));
    }
    if !is_trivial_angle(theta) {
        out.push(Gate::ry(theta, q));
    }
    if !is_trivial_angle(phi) {
        out.push(Gate::rz(phi, q));
    }
}

fn apply_to(acc: &CMatrix, g: &Gate) -> CMatrix {
    let m = g.matrix().expect("unitary gate");
    let full = match g.qubits() {
        [q] if *q == 0 => gates::pair(&m, &CMatrix::identity(2)),
        [_] => gates::pair(&CMatrix::identity(2), &m),
        [0, 1] => m,
        [1, 0] => {
            let s = gates::swap();
            &(&s * &m) * &s
        }
        _ => unreachable!("local qubits are 0 and 1"),
    };
    &full * acc
}

/// Matrix of a gate sequence on local qubits 0 and 1.
pub fn sequence_matrix(ops: &[Gate]) -> CMatrix {
    ops.iter().fold(CMatrix::identity(4), |acc, g| apply_to(&acc, g))
}

/// Entangling core realising `exp(i(a XX + b YY + c ZZ))` up to phase when
/// all three coordinates are active.
fn three_cnot_core(a: f64, b: f64, c: f64) -> Vec<Gate> {
    vec![
        Gate::rz(-FRAC_PI_2, 1),
        Gate::cnot(1, 0),
        Gate::rz(FRAC_PI_2 - 2.0 * c, 0),
        Gate::ry(-FRAC_PI_2 + 2.0 * a, 1),
        Gate::cnot(0, 1),
        Gate::ry(FRAC_PI_2 - 2.0 * b, 1),
        Gate::cnot(1, 0),
        Gate::rz(FRAC_PI_2, 0),
    ]
}

/// `exp(i(x XX + z ZZ))` via CNOT · (exp(i x X) ⊗ exp(i z Z)) · CNOT.
fn two_cnot_core(x: f64, z: f64) -> Vec<Gate> {
    let mut ops = vec![Gate::cnot(0, 1)];
    if x.abs() > COORD_EPS {
        ops.extend([Gate::h(0), Gate::rz(-2.0 * x, 0), Gate::h(0)]);
    }
    if z.abs() > COORD_EPS {
        ops.push(Gate::rz(-2.0 * z, 1));
    }
    ops.push(Gate::cnot(0, 1));
    ops
}

fn to_real(m: &CMatrix, f: impl Fn(C64) -> f64) -> Matrix4<f64> {
    Matrix4::from_fn(|r, c| f(m[(r, c)]))
}

/// Real orthogonal `P` with `det P = 1` diagonalising the complex symmetric
/// unitary `m` (whose real and imaginary parts commute).
fn orthogonal_diagonaliser(m: &CMatrix) -> CMatrix {
    let re = to_real(m, |v| v.re);
    let im = to_real(m, |v| v.im);
    let mut best: Option<(f64, Matrix4<f64>)> = None;
    for k in 0..16 {
        let t = 0.3 + 0.7 * k as f64;
        let combo = re * t.cos() + im * t.sin();
        let eig = SymmetricEigen::new(combo);
        let mut p = eig.eigenvectors;
        if p.determinant() < 0.0 {
            p.column_mut(0).neg_mut();
        }
        let pc = CMatrix::from_fn4(|r, c| C64::new(p[(r, c)], 0.0));
        let d = mul(&mul(&pc.transpose(), m), &pc);
        let off = (0..4)
            .flat_map(|r| (0..4).map(move |c| (r, c)))
            .filter(|(r, c)| r != c)
            .map(|(r, c)| d[(r, c)].norm())
            .fold(0.0, f64::max);
        if off < 1e-11 {
            return pc;
        }
        if best.as_ref().is_none_or(|(o, _)| off < *o) {
            best = Some((off, p));
        }
    }
    let p = best.expect("at least one attempt").1;
    CMatrix::from_fn4(|r, c| C64::new(p[(r, c)], 0.0))
}

trait FromFn4 {
    fn from_fn4(f: impl Fn(usize, usize) -> C64) -> CMatrix;
}

impl FromFn4 for CMatrix {
    fn from_fn4(f: impl Fn(usize, usize) -> C64) -> CMatrix {
        let mut m = CMatrix::zeros(4);
        for r in 0..4 {
            for c in 0..4 {
                m[(r, c)] = f(r, c);
            }
        }
        m
    }
}

/// Reduces a coordinate modulo π/2 into `(-π/4, π/4]`.
fn reduce(x: f64) -> f64 {
    x - (x / FRAC_PI_2).round() * FRAC_PI_2
}

/// Canonical coordinates of `u` (4×4, `b0 + 2*b1` convention).
pub fn canonical(u: &CMatrix) -> Canonical {
    let (_, _, coords) = kak_core(u);
    Canonical { coords }
}

/// Returns `(special-unitary u, K1 in computational basis, reduced coords)`.
fn kak_core(u: &CMatrix) -> (CMatrix, CMatrix, [f64; 3]) {
    let det = u.det();
    let su = u.scale(ONE / det.powf(0.25));
    let mb = magic();
    let mbd = mb.adjoint();
    let up = mul(&mul(&mbd, &su), &mb);
    let m2 = mul(&up.transpose(), &up);
    let p = orthogonal_diagonaliser(&m2);
    let d = mul(&mul(&p.transpose(), &m2), &p);
    let mut theta: Vec<f64> = (0..4).map(|k| d[(k, k)].arg() / 2.0).collect();
    let sum: f64 = theta.iter().sum();
    // K1 = Up P diag(e^{-iθ}) has determinant e^{-iΣθ}; force it to +1.
    let parity = (sum / PI).round();
    if (parity as i64).rem_euclid(2) == 1 {
        theta[0] += PI;
    }
    let dinv = CMatrix::diagonal(&theta.iter().map(|t| C64::from_polar(1.0, -t)).collect::<Vec<_>>());
    let k1 = mul(&mul(&up, &p), &dinv);
    let k1_comp = mul(&mul(&mb, &k1), &mbd);
    let x = [1.0, 1.0, -1.0, -1.0];
    let y = [-1.0, 1.0, -1.0, 1.0];
    let z = [1.0, -1.0, -1.0, 1.0];
    let proj = |v: &[f64; 4]| theta.iter().zip(v).map(|(t, s)| t * s).sum::<f64>() / 4.0;
    let coords = [reduce(proj(&x)), reduce(proj(&y)), reduce(proj(&z))];
    let coords = coords.map(|c| if c.abs() <= COORD_EPS { 0.0 } else { c });
    (su, k1_comp, coords)
}

/// Local single-qubit Clifford applied to both qubits that maps the two
/// chosen Pauli axes onto (X, Z).
fn axis_map(active: [bool; 3]) -> (CMatrix, usize, usize) {
    let s = FRAC_1_SQRT_2;
    match active {
        // XX and YY: rotate Y onto Z about X.
        [_, true, false] => (
            CMatrix::from_rows([[C64::new(s, 0.0), C64::new(0.0, -s)], [C64::new(0.0, -s), C64::new(s, 0.0)]]),
            0,
            1,
        ),
        // YY and ZZ: rotate Y onto X about Z.
        [false, true, true] => (gates::rz(FRAC_PI_2), 1, 2),
        _ => (CMatrix::identity(2), 0, 2),
    }
}

/// Decomposes a two-qubit unitary acting on `(q0, q1)` into RZ/RY/H/CNOT
/// gates with at most three CNOTs.
pub fn decompose_unitary(u: &CMatrix, q0: usize, q1: usize) -> Vec<Gate> {
    let (su, k1, coords) = kak_core(u);
    let active = coords.map(|c| c != 0.0);
    let n_active = active.iter().filter(|a| **a).count();
    let (core, left) = match n_active {
        0 => (Vec::new(), CMatrix::identity(4)),
        3 => (three_cnot_core(coords[0], coords[1], coords[2]), k1.clone()),
        _ => {
            let (v, i, j) = axis_map(active);
            let vv = gates::pair(&v, &v);
            (two_cnot_core(coords[i], coords[j]), mul(&k1, &vv.adjoint()))
        }
    };
    let core_m = sequence_matrix(&core);
    // su ≅ left · core · right, so right = core† · left† · su is local.
    let right = mul(&mul(&core_m.adjoint(), &left.adjoint()), &su);
    let (r_high, r_low) = factor_local(&right).expect("right factor is a local operator");
    let mut ops = Vec::new();
    if n_active == 0 {
        push_single(&mut ops, &r_low, 0);
        push_single(&mut ops, &r_high, 1);
    } else {
        let (l_high, l_low) = factor_local(&left).expect("left factor is a local operator");
        push_single(&mut ops, &r_low, 0);
        push_single(&mut ops, &r_high, 1);
        ops.extend(core);
        push_single(&mut ops, &l_low, 0);
        push_single(&mut ops, &l_high, 1);
    }
    let map = [q0, q1];
    ops.into_iter().map(|g| g.remapped(|q| map[q])).collect()
}

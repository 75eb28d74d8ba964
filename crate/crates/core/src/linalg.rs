//! Small dense complex matrices used for gate algebra and superoperators.

use num_complex::Complex64;
use std::ops::{Index, IndexMut, Mul};

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Square complex matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    dim: usize,
    data: Vec<C64>,
}

impl CMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, data: vec![ZERO; dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_rows<const N: usize>(rows: [[C64; N]; N]) -> Self {
        let mut m = Self::zeros(N);
        for (r, row) in rows.iter().enumerate() {
            for (c, v) in row.iter().enumerate() {
                m[(r, c)] = *v;
            }
        }
        m
    }

    pub fn from_real<const N: usize>(rows: [[f64; N]; N]) -> Self {
        let mut m = Self::zeros(N);
        for (r, row) in rows.iter().enumerate() {
            for (c, v) in row.iter().enumerate() {
                m[(r, c)] = C64::new(*v, 0.0);
            }
        }
        m
    }

    pub fn diagonal(diag: &[C64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, v) in diag.iter().enumerate() {
            m[(i, i)] = *v;
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros(self.dim);
        for r in 0..self.dim {
            for c in 0..self.dim {
                m[(c, r)] = self[(r, c)].conj();
            }
        }
        m
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zeros(self.dim);
        for r in 0..self.dim {
            for c in 0..self.dim {
                m[(c, r)] = self[(r, c)];
            }
        }
        m
    }

    pub fn scale(&self, s: C64) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|v| v * s).collect() }
    }

    /// Kronecker product `self ⊗ rhs`; `rhs` occupies the low-order index bits.
    pub fn kron(&self, rhs: &CMatrix) -> Self {
        let d = self.dim * rhs.dim;
        let mut m = Self::zeros(d);
        for r1 in 0..self.dim {
            for c1 in 0..self.dim {
                let a = self[(r1, c1)];
                if a == ZERO {
                    continue;
                }
                for r2 in 0..rhs.dim {
                    for c2 in 0..rhs.dim {
                        m[(r1 * rhs.dim + r2, c1 * rhs.dim + c2)] = a * rhs[(r2, c2)];
                    }
                }
            }
        }
        m
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    /// Largest absolute entry of `self - other`.
    pub fn max_abs_diff(&self, other: &CMatrix) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Deviation of `U†U` from the identity.
    pub fn unitarity_error(&self) -> f64 {
        (&self.adjoint() * self).max_abs_diff(&CMatrix::identity(self.dim))
    }

    /// Distance to `other` after removing the best global phase.
    pub fn phase_distance(&self, other: &CMatrix) -> f64 {
        let overlap: C64 = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| b.conj() * a)
            .sum();
        let phase = if overlap.norm() > 1e-300 { overlap / overlap.norm() } else { ONE };
        self.max_abs_diff(&other.scale(phase))
    }

    /// Determinant via Gaussian elimination with partial pivoting.
    pub fn det(&self) -> C64 {
        let n = self.dim;
        let mut a = self.data.clone();
        let mut det = ONE;
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&x, &y| a[x * n + col].norm().total_cmp(&a[y * n + col].norm()))
                .unwrap_or(col);
            if a[pivot * n + col].norm() == 0.0 {
                return ZERO;
            }
            if pivot != col {
                for k in 0..n {
                    a.swap(col * n + k, pivot * n + k);
                }
                det = -det;
            }
            let p = a[col * n + col];
            det *= p;
            for row in col + 1..n {
                let f = a[row * n + col] / p;
                for k in col..n {
                    let v = a[col * n + k];
                    a[row * n + k] -= f * v;
                }
            }
        }
        det
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = C64;
    fn index(&self, (r, c): (usize, usize)) -> &C64 {
        &self.data[r * self.dim + c]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut C64 {
        &mut self.data[r * self.dim + c]
    }
}

impl Mul for &CMatrix {
    type Output = CMatrix;
    fn mul(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let n = self.dim;
        let mut m = CMatrix::zeros(n);
        for r in 0..n {
            for k in 0..n {
                let a = self.data[r * n + k];
                if a == ZERO {
                    continue;
                }
                for c in 0..n {
                    m.data[r * n + c] += a * rhs.data[k * n + c];
                }
            }
        }
        m
    }
}

/// Embeds a 1- or 2-qubit gate matrix into a `width`-qubit operator.
pub fn embed(m: &CMatrix, qubits: &[usize], width: usize) -> CMatrix {
    let dim = 1usize << width;
    let k = qubits.len();
    let mut out = CMatrix::zeros(dim);
    for col in 0..dim {
        let local_in = qubits.iter().enumerate().fold(0, |acc, (j, &q)| acc | (((col >> q) & 1) << j));
        let rest = qubits.iter().fold(col, |acc, &q| acc & !(1 << q));
        for local_out in 0..(1 << k) {
            let v = m[(local_out, local_in)];
            if v == ZERO {
                continue;
            }
            let row = qubits.iter().enumerate().fold(rest, |acc, (j, &q)| acc | (((local_out >> j) & 1) << q));
            out[(row, col)] = v;
        }
    }
    out
}

/// Full unitary of a measurement-free circuit (small widths only).
pub fn circuit_unitary(circuit: &crate::Circuit) -> CMatrix {
    let width = circuit.width();
    circuit.ops().iter().filter_map(|g| g.matrix().map(|m| (m, g.qubits()))).fold(
        CMatrix::identity(1 << width),
        |acc, (m, qs)| &embed(&m, qs, width) * &acc,
    )
}

pub mod gates {
    //! Gate matrices. Two-qubit matrices use local index `b0 + 2*b1`, where `b0`
    //! is the bit of the gate's first qubit.
    use super::*;

    pub fn ry(theta: f64) -> CMatrix {
        let (s, c) = (theta / 2.0).sin_cos();
        CMatrix::from_real([[c, -s], [s, c]])
    }

    pub fn rz(theta: f64) -> CMatrix {
        CMatrix::diagonal(&[C64::from_polar(1.0, -theta / 2.0), C64::from_polar(1.0, theta / 2.0)])
    }

    pub fn x() -> CMatrix {
        CMatrix::from_real([[0.0, 1.0], [1.0, 0.0]])
    }

    pub fn y() -> CMatrix {
        CMatrix::from_rows([[ZERO, -I], [I, ZERO]])
    }

    pub fn z() -> CMatrix {
        CMatrix::from_real([[1.0, 0.0], [0.0, -1.0]])
    }

    pub fn h() -> CMatrix {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        CMatrix::from_real([[s, s], [s, -s]])
    }

    /// Control is the first qubit, target the second.
    pub fn cnot() -> CMatrix {
        CMatrix::from_real([
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, 1.0],
            [0.0, 0.0, 1.0, 0.0],
            [0.0, 1.0, 0.0, 0.0],
        ])
    }

    pub fn swap() -> CMatrix {
        CMatrix::from_real([
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 1.0, 0.0],
            [0.0, 1.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, 1.0],
        ])
    }

    /// `exp(-i θ/2 Z⊗Z)`.
    pub fn rzz(theta: f64) -> CMatrix {
        let a = C64::from_polar(1.0, -theta / 2.0);
        let b = C64::from_polar(1.0, theta / 2.0);
        CMatrix::diagonal(&[a, b, b, a])
    }

    /// Operator on a gate pair with `first` acting on the gate's first qubit.
    pub fn pair(first: &CMatrix, second: &CMatrix) -> CMatrix {
        second.kron(first)
    }
}

#[cfg(test)]
mod tests {
    use super::gates::*;
    use super::*;

    #[test]
    fn cnot_flips_target_when_control_set() {
        let m = cnot();
        // |b0=1,b1=0> = index 1 -> index 3
        assert_eq!(m[(3, 1)], ONE);
        assert_eq!(m[(0, 0)], ONE);
    }

    #[test]
    fn determinant_of_swap_is_minus_one() {
        assert!((swap().det() + ONE).norm() < 1e-15);
        assert!((rzz(0.3).det() - ONE).norm() < 1e-15);
    }

    #[test]
    fn phase_distance_ignores_global_phase() {
        let a = ry(0.7);
        let b = a.scale(C64::from_polar(1.0, 1.1));
        assert!(a.phase_distance(&b) < 1e-14);
        assert!(a.phase_distance(&ry(0.8)) > 1e-3);
    }
}

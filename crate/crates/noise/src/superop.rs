//! Channels on one or two qubits as superoperators.
//!
//! A `k`-qubit superoperator acts on the vectorised local block
//! `v = r * 2^k + c` of a density matrix, where `r` and `c` are local row and
//! column indices in the gate's `b0 + 2*b1` convention.

use vdcut_core::linalg::{CMatrix, C64, ONE, ZERO};

#[derive(Debug, Clone, PartialEq)]
pub struct Superop {
    qubits: usize,
    /// Row-major `4^k × 4^k`.
    data: Vec<C64>,
}

impl Superop {
    pub fn identity(qubits: usize) -> Self {
        let n = 1 << (2 * qubits);
        let mut data = vec![ZERO; n * n];
        for i in 0..n {
            data[i * n + i] = ONE;
        }
        Self { qubits, data }
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    fn side(&self) -> usize {
        1 << (2 * self.qubits)
    }

    pub fn get(&self, out: usize, inp: usize) -> C64 {
        self.data[out * self.side() + inp]
    }

    /// `ρ ↦ U ρ U†`.
    pub fn unitary(u: &CMatrix) -> Self {
        let d = u.dim();
        let qubits = d.trailing_zeros() as usize;
        let n = d * d;
        let mut data = vec![ZERO; n * n];
        for r in 0..d {
            for c in 0..d {
                for r2 in 0..d {
                    let a = u[(r, r2)];
                    if a == ZERO {
                        continue;
                    }
                    for c2 in 0..d {
                        let b = u[(c, c2)].conj();
                        data[(r * d + c) * n + (r2 * d + c2)] += a * b;
                    }
                }
            }
        }
        Self { qubits, data }
    }

    /// `ρ ↦ (1−p) ρ + p · I/d ⊗ Tr_local(ρ)`.
    pub fn depolarizing(qubits: usize, p: f64) -> Self {
        let d = 1 << qubits;
        let n = d * d;
        let mut s = Self::identity(qubits);
        for v in s.data.iter_mut() {
            *v *= 1.0 - p;
        }
        let w = C64::new(p / d as f64, 0.0);
        for a in 0..d {
            for k in 0..d {
                s.data[(a * d + a) * n + (k * d + k)] += w;
            }
        }
        s
    }

    /// Amplitude damping with parameter `gamma` followed by extra dephasing
    /// that scales coherences by `dephase`.
    pub fn relaxation(gamma: f64, dephase: f64) -> Self {
        let mut s = Self { qubits: 1, data: vec![ZERO; 16] };
        let coherence = C64::new((1.0 - gamma).sqrt() * dephase, 0.0);
        // v = r*2 + c: 0=ρ00, 1=ρ01, 2=ρ10, 3=ρ11
        s.data[0] = ONE;
        s.data[3] = C64::new(gamma, 0.0);
        s.data[5] = coherence;
        s.data[10] = coherence;
        s.data[15] = C64::new(1.0 - gamma, 0.0);
        s
    }

    /// `self` after `first`: the channel `ρ ↦ self(first(ρ))`.
    pub fn after(&self, first: &Superop) -> Superop {
        assert_eq!(self.qubits, first.qubits);
        let n = self.side();
        let mut data = vec![ZERO; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == ZERO {
                    continue;
                }
                for j in 0..n {
                    data[i * n + j] += a * first.data[k * n + j];
                }
            }
        }
        Superop { qubits: self.qubits, data }
    }

    /// Two-qubit superoperator `first ⊗ second`, `first` on local bit 0.
    pub fn pair(first: &Superop, second: &Superop) -> Superop {
        assert!(first.qubits == 1 && second.qubits == 1);
        let mut data = vec![ZERO; 256];
        // Two-qubit local index x = b0 + 2*b1, v = r*4 + c.
        for r in 0..4 {
            for c in 0..4 {
                for r2 in 0..4 {
                    for c2 in 0..4 {
                        let a = first.get((r & 1) * 2 + (c & 1), (r2 & 1) * 2 + (c2 & 1));
                        let b = second.get((r >> 1) * 2 + (c >> 1), (r2 >> 1) * 2 + (c2 >> 1));
                        data[(r * 4 + c) * 16 + (r2 * 4 + c2)] = a * b;
                    }
                }
            }
        }
        Superop { qubits: 2, data }
    }

    pub(crate) fn sparse(&self) -> SparseSuperop {
        let n = self.side();
        let mut rows = Vec::with_capacity(n);
        for i in 0..n {
            let entries: Vec<(usize, C64)> = (0..n)
                .filter_map(|j| {
                    let v = self.data[i * n + j];
                    (v.norm() > 1e-16).then_some((j, v))
                })
                .collect();
            rows.push(entries);
        }
        SparseSuperop { qubits: self.qubits, rows }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct SparseSuperop {
    pub qubits: usize,
    pub rows: Vec<Vec<(usize, C64)>>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use vdcut_core::linalg::gates;

    #[test]
    fn unitary_superop_composes_like_matrices() {
        let a = gates::ry(0.3);
        let b = gates::rz(1.2);
        let lhs = Superop::unitary(&b).after(&Superop::unitary(&a));
        let rhs = Superop::unitary(&(&b * &a));
        assert!(lhs.data.iter().zip(&rhs.data).all(|(x, y)| (x - y).norm() < 1e-14));
    }

    #[test]
    fn pair_matches_kron_of_unitaries() {
        let a = gates::ry(0.3);
        let b = gates::h();
        let lhs = Superop::pair(&Superop::unitary(&a), &Superop::unitary(&b));
        let rhs = Superop::unitary(&gates::pair(&a, &b));
        assert!(lhs.data.iter().zip(&rhs.data).all(|(x, y)| (x - y).norm() < 1e-14));
    }
}

//! Two-copy circuit construction.

use std::f64::consts::FRAC_1_SQRT_2;
use std::sync::Arc;
use vdcut_core::circuit::TAG_DIAG;
use vdcut_core::linalg::CMatrix;
use vdcut_core::{Circuit, Gate, Result};

/// Unitary rotating the SWAP eigenbasis of a qubit pair onto computational
/// states: identity on |00⟩ and |11⟩, maps (|01⟩ + |10⟩)/√2 to |01⟩ and the
/// singlet (|01⟩ − |10⟩)/√2 to |10⟩ (copy-0 bit first).
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalizingGate {
    matrix: Arc<CMatrix>,
    /// Outcome bits (copy-0, copy-1) carrying SWAP eigenvalue −1.
    singlet: (u8, u8),
}

impl Default for DiagonalizingGate {
    fn default() -> Self {
        Self::standard()
    }
}

impl DiagonalizingGate {
    pub fn standard() -> Self {
        let s = FRAC_1_SQRT_2;
        // Local index b0 + 2*b1 with b0 on copy 0: |01⟩ (copy-0 bit 0, copy-1
        // bit 1) is index 2 and |10⟩ is index 1.
        let m = CMatrix::from_real([
            [1.0, 0.0, 0.0, 0.0],
            [0.0, -s, s, 0.0],
            [0.0, s, s, 0.0],
            [0.0, 0.0, 0.0, 1.0],
        ]);
        Self { matrix: Arc::new(m), singlet: (1, 0) }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// Singlet outcome as a string, copy-0 bit first.
    pub fn singlet_outcome(&self) -> String {
        format!("{}{}", self.singlet.0, self.singlet.1)
    }

    pub fn singlet_bits(&self) -> (u8, u8) {
        self.singlet
    }

    /// The gate on `(copy0, copy1)`, tagged "diag".
    pub fn gate(&self, copy0: usize, copy1: usize) -> Gate {
        Gate::shared_unitary(self.matrix.clone(), copy0, copy1)
            .expect("diagonalizing matrix is unitary")
            .with_tag(TAG_DIAG)
    }
}

/// Diagonalizing gates alone on `2n` qubits, pairs `(i, n+i)` in ascending `i`.
pub fn diagonalizing_layer(n: usize) -> Circuit {
    let b = DiagonalizingGate::standard();
    Circuit::from_gates(2 * n, (0..n).map(|i| b.gate(i, n + i))).expect("pairs are in range")
}

/// Two copies of `original`, a diagonalizing gate on each pair `(i, n+i)`
/// in ascending `i`, then measurements on all `2n` qubits.
pub fn build_vd_circuit(original: &Circuit) -> Result<Circuit> {
    let n = original.width();
    let mut c = original.tensor_two_copies()?;
    let b = DiagonalizingGate::standard();
    for i in 0..n {
        c.push(b.gate(i, n + i))?;
    }
    for q in 0..2 * n {
        c.push(Gate::measure(q))?;
    }
    Ok(c.with_name(format!("{}-vd", original.name())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use vdcut_core::linalg::gates;

    #[test]
    fn diagonalizes_swap_with_single_negative_entry() {
        let b = DiagonalizingGate::standard();
        let m = b.matrix();
        let d = &(m * &gates::swap()) * &m.adjoint();
        for r in 0..4 {
            for c in 0..4 {
                if r != c {
                    assert!(d[(r, c)].norm() < 1e-15);
                }
            }
        }
        let diag: Vec<f64> = (0..4).map(|k| d[(k, k)].re).collect();
        let negative: Vec<usize> = (0..4).filter(|&k| diag[k] < 0.0).collect();
        assert_eq!(negative, vec![1]);
        assert!(diag.iter().all(|v| (v.abs() - 1.0).abs() < 1e-15));
        // Index 1 = copy-0 bit 1, copy-1 bit 0.
        assert_eq!(b.singlet_outcome(), "10");
    }

    #[test]
    fn single_qubit_original() {
        let c = build_vd_circuit(&Circuit::from_gates(1, [Gate::ry(0.4, 0)]).unwrap()).unwrap();
        assert_eq!(c.width(), 2);
        assert_eq!(c.count_tag(TAG_DIAG), 1);
        assert_eq!(c.measured_qubits(), vec![0, 1]);
    }

    #[test]
    fn op_count_formula() {
        let orig = Circuit::from_gates(3, [Gate::ry(0.1, 0), Gate::cnot(0, 1), Gate::cnot(1, 2), Gate::h(2)]).unwrap();
        let vd = build_vd_circuit(&orig).unwrap();
        assert_eq!(vd.len(), 2 * orig.len() + 3 + 6);
        assert_eq!(vd.count_tag(TAG_DIAG), 3);
    }
}

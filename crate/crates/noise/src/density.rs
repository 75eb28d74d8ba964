//! Dense density matrices.

use crate::superop::SparseSuperop;
use vdcut_core::linalg::{CMatrix, C64, I, ONE, ZERO};
use vdcut_core::{Error, Pauli, PauliObservable, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    width: usize,
    /// Row-major `2^n × 2^n`.
    data: Vec<C64>,
}

impl DensityMatrix {
    /// `|0…0⟩⟨0…0|`.
    pub fn zero_state(width: usize) -> Self {
        let dim = 1 << width;
        let mut data = vec![ZERO; dim * dim];
        data[0] = ONE;
        Self { width, data }
    }

    pub fn maximally_mixed(width: usize) -> Self {
        let dim = 1 << width;
        let mut data = vec![ZERO; dim * dim];
        for i in 0..dim {
            data[i * dim + i] = C64::new(1.0 / dim as f64, 0.0);
        }
        Self { width, data }
    }

    /// `|ψ⟩⟨ψ|` for a normalised state vector.
    pub fn from_pure(psi: &[C64]) -> Result<Self> {
        let width = state_width(psi.len())?;
        let dim = psi.len();
        let mut data = vec![ZERO; dim * dim];
        for r in 0..dim {
            for c in 0..dim {
                data[r * dim + c] = psi[r] * psi[c].conj();
            }
        }
        Ok(Self { width, data })
    }

    pub fn from_matrix(m: &CMatrix) -> Result<Self> {
        let width = state_width(m.dim())?;
        Ok(Self { width, data: m.as_slice().to_vec() })
    }

    pub fn to_matrix(&self) -> CMatrix {
        let dim = self.dim();
        let mut m = CMatrix::zeros(dim);
        for r in 0..dim {
            for c in 0..dim {
                m[(r, c)] = self.data[r * dim + c];
            }
        }
        m
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn dim(&self) -> usize {
        1 << self.width
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.data[row * self.dim() + col]
    }

    pub fn trace(&self) -> C64 {
        let dim = self.dim();
        (0..dim).map(|i| self.data[i * dim + i]).sum()
    }

    /// `Tr(ρ²)`.
    pub fn purity(&self) -> f64 {
        self.data.iter().map(|v| v.norm_sqr()).sum()
    }

    /// Largest `|ρ_rc − conj(ρ_cr)|`.
    pub fn hermiticity_error(&self) -> f64 {
        let dim = self.dim();
        let mut worst: f64 = 0.0;
        for r in 0..dim {
            for c in r..dim {
                worst = worst.max((self.data[r * dim + c] - self.data[c * dim + r].conj()).norm());
            }
        }
        worst
    }

    pub fn diagonal(&self) -> Vec<f64> {
        let dim = self.dim();
        (0..dim).map(|i| self.data[i * dim + i].re).collect()
    }

    /// `ρ_self ⊗ ρ_upper` with `self` on the low qubits.
    pub fn product(&self, upper: &DensityMatrix) -> DensityMatrix {
        let (dl, du) = (self.dim(), upper.dim());
        let dim = dl * du;
        let mut data = vec![ZERO; dim * dim];
        for ru in 0..du {
            for cu in 0..du {
                let u = upper.data[ru * du + cu];
                if u == ZERO {
                    continue;
                }
                for rl in 0..dl {
                    for cl in 0..dl {
                        data[(ru * dl + rl) * dim + cu * dl + cl] = u * self.data[rl * dl + cl];
                    }
                }
            }
        }
        DensityMatrix { width: self.width + upper.width, data }
    }

    /// Reduced state on `keep`; qubit `keep[j]` becomes qubit `j`.
    pub fn partial_trace(&self, keep: &[usize]) -> DensityMatrix {
        let dim = self.dim();
        let k = keep.len();
        let kd = 1 << k;
        let keep_mask = keep.iter().fold(0usize, |m, &q| m | (1 << q));
        let traced: Vec<usize> = (0..self.width).filter(|q| keep_mask & (1 << q) == 0).collect();
        let spread = |local: usize, qubits: &[usize]| {
            qubits.iter().enumerate().fold(0usize, |acc, (j, &q)| acc | (((local >> j) & 1) << q))
        };
        let keep_off: Vec<usize> = (0..kd).map(|x| spread(x, keep)).collect();
        let mut data = vec![ZERO; kd * kd];
        for e in 0..(1usize << traced.len()) {
            let base = spread(e, &traced);
            for r in 0..kd {
                let row = (base | keep_off[r]) * dim + base;
                for c in 0..kd {
                    data[r * kd + c] += self.data[row + keep_off[c]];
                }
            }
        }
        DensityMatrix { width: k, data }
    }

    /// `Tr(O ρ)` for any Pauli observable.
    pub fn expectation(&self, obs: &PauliObservable) -> Result<f64> {
        obs.check_width(self.width)?;
        let dim = self.dim();
        let mut total = 0.0;
        for (coef, pauli) in obs.terms() {
            let flip = pauli.flip_mask();
            let mut acc = ZERO;
            // Tr(Pρ) = Σ_c ⟨c|P|c⊕f⟩ ρ[c⊕f, c]
            for c in 0..dim {
                let k = c ^ flip;
                let mut phase = ONE;
                for (q, p) in pauli.letters().iter().enumerate() {
                    let bit_in = (k >> q) & 1;
                    match p {
                        Pauli::I | Pauli::X => {}
                        Pauli::Z => {
                            if bit_in == 1 {
                                phase = -phase;
                            }
                        }
                        Pauli::Y => phase *= if bit_in == 0 { I } else { -I },
                    }
                }
                acc += phase * self.data[k * dim + c];
            }
            total += coef * acc.re;
        }
        Ok(total)
    }

    /// Applies a local superoperator on `qubits` (local bit `j` = `qubits[j]`).
    pub(crate) fn apply(&mut self, op: &SparseSuperop, qubits: &[usize]) {
        let k = op.qubits;
        debug_assert_eq!(k, qubits.len());
        let dim = self.dim();
        let ld = 1 << k;
        let mask = qubits.iter().fold(0usize, |m, &q| m | (1 << q));
        let off: Vec<usize> = (0..ld)
            .map(|x| qubits.iter().enumerate().fold(0usize, |acc, (j, &q)| acc | (((x >> j) & 1) << q)))
            .collect();
        let bases: Vec<usize> = (0..dim).filter(|i| i & mask == 0).collect();
        let n = ld * ld;
        let mut inp = vec![ZERO; n];
        let mut out = vec![ZERO; n];
        for (bi, &rb) in bases.iter().enumerate() {
            // Hermiticity: blocks below the diagonal are mirrored from above.
            for &cb in &bases[bi..] {
                for r in 0..ld {
                    let row = (rb | off[r]) * dim + cb;
                    for c in 0..ld {
                        inp[r * ld + c] = self.data[row + off[c]];
                    }
                }
                for (o, entries) in out.iter_mut().zip(&op.rows) {
                    *o = entries.iter().map(|&(j, w)| w * inp[j]).sum();
                }
                for r in 0..ld {
                    let row = (rb | off[r]) * dim + cb;
                    for c in 0..ld {
                        self.data[row + off[c]] = out[r * ld + c];
                    }
                }
                if cb != rb {
                    for r in 0..ld {
                        for c in 0..ld {
                            self.data[(cb | off[c]) * dim + (rb | off[r])] = out[r * ld + c].conj();
                        }
                    }
                }
            }
        }
    }
}

fn state_width(dim: usize) -> Result<usize> {
    if dim == 0 || !dim.is_power_of_two() {
        return Err(Error::Invalid(format!("dimension {dim} is not a power of two")));
    }
    Ok(dim.trailing_zeros() as usize)
}

#[cfg(test)]
mod tests {
    use super::*;
    use vdcut_core::PauliString;

    #[test]
    fn maximally_mixed_has_zero_zz() {
        let rho = DensityMatrix::maximally_mixed(2);
        let obs = PauliObservable::new(2).with_term(1.0, "ZZ").unwrap();
        assert_eq!(rho.expectation(&obs).unwrap(), 0.0);
        assert!((rho.purity() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn pauli_expectations_on_plus_i_state() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let rho = DensityMatrix::from_pure(&[C64::new(s, 0.0), C64::new(0.0, s)]).unwrap();
        let e = |p: &str| {
            let obs = PauliObservable::from_terms(1, [(1.0, p.parse::<PauliString>().unwrap())]).unwrap();
            rho.expectation(&obs).unwrap()
        };
        assert!((e("Y") - 1.0).abs() < 1e-15);
        assert!(e("X").abs() < 1e-15 && e("Z").abs() < 1e-15);
    }

    #[test]
    fn partial_trace_of_product() {
        let a = DensityMatrix::from_pure(&[C64::new(0.6, 0.0), C64::new(0.0, 0.8)]).unwrap();
        let b = DensityMatrix::maximally_mixed(1);
        let ab = a.product(&b);
        assert!(ab.partial_trace(&[0]).to_matrix().max_abs_diff(&a.to_matrix()) < 1e-15);
        assert!(ab.partial_trace(&[1]).to_matrix().max_abs_diff(&b.to_matrix()) < 1e-15);
        let swapped = ab.partial_trace(&[1, 0]);
        assert!(swapped.to_matrix().max_abs_diff(&a.product(&b).to_matrix()) > 0.1);
        assert!(swapped.to_matrix().max_abs_diff(&b.product(&a).to_matrix()) < 1e-15);
    }
}

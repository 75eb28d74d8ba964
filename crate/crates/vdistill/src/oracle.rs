//! Exact matrix-power reference values.

use nalgebra::DMatrix;
use num_complex::Complex64;
use vdcut_core::linalg::CMatrix;
use vdcut_core::{Error, PauliObservable, Result};
use vdcut_noise::DensityMatrix;

/// `Tr(O ρ^M) / Tr(ρ^M)` with `ρ^M` formed by repeated multiplication.
pub fn oracle_mitigated_expectation(rho: &DensityMatrix, obs: &PauliObservable, copies: usize) -> Result<f64> {
    if copies == 0 {
        return Err(Error::Invalid("number of copies must be at least 1".into()));
    }
    let base = rho.to_matrix();
    let mut power = base.clone();
    for _ in 1..copies {
        power = &power * &base;
    }
    let trace = power.trace().re;
    if trace < 1e-14 {
        return Err(Error::DegenerateTrace(trace));
    }
    let unnormalised = DensityMatrix::from_matrix(&power)?;
    Ok(unnormalised.expectation(obs)? / trace)
}

/// Eigendecomposition of a density matrix, eigenvalues in descending order.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    /// Column `k` is the eigenvector of `eigenvalues[k]`.
    pub eigenvectors: CMatrix,
}

impl Spectrum {
    pub fn of(rho: &DensityMatrix) -> Spectrum {
        let d = rho.dim();
        let m = DMatrix::from_fn(d, d, |r, c| {
            let v = rho.get(r, c);
            Complex64::new(v.re, v.im)
        });
        let h = (&m + m.adjoint()) * Complex64::new(0.5, 0.0);
        let eig = h.symmetric_eigen();
        let mut order: Vec<usize> = (0..d).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
        let mut vectors = CMatrix::zeros(d);
        for (k, &src) in order.iter().enumerate() {
            for r in 0..d {
                let v = eig.eigenvectors[(r, src)];
                vectors[(r, k)] = Complex64::new(v.re, v.im);
            }
        }
        Spectrum { eigenvalues: order.iter().map(|&k| eig.eigenvalues[k]).collect(), eigenvectors: vectors }
    }

    /// `⟨ψ_k|O|ψ_k⟩` for eigenvector `k`.
    pub fn eigenstate_expectation(&self, k: usize, obs: &PauliObservable) -> Result<f64> {
        let d = self.eigenvectors.dim();
        let psi: Vec<Complex64> = (0..d).map(|r| self.eigenvectors[(r, k)]).collect();
        DensityMatrix::from_pure(&psi)?.expectation(obs)
    }

    /// `Σ λ_k^M ⟨ψ_k|O|ψ_k⟩ / Σ λ_k^M`, the eigenbasis form of the oracle.
    pub fn mitigated_expectation(&self, obs: &PauliObservable, copies: usize) -> Result<f64> {
        let weights: Vec<f64> = self.eigenvalues.iter().map(|l| l.max(0.0).powi(copies as i32)).collect();
        let total: f64 = weights.iter().sum();
        if total < 1e-14 {
            return Err(Error::DegenerateTrace(total));
        }
        let mut acc = 0.0;
        for (k, w) in weights.iter().enumerate() {
            if *w > 0.0 {
                acc += w * self.eigenstate_expectation(k, obs)?;
            }
        }
        Ok(acc / total)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use vdcut_core::linalg::C64;

    fn biased_qubit() -> DensityMatrix {
        DensityMatrix::from_matrix(&CMatrix::diagonal(&[C64::new(0.8, 0.0), C64::new(0.2, 0.0)])).unwrap()
    }

    #[test]
    fn two_copies_of_biased_qubit() {
        let v = oracle_mitigated_expectation(&biased_qubit(), &PauliObservable::z(1, 0), 2).unwrap();
        assert!((v - 0.6 / 0.68).abs() < 1e-14);
        let via_eigen = Spectrum::of(&biased_qubit()).mitigated_expectation(&PauliObservable::z(1, 0), 2).unwrap();
        assert!((v - via_eigen).abs() < 1e-14);
    }

    #[test]
    fn approaches_dominant_eigenstate_monotonically() {
        let obs = PauliObservable::z(1, 0);
        let values: Vec<f64> =
            (1..=30).map(|m| oracle_mitigated_expectation(&biased_qubit(), &obs, m).unwrap()).collect();
        assert!(values[..15].windows(2).all(|w| w[1] > w[0]));
        assert!(values.windows(2).all(|w| w[1] >= w[0]));
        assert!((values[29] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn pure_state_is_fixed_point() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let rho = DensityMatrix::from_pure(&[C64::new(s, 0.0), C64::new(0.5, 0.5)]).unwrap();
        let obs = PauliObservable::new(1).with_term(0.3, "X").unwrap().with_term(0.7, "Y").unwrap();
        let one = oracle_mitigated_expectation(&rho, &obs, 1).unwrap();
        for m in 2..6 {
            assert!((oracle_mitigated_expectation(&rho, &obs, m).unwrap() - one).abs() < 1e-12);
        }
    }

    #[test]
    fn degenerate_trace_reported() {
        let rho = DensityMatrix::maximally_mixed(6);
        assert!(matches!(
            oracle_mitigated_expectation(&rho, &PauliObservable::z(6, 0), 10),
            Err(Error::DegenerateTrace(_))
        ));
    }
}

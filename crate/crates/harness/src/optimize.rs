//! Derivative-free minimisation with linear models over a simplex inside a
//! shrinking trust region, and the noiseless VQE parameter search built on it.

use crate::maxcut::MaxCutProblem;
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;
use vdcut_core::{derive_seed, Circuit, GateKind, RealAmplitudes, Result};
use vdcut_noise::{evolve, Distribution, NoiseModel};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrustRegion {
    pub initial_radius: f64,
    pub final_radius: f64,
    pub max_evaluations: usize,
}

impl Default for TrustRegion {
    fn default() -> Self {
        Self { initial_radius: 0.5, final_radius: 1e-6, max_evaluations: 5000 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Minimum {
    pub point: Vec<f64>,
    pub value: f64,
    pub evaluations: usize,
}

struct Counted<F> {
    f: F,
    evaluations: usize,
}

impl<F: FnMut(&[f64]) -> f64> Counted<F> {
    fn eval(&mut self, x: &[f64]) -> f64 {
        self.evaluations += 1;
        (self.f)(x)
    }
}

/// Minimises `f` from `start`. Each step fits a linear model through the
/// current simplex, moves the trust radius along its steepest descent, and
/// halves the radius (rebuilding the simplex) when the step fails.
pub fn minimize(f: impl FnMut(&[f64]) -> f64, start: &[f64], settings: TrustRegion) -> Minimum {
    let dim = start.len();
    let mut f = Counted { f, evaluations: 0 };
    let mut best = start.to_vec();
    let mut best_value = f.eval(&best);
    if dim == 0 {
        return Minimum { point: best, value: best_value, evaluations: f.evaluations };
    }
    let mut radius = settings.initial_radius;
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::new();

    let rebuild = |f: &mut Counted<_>, center: &[f64], radius: f64| -> Vec<(Vec<f64>, f64)> {
        (0..dim)
            .map(|i| {
                let mut p = center.to_vec();
                p[i] += radius;
                let v = f.eval(&p);
                (p, v)
            })
            .collect()
    };

    while radius >= settings.final_radius && f.evaluations < settings.max_evaluations {
        if simplex.is_empty() {
            simplex = rebuild(&mut f, &best, radius);
            // A rebuild vertex may already improve on the centre.
            if let Some(k) = (0..dim).filter(|&k| simplex[k].1 < best_value).min_by(|&a, &b| simplex[a].1.total_cmp(&simplex[b].1)) {
                let (p, v) = simplex[k].clone();
                simplex[k] = (best.clone(), best_value);
                best = p;
                best_value = v;
            }
        }
        let offsets = DMatrix::from_fn(dim, dim, |r, c| simplex[r].0[c] - best[c]);
        let rises = DVector::from_fn(dim, |r, _| simplex[r].1 - best_value);
        let gradient = offsets.lu().solve(&rises).filter(|g| g.iter().all(|x| x.is_finite()));
        let Some(gradient) = gradient else {
            simplex.clear();
            continue;
        };
        let norm = gradient.norm();
        if norm < 1e-14 {
            radius /= 2.0;
            simplex.clear();
            continue;
        }
        let trial: Vec<f64> = best.iter().zip(gradient.iter()).map(|(x, g)| x - radius * g / norm).collect();
        let value = f.eval(&trial);
        if value < best_value {
            // The old centre replaces the vertex farthest from the new one.
            let far = (0..dim)
                .max_by(|&a, &b| distance(&simplex[a].0, &trial).total_cmp(&distance(&simplex[b].0, &trial)))
                .expect("non-empty simplex");
            simplex[far] = (std::mem::replace(&mut best, trial), best_value);
            best_value = value;
        } else {
            radius /= 2.0;
            simplex.clear();
        }
    }
    Minimum { point: best, value: best_value, evaluations: f.evaluations }
}

fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt()
}

/// Number of random starting points tried by [`optimize_parameters`].
pub const RESTARTS: u64 = 6;

/// Real amplitudes of a circuit built from RY, X and CNOT gates acting on
/// |0…0⟩; `None` if any other operation appears.
fn real_statevector(circuit: &Circuit) -> Option<Vec<f64>> {
    let mut psi = vec![0.0; 1 << circuit.width()];
    psi[0] = 1.0;
    for gate in circuit.ops() {
        match (gate.kind(), gate.qubits()) {
            (GateKind::RY(theta), &[q]) => {
                let (s, c) = (theta / 2.0).sin_cos();
                let bit = 1 << q;
                for i in (0..psi.len()).filter(|i| i & bit == 0) {
                    let (a, b) = (psi[i], psi[i | bit]);
                    psi[i] = c * a - s * b;
                    psi[i | bit] = s * a + c * b;
                }
            }
            (GateKind::X, &[q]) => {
                let bit = 1 << q;
                for i in (0..psi.len()).filter(|i| i & bit == 0) {
                    psi.swap(i, i | bit);
                }
            }
            (GateKind::CNOT, &[control, target]) => {
                let (cb, tb) = (1 << control, 1 << target);
                for i in (0..psi.len()).filter(|i| i & cb != 0 && i & tb == 0) {
                    psi.swap(i, i | tb);
                }
            }
            _ => return None,
        }
    }
    Some(psi)
}

/// Noiseless expectation of the problem Hamiltonian for bound parameters.
pub fn noiseless_energy(problem: &MaxCutProblem, ansatz: &RealAmplitudes, params: &[f64]) -> Result<f64> {
    let circuit = ansatz.bind(params)?;
    let h = problem.hamiltonian();
    match real_statevector(&circuit) {
        Some(psi) => Distribution::from_weights(circuit.width(), psi.iter().map(|a| a * a).collect())?.expectation(&h),
        None => evolve(&circuit, &NoiseModel::noiseless())?.expectation(&h),
    }
}

/// Maximises the noiseless cut expectation over ansatz parameters from
/// several seeded random starts; returns the best vector found.
pub fn optimize_parameters(problem: &MaxCutProblem, ansatz: &RealAmplitudes, seed: u64) -> Result<Vec<f64>> {
    // Surface binding or simulator errors before the objective relies on them.
    noiseless_energy(problem, ansatz, &vec![0.0; ansatz.num_parameters()])?;
    let objective = |x: &[f64]| -noiseless_energy(problem, ansatz, x).expect("checked above");
    let mut best: Option<Minimum> = None;
    for restart in 0..RESTARTS {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, restart));
        let start: Vec<f64> = (0..ansatz.num_parameters()).map(|_| rng.gen_range(-PI..PI)).collect();
        let found = minimize(objective, &start, TrustRegion::default());
        if best.as_ref().is_none_or(|b| found.value < b.value) {
            best = Some(found);
        }
    }
    Ok(best.expect("at least one restart").point)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn statevector_matches_density_matrix() {
        let problem = MaxCutProblem::ring(4).unwrap();
        let ansatz = RealAmplitudes::new(4, 2, vdcut_core::Entanglement::Circular).unwrap();
        let params: Vec<f64> = (0..ansatz.num_parameters()).map(|k| 0.37 * k as f64 - 1.1).collect();
        let circuit = ansatz.bind(&params).unwrap();
        let dm = evolve(&circuit, &NoiseModel::noiseless()).unwrap().expectation(&problem.hamiltonian()).unwrap();
        assert!((noiseless_energy(&problem, &ansatz, &params).unwrap() - dm).abs() < 1e-12);
    }

    #[test]
    fn quadratic_bowl() {
        let m = minimize(|x| (x[0] - 1.0).powi(2) + 3.0 * (x[1] + 2.0).powi(2), &[0.0, 0.0], TrustRegion::default());
        assert!((m.point[0] - 1.0).abs() < 1e-4 && (m.point[1] + 2.0).abs() < 1e-4, "{m:?}");
    }

    #[test]
    fn rosenbrock_progresses() {
        let rosen = |x: &[f64]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2);
        let settings = TrustRegion { max_evaluations: 20_000, ..TrustRegion::default() };
        let m = minimize(rosen, &[-1.2, 1.0], settings);
        assert!(m.value < 1e-3, "{m:?}");
    }
}

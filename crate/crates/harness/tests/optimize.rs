use vdcut_core::{Entanglement, RealAmplitudes};
use vdcut_harness::{minimize, noiseless_energy, optimize_parameters, MaxCutProblem, TrustRegion};

fn optimum(n: usize, seed: u64) -> (f64, Vec<f64>) {
    let problem = MaxCutProblem::ring(n).unwrap();
    let ansatz = RealAmplitudes::new(n, 2, Entanglement::Circular).unwrap();
    let params = optimize_parameters(&problem, &ansatz, seed).unwrap();
    (noiseless_energy(&problem, &ansatz, &params).unwrap(), params)
}

#[test]
fn single_edge_reaches_its_cut() {
    assert!(optimum(2, 0).0 >= 0.99);
}

#[test]
fn four_ring_reaches_its_max_cut() {
    assert!(optimum(4, 0).0 >= 3.9);
}

#[test]
fn six_ring_reaches_its_max_cut() {
    assert!(optimum(6, 0).0 >= 5.85);
}

#[test]
fn same_seed_same_parameters() {
    assert_eq!(optimum(4, 3).1, optimum(4, 3).1);
}

#[test]
fn minimize_finds_a_quadratic_minimum() {
    let found = minimize(|x| (x[0] - 1.0).powi(2) + 3.0 * (x[1] + 0.5).powi(2), &[0.0, 0.0], TrustRegion::default());
    assert!((found.point[0] - 1.0).abs() < 1e-4 && (found.point[1] + 0.5).abs() < 1e-4, "{:?}", found.point);
}

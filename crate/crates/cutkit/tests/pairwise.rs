use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use vdcut_core::circuit::TAG_DIAG;
use vdcut_core::{Circuit, Entanglement, Gate, PauliObservable, PauliString, RealAmplitudes};
use vdcut_cutkit::{
    build_pairwise_pipelines, mitigate_with_cuts, mitigated_expectation_cut, recombine, run_pairwise, ClassicalCache,
};
use vdcut_noise::{evolve, exact_probs, Backend, Distribution, NoiseModel};
use vdcut_transpiler::CouplingMap;
use vdcut_vdistill::build_vd_circuit;

fn ansatz(n: usize, seed: u64) -> Circuit {
    let a = RealAmplitudes::new(n, 2, Entanglement::Circular).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let params: Vec<f64> = (0..a.num_parameters()).map(|_| rng.gen_range(-3.0..3.0)).collect();
    a.bind(&params).unwrap()
}

fn noiseless_vd(original: &Circuit) -> Distribution {
    exact_probs(&evolve(&build_vd_circuit(original).unwrap().without_measurements(), &NoiseModel::noiseless()).unwrap())
        .unwrap()
}

#[test]
fn pipeline_parts_split_at_the_diagonalizing_gate() {
    let c = ansatz(4, 1);
    let pipelines = build_pairwise_pipelines(&c).unwrap();
    assert_eq!(pipelines.len(), 4);
    for p in &pipelines {
        assert_eq!(p.quantum_part().body.count_tag(TAG_DIAG), 0);
        assert_eq!(p.classical_part().body.count_tag(TAG_DIAG), 1);
        assert_eq!(p.classical_part().body.len(), 1);
        assert_eq!(p.quantum_part().variant_count(), 9);
        assert_eq!(p.classical_part().variant_count(), 16);
    }
}

#[test]
fn single_qubit_pipeline_keeps_both_copies() {
    let c = Circuit::from_gates(1, [Gate::ry(0.7, 0), Gate::rz(0.2, 0)]).unwrap();
    let pipelines = build_pairwise_pipelines(&c).unwrap();
    assert_eq!(pipelines.len(), 1);
    assert_eq!(pipelines[0].quantum_part().body.to_text(), c.tensor_two_copies().unwrap().to_text());
    assert_eq!(pipelines[0].classical_part().measured, vec![0, 1]);
}

#[test]
fn light_cone_drops_unrelated_gates() {
    // Nothing feeds qubit 0 after ry(0.9, 2), so pair 0 keeps two gates per copy on qubits 0 and 1.
    let c = Circuit::from_gates(3, [Gate::ry(0.4, 0), Gate::cnot(0, 1), Gate::ry(0.9, 2), Gate::cnot(1, 2)]).unwrap();
    let pipelines = build_pairwise_pipelines(&c).unwrap();
    assert_eq!(pipelines[0].quantum_part().body.width(), 4);
    assert_eq!(pipelines[0].quantum_part().body.len(), 4);
    assert_eq!(pipelines[2].quantum_part().body.width(), 6);
}

#[test]
fn noiseless_pipelines_match_uncut_pair_marginals() {
    let c = ansatz(4, 2);
    let uncut = noiseless_vd(&c);
    let devices = [
        Backend::ideal(),
        Backend::new(NoiseModel::noiseless(), Some(CouplingMap::heavy_hex(3).unwrap()), None),
    ];
    for device in devices {
        let cache = ClassicalCache::new();
        for p in build_pairwise_pipelines(&c).unwrap() {
            let run = run_pairwise(&p, &device, &cache, 7).unwrap();
            let tv = run.distribution.total_variation(&uncut.marginal(&[p.qubits.0, p.qubits.1]));
            assert!(tv < 1e-9, "pair {}: TV {tv}", p.pair);
        }
    }
}

#[test]
fn fully_depolarized_quantum_part_gives_uniform_pair() {
    let noise = NoiseModel { depolarizing_1q: 1.0, depolarizing_2q: 1.0, ..NoiseModel::noiseless() };
    let device = Backend::new(noise, None, None);
    let c = ansatz(3, 3);
    let cache = ClassicalCache::new();
    for p in build_pairwise_pipelines(&c).unwrap() {
        let run = run_pairwise(&p, &device, &cache, 0).unwrap();
        assert!(run.distribution.total_variation(&Distribution::uniform(2)) < 1e-12);
    }
}

#[test]
fn identical_classical_parts_are_simulated_once() {
    let c = ansatz(5, 4);
    let cache = ClassicalCache::new();
    let unmitigated = noiseless_vd(&c);
    mitigate_with_cuts(&c, &PauliObservable::z(5, 0), &unmitigated, &Backend::ideal(), &cache, 1).unwrap();
    assert_eq!((cache.misses(), cache.hits()), (1, 4));
}

#[test]
fn noiseless_end_to_end_recombination_is_exact() {
    let c = ansatz(4, 5);
    let outcome = mitigated_expectation_cut(&c, &PauliObservable::z(4, 1), &Backend::ideal(), 9).unwrap();
    assert!(outcome.recombined.total_variation(&noiseless_vd(&c)) < 1e-9);
}

#[test]
fn noiseless_cut_estimate_matches_ideal_single_z_expectation() {
    let c = ansatz(4, 6);
    let obs = PauliObservable::new(4)
        .with_term(0.5, "ZIII")
        .unwrap()
        .with_term(-1.5, "IIZI")
        .unwrap()
        .with_term(2.0, "IIII")
        .unwrap();
    let ideal = evolve(&c, &NoiseModel::noiseless()).unwrap().expectation(&obs).unwrap();
    let outcome = mitigated_expectation_cut(&c, &obs, &Backend::ideal(), 3).unwrap();
    assert!((outcome.estimate.mitigated().unwrap() - ideal).abs() < 1e-9);
}

#[test]
fn noiseless_cut_estimate_matches_ideal_on_basis_states() {
    let c = Circuit::from_gates(4, [Gate::x(0), Gate::x(2)]).unwrap();
    let mut h = PauliObservable::new(4);
    for (a, b) in [(0, 1), (1, 2), (2, 3), (3, 0)] {
        h.add_term(0.5, PauliString::identity(4)).unwrap();
        h.add_term(-0.5, PauliString::z_on(4, &[a, b])).unwrap();
    }
    let outcome = mitigated_expectation_cut(&c, &h, &Backend::ideal(), 3).unwrap();
    assert!((outcome.estimate.mitigated().unwrap() - 4.0).abs() < 1e-9);
}

#[test]
fn recombination_fixed_point_on_random_distributions() {
    let mut rng = ChaCha8Rng::seed_from_u64(44);
    for trial in 0..500 {
        let n = if trial % 2 == 0 { 2 } else { 3 };
        let weights: Vec<f64> =
            (0..1 << (2 * n)).map(|_| if rng.gen_bool(0.2) { 0.0 } else { rng.gen::<f64>() }).collect();
        let Ok(p) = Distribution::from_weights(2 * n, weights) else { continue };
        let pairs: Vec<(usize, usize)> = (0..n).map(|i| (i, n + i)).collect();
        let pw: Vec<Distribution> = pairs.iter().map(|&(a, b)| p.marginal(&[a, b])).collect();
        assert!(recombine(&p, &pw, &pairs).unwrap().total_variation(&p) < 1e-12);
    }
}

#[test]
fn cut_pairs_beat_uncut_pairs_under_basic_noise() {
    let c = ansatz(4, 7);
    let ideal = noiseless_vd(&c);
    let device = Backend::new(NoiseModel::basic(), Some(CouplingMap::heavy_hex(3).unwrap()), None);
    let noisy_vd = device.run(&build_vd_circuit(&c).unwrap(), 0).unwrap().exact;
    let cache = ClassicalCache::new();
    let mut better = 0;
    for p in build_pairwise_pipelines(&c).unwrap() {
        let pair = [p.qubits.0, p.qubits.1];
        let target = ideal.marginal(&pair);
        let cut = run_pairwise(&p, &device, &cache, 0).unwrap().distribution.total_variation(&target);
        let uncut = noisy_vd.marginal(&pair).total_variation(&target);
        better += usize::from(cut < uncut);
    }
    assert!(better >= 3, "only {better} of 4 pairs improved");
}

use std::f64::consts::PI;
use std::path::Path;
use vdcut_harness::{
    from_json, run_experiment, to_csv, to_json, write_parameters, ExperimentConfig, MapSpec, Method, ProblemConfig,
    CSV_HEADER,
};
use vdcut_noise::Preset;

fn small_config(dir: &Path, params: &[f64]) -> ExperimentConfig {
    let path = dir.join("params.txt");
    write_parameters(&path, params).unwrap();
    let mut config = ExperimentConfig::new(ProblemConfig::ring(2));
    config.reps = 1;
    config.parameters = Some(path);
    config.shots = 2000;
    config
}

#[test]
fn config_defaults_and_overrides() {
    let config = ExperimentConfig::from_toml_str("[problem]\nring = 4\n").unwrap();
    assert_eq!(config.shots, 10_000);
    assert_eq!(config.map, MapSpec::HeavyHex(3));
    assert_eq!(config.methods, Method::ALL.to_vec());
    assert_eq!(config.presets, vec![Preset::Basic, Preset::BasicGct, Preset::BasicGctRct]);

    let text = "methods = [\"none\", \"vd+cut\"]\npresets = [\"basic+gct\"]\nshots = 500\nseed = 9\nmap = \"linear\"\n\n[problem]\nring = 5\n";
    let config = ExperimentConfig::from_toml_str(text).unwrap();
    assert_eq!(config.methods, vec![Method::None, Method::VdCut]);
    assert_eq!(config.presets, vec![Preset::BasicGct]);
    assert_eq!((config.shots, config.seed, config.map.clone()), (500, 9, MapSpec::Linear));
    assert_eq!(ExperimentConfig::from_toml_str(&config.to_toml_string()).unwrap(), config);
}

#[test]
fn invalid_configs_are_rejected() {
    for text in [
        "methods = []\n[problem]\nring = 4\n",
        "presets = []\n[problem]\nring = 4\n",
        "shots = 0\n[problem]\nring = 4\n",
        "zne_scales = [1, 2]\n[problem]\nring = 4\n",
        "zne_scales = [3]\n[problem]\nring = 4\n",
        "colour = 1\n[problem]\nring = 4\n",
        "[problem]\nring = 4\nedges = \"g.txt\"\n",
        "[problem]\n",
        "entanglement = \"spiral\"\n[problem]\nring = 4\n",
    ] {
        assert!(ExperimentConfig::from_toml_str(text).is_err(), "{text}");
    }
}

#[test]
fn noiseless_matrix_is_exact_where_sampling_allows() {
    let dir = tempfile::tempdir().unwrap();
    let mut config = small_config(dir.path(), &[PI, 0.0, 0.0, PI]);
    config.presets = vec![Preset::Noiseless];
    let result = run_experiment(&config).unwrap();
    assert!((result.ideal - 1.0).abs() < 1e-12);
    assert_eq!(result.failed_cells(), 0);
    assert!(result.cell(Method::None, Preset::Noiseless).unwrap().abs_error.unwrap() < 1e-12);
    for method in [Method::Vd, Method::VdZne, Method::VdCut] {
        let cell = result.cell(method, Preset::Noiseless).unwrap();
        assert!(cell.abs_error.unwrap() < 5.0 * cell.stderr.unwrap() + 1e-9, "{cell:?}");
    }
}

#[test]
fn results_are_deterministic_and_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let mut config = small_config(dir.path(), &[0.3, -1.1, 0.7, 2.0]);
    config.presets = vec![Preset::Basic, Preset::BasicGctRct];
    let first = run_experiment(&config).unwrap();
    let second = run_experiment(&config).unwrap();
    assert_eq!(to_csv(&first).unwrap(), to_csv(&second).unwrap());
    assert_eq!(first.without_timing(), second.without_timing());
    assert_eq!(from_json(&to_json(&first)).unwrap(), first);

    let csv = to_csv(&first).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), CSV_HEADER.join(","));
    assert!(lines.next().unwrap().starts_with("ideal,"));
    assert_eq!(csv.lines().count(), 1 + 1 + 2 + 2 * Method::ALL.len());
    assert!(csv.contains("vd+cut@basic+gct+rct,"));
}

#[test]
fn ideal_ignores_map_and_seed() {
    let dir = tempfile::tempdir().unwrap();
    let mut config = small_config(dir.path(), &[0.3, -1.1, 0.7, 2.0]);
    config.methods = vec![Method::None];
    config.presets = vec![Preset::Basic];
    let reference = run_experiment(&config).unwrap().ideal;
    config.seed = 17;
    config.map = MapSpec::Full;
    assert_eq!(run_experiment(&config).unwrap().ideal, reference);
}

#[test]
fn mismatched_parameter_file_is_a_setup_error() {
    let dir = tempfile::tempdir().unwrap();
    let config = small_config(dir.path(), &[0.1, 0.2]);
    assert!(run_experiment(&config).is_err());
}

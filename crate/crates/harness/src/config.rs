//! Experiment configuration: a TOML file naming the problem, ansatz, noise
//! presets, mitigation methods and device.

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use vdcut_core::{Circuit, Entanglement, Error, RealAmplitudes, Result};
use vdcut_noise::Preset;
use vdcut_transpiler::CouplingMap;

use crate::maxcut::MaxCutProblem;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Method {
    #[serde(rename = "none")]
    None,
    #[serde(rename = "vd")]
    Vd,
    #[serde(rename = "vd+zne")]
    VdZne,
    #[serde(rename = "vd+cut")]
    VdCut,
}

impl Method {
    pub const ALL: [Method; 4] = [Method::None, Method::Vd, Method::VdZne, Method::VdCut];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::None => "none",
            Method::Vd => "vd",
            Method::VdZne => "vd+zne",
            Method::VdCut => "vd+cut",
        }
    }

    /// Position in [`Method::ALL`], used for seed derivation.
    pub fn index(self) -> usize {
        Method::ALL.iter().position(|&m| m == self).expect("listed")
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| Error::Invalid(format!("unknown method `{s}` (expected none, vd, vd+zne or vd+cut)")))
    }
}

/// Parses a comma-separated method list such as `none,vd+cut`.
pub fn parse_methods(list: &str) -> Result<Vec<Method>> {
    list.split(',').map(str::trim).filter(|s| !s.is_empty()).map(Method::from_str).collect()
}

/// Coupling map description: `full`, `linear`, `heavyhex:D` or `edges:PATH`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MapSpec {
    Full,
    Linear,
    HeavyHex(usize),
    Edges(PathBuf),
}

impl MapSpec {
    /// Builds the map; fully connected and linear maps get exactly `width` qubits.
    pub fn build(&self, width: usize) -> Result<CouplingMap> {
        match self {
            MapSpec::Full => Ok(CouplingMap::fully_connected(width)),
            MapSpec::Linear => Ok(CouplingMap::linear(width)),
            MapSpec::HeavyHex(d) => CouplingMap::heavy_hex(*d),
            MapSpec::Edges(path) => read_edge_map(path),
        }
    }

    /// Short label for tables: `full`, `linear`, `heavyhex:3`, `edges`.
    pub fn label(&self) -> String {
        match self {
            MapSpec::Edges(_) => "edges".into(),
            other => other.to_string(),
        }
    }

    fn resolve(&mut self, base: &Path) {
        if let MapSpec::Edges(path) = self {
            *path = base.join(&*path);
        }
    }
}

/// Reads `a b` pairs, one per line, `#` comments allowed; the qubit count is
/// one more than the largest index unless a `qubits N` line is given.
fn read_edge_map(path: &Path) -> Result<CouplingMap> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut edges = Vec::new();
    let mut qubits = None;
    for (number, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let parse = |s: &str| {
            s.parse::<usize>().map_err(|e| Error::Parse { line: number + 1, msg: format!("`{s}`: {e}") })
        };
        match line.split_whitespace().collect::<Vec<_>>().as_slice() {
            ["qubits", n] => qubits = Some(parse(n)?),
            [a, b] => edges.push((parse(a)?, parse(b)?)),
            _ => return Err(Error::Parse { line: number + 1, msg: format!("expected `a b`, got `{line}`") }),
        }
    }
    let inferred = edges.iter().map(|&(a, b)| a.max(b) + 1).max().unwrap_or(0);
    CouplingMap::custom(qubits.unwrap_or(inferred), edges)
}

impl fmt::Display for MapSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MapSpec::Full => f.write_str("full"),
            MapSpec::Linear => f.write_str("linear"),
            MapSpec::HeavyHex(d) => write!(f, "heavyhex:{d}"),
            MapSpec::Edges(path) => write!(f, "edges:{}", path.display()),
        }
    }
}

impl FromStr for MapSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let invalid = || Error::InvalidCouplingMap(format!("`{s}` (expected full, linear, heavyhex:D or edges:PATH)"));
        match s.split_once(':') {
            None if s == "full" => Ok(MapSpec::Full),
            None if s == "linear" => Ok(MapSpec::Linear),
            Some(("heavyhex", d)) => d.parse().map(MapSpec::HeavyHex).map_err(|_| invalid()),
            Some(("edges", path)) if !path.is_empty() => Ok(MapSpec::Edges(PathBuf::from(path))),
            _ => Err(invalid()),
        }
    }
}

impl Serialize for MapSpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for MapSpec {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(deserializer)?.parse().map_err(serde::de::Error::custom)
    }
}

/// The MaxCut graph (exactly one of `ring` and `edges`) and, optionally, a
/// circuit file that replaces the ansatz.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ring: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub edges: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub circuit: Option<PathBuf>,
}

impl ProblemConfig {
    pub fn ring(n: usize) -> Self {
        Self { ring: Some(n), ..Self::default() }
    }

    pub fn build(&self) -> Result<MaxCutProblem> {
        match (self.ring, &self.edges) {
            (Some(n), None) => MaxCutProblem::ring(n),
            (None, Some(path)) => {
                let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
                MaxCutProblem::from_edge_list(&text)
            }
            _ => Err(Error::Invalid("problem needs exactly one of `ring` and `edges`".into())),
        }
    }

    /// The state-preparation circuit from `circuit`, if one was given.
    pub fn load_circuit(&self) -> Result<Option<Circuit>> {
        self.circuit
            .as_ref()
            .map(|path| {
                let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
                Ok(Circuit::from_text(&text)?.without_measurements())
            })
            .transpose()
    }
}

fn default_reps() -> usize {
    2
}
fn default_entanglement() -> String {
    "circular".into()
}
fn default_presets() -> Vec<Preset> {
    vec![Preset::Basic, Preset::BasicGct, Preset::BasicGctRct]
}
fn default_methods() -> Vec<Method> {
    Method::ALL.to_vec()
}
fn default_shots() -> u64 {
    10_000
}
fn default_map() -> MapSpec {
    MapSpec::HeavyHex(3)
}
fn default_output() -> PathBuf {
    PathBuf::from("results")
}
fn default_scales() -> Vec<usize> {
    vdcut_zne::DEFAULT_SCALES.to_vec()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub problem: ProblemConfig,
    #[serde(default = "default_reps")]
    pub reps: usize,
    #[serde(default = "default_entanglement")]
    pub entanglement: String,
    /// Parameter file (one value per line); `None` optimizes noiselessly.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parameters: Option<PathBuf>,
    #[serde(default = "default_presets")]
    pub presets: Vec<Preset>,
    #[serde(default = "default_methods")]
    pub methods: Vec<Method>,
    /// Shots per device execution.
    #[serde(default = "default_shots")]
    pub shots: u64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_map")]
    pub map: MapSpec,
    /// Output file stem; results go to `<output>.csv` and `<output>.json`.
    #[serde(default = "default_output")]
    pub output: PathBuf,
    #[serde(default = "default_scales")]
    pub zne_scales: Vec<usize>,
}

impl ExperimentConfig {
    /// Defaults for everything but the problem.
    pub fn new(problem: ProblemConfig) -> Self {
        Self {
            problem,
            reps: default_reps(),
            entanglement: default_entanglement(),
            parameters: None,
            presets: default_presets(),
            methods: default_methods(),
            shots: default_shots(),
            seed: 0,
            map: default_map(),
            output: default_output(),
            zne_scales: default_scales(),
        }
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let config: Self = toml::from_str(text).map_err(|e| Error::Invalid(format!("config: {e}")))?;
        config.validate()?;
        Ok(config)
    }

    /// Loads and validates a config file; relative paths inside it are taken
    /// relative to the file's directory.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut config = Self::from_toml_str(&text)?;
        let base = path.parent().unwrap_or(Path::new(""));
        let join = |p: &mut PathBuf| *p = base.join(&*p);
        config.problem.edges.as_mut().map(join);
        config.problem.circuit.as_mut().map(join);
        config.parameters.as_mut().map(join);
        join(&mut config.output);
        config.map.resolve(base);
        Ok(config)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("config fields are TOML-representable")
    }

    pub fn validate(&self) -> Result<()> {
        if self.methods.is_empty() {
            return Err(Error::Invalid("methods must not be empty".into()));
        }
        if self.presets.is_empty() {
            return Err(Error::Invalid("presets must not be empty".into()));
        }
        if self.shots == 0 {
            return Err(Error::Invalid("shots must be at least 1".into()));
        }
        if self.methods.contains(&Method::VdZne) {
            if let Some(&bad) = self.zne_scales.iter().find(|&&s| s == 0 || s % 2 == 0) {
                return Err(Error::InvalidScale(bad));
            }
            let mut distinct = self.zne_scales.clone();
            distinct.sort_unstable();
            distinct.dedup();
            if distinct.len() < 2 {
                return Err(Error::InsufficientScales);
            }
        }
        if self.problem.ring.is_some() == self.problem.edges.is_some() {
            return Err(Error::Invalid("problem needs exactly one of `ring` and `edges`".into()));
        }
        self.entanglement()?;
        Ok(())
    }

    pub fn entanglement(&self) -> Result<Entanglement> {
        self.entanglement.parse()
    }

    pub fn ansatz(&self, qubits: usize) -> Result<RealAmplitudes> {
        RealAmplitudes::new(qubits, self.reps, self.entanglement()?)
    }

    pub fn csv_path(&self) -> PathBuf {
        self.output.with_extension("csv")
    }

    pub fn json_path(&self) -> PathBuf {
        self.output.with_extension("json")
    }
}

/// Reads a parameter file: one value per line, blank lines and `#` comments ignored.
pub fn read_parameters(path: &Path) -> Result<Vec<f64>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    text.lines()
        .enumerate()
        .map(|(i, raw)| (i, raw.split('#').next().unwrap_or("").trim()))
        .filter(|(_, line)| !line.is_empty())
        .map(|(i, line)| line.parse().map_err(|e| Error::Parse { line: i + 1, msg: format!("`{line}`: {e}") }))
        .collect()
}

/// Writes one parameter per line with full precision.
pub fn write_parameters(path: &Path, params: &[f64]) -> Result<()> {
    let text: String = params.iter().map(|p| format!("{p:.16e}\n")).collect();
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_takes_defaults() {
        let config = ExperimentConfig::from_toml_str("[problem]\nring = 4\n").unwrap();
        assert_eq!(config, ExperimentConfig::new(ProblemConfig::ring(4)));
        assert_eq!(config.shots, 10_000);
        assert_eq!(config.reps, 2);
        assert_eq!(config.map, MapSpec::HeavyHex(3));
    }

    #[test]
    fn full_config_round_trips() {
        let text = r#"
            seed = 7
            shots = 500
            methods = ["none", "vd+cut"]
            presets = ["noiseless", "basic+gct+rct"]
            map = "linear"
            zne_scales = [1, 3]
            [problem]
            ring = 6
        "#;
        let config = ExperimentConfig::from_toml_str(text).unwrap();
        assert_eq!(config.methods, vec![Method::None, Method::VdCut]);
        assert_eq!(config.presets, vec![Preset::Noiseless, Preset::BasicGctRct]);
        assert_eq!(ExperimentConfig::from_toml_str(&config.to_toml_string()).unwrap(), config);
    }

    #[test]
    fn invalid_configs_are_rejected() {
        for text in [
            "methods = []\n[problem]\nring = 4\n",
            "shots = 0\n[problem]\nring = 4\n",
            "zne_scales = [1, 2]\n[problem]\nring = 4\n",
            "zne_scales = [3]\n[problem]\nring = 4\n",
            "[problem]\n",
            "[problem]\nring = 4\nedges = \"g.txt\"\n",
            "methods = [\"magic\"]\n[problem]\nring = 4\n",
            "map = \"torus\"\n[problem]\nring = 4\n",
            "entanglement = \"spiral\"\n[problem]\nring = 4\n",
            "colour = 1\n[problem]\nring = 4\n",
        ] {
            assert!(ExperimentConfig::from_toml_str(text).is_err(), "{text}");
        }
    }

    #[test]
    fn method_and_map_strings() {
        assert_eq!(parse_methods("none, vd+zne,vd+cut").unwrap(), vec![Method::None, Method::VdZne, Method::VdCut]);
        assert!(parse_methods("vd,zne").is_err());
        for s in ["full", "linear", "heavyhex:5", "edges:dev/map.txt"] {
            assert_eq!(s.parse::<MapSpec>().unwrap().to_string(), s);
        }
        assert!("heavyhex:x".parse::<MapSpec>().is_err());
        assert_eq!(MapSpec::Full.build(6).unwrap().qubits(), 6);
    }
}

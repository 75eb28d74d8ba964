//! Device noise parameters and the built-in presets.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::path::Path;
use std::str::FromStr;
use vdcut_core::{Error, Result};

pub const DEFAULT_CROSSTALK_ANGLE: f64 = -std::f64::consts::PI / 3.5;

pub type Confusion2 = [[f64; 2]; 2];
pub type Confusion4 = [[f64; 4]; 4];

/// Symmetric single-qubit confusion matrix with flip probability `error`.
pub fn symmetric_confusion(error: f64) -> Confusion2 {
    [[1.0 - error, error], [error, 1.0 - error]]
}

/// Pairwise readout matrix with `diag` on the diagonal and `off` elsewhere.
pub fn uniform_pair_confusion(diag: f64, off: f64) -> Confusion4 {
    let mut m = [[off; 4]; 4];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = diag;
    }
    m
}

/// Noise parameters. Confusion matrices are row-stochastic, indexed
/// `[true outcome][observed outcome]`; pairwise outcomes use `b_low + 2*b_high`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NoiseModel {
    pub name: String,
    pub depolarizing_2q: f64,
    pub depolarizing_1q: f64,
    /// Seconds.
    pub duration_2q: f64,
    /// Seconds.
    pub duration_1q: f64,
    /// Seconds; `None` disables relaxation.
    pub t1: Option<f64>,
    /// Seconds; `None` disables relaxation.
    pub t2: Option<f64>,
    /// Confusion matrix for every qubit without an explicit entry.
    pub readout: Confusion2,
    /// Optional per-qubit overrides, indexed by physical qubit.
    pub readout_per_qubit: Vec<Confusion2>,
    pub gate_crosstalk: bool,
    pub crosstalk_angle: f64,
    pub readout_crosstalk: bool,
    pub readout_crosstalk_matrix: Confusion4,
}

impl Default for NoiseModel {
    fn default() -> Self {
        Self::basic()
    }
}

impl NoiseModel {
    pub fn basic() -> Self {
        Self {
            name: "basic".into(),
            depolarizing_2q: 7.936e-3,
            depolarizing_1q: 0.0,
            duration_2q: 346.667e-9,
            duration_1q: 35.5e-9,
            t1: Some(120.385e-6),
            t2: Some(138.652e-6),
            readout: symmetric_confusion(1.2e-2),
            readout_per_qubit: Vec::new(),
            gate_crosstalk: false,
            crosstalk_angle: DEFAULT_CROSSTALK_ANGLE,
            readout_crosstalk: false,
            readout_crosstalk_matrix: uniform_pair_confusion(0.991, 0.003),
        }
    }

    pub fn noiseless() -> Self {
        Self {
            name: "noiseless".into(),
            depolarizing_2q: 0.0,
            depolarizing_1q: 0.0,
            t1: None,
            t2: None,
            readout: symmetric_confusion(0.0),
            ..Self::basic()
        }
    }

    pub fn preset(preset: Preset) -> Self {
        match preset {
            Preset::Noiseless => Self::noiseless(),
            Preset::Basic => Self::basic(),
            Preset::BasicGct => Self { name: preset.to_string(), gate_crosstalk: true, ..Self::basic() },
            Preset::BasicGctRct => {
                Self { name: preset.to_string(), gate_crosstalk: true, readout_crosstalk: true, ..Self::basic() }
            }
        }
    }

    pub fn is_noiseless(&self) -> bool {
        self.depolarizing_1q == 0.0
            && self.depolarizing_2q == 0.0
            && self.t1.is_none()
            && self.readout == symmetric_confusion(0.0)
            && self.readout_per_qubit.iter().all(|m| *m == symmetric_confusion(0.0))
            && !self.gate_crosstalk
            && !self.readout_crosstalk
    }

    pub fn readout_for(&self, qubit: usize) -> &Confusion2 {
        self.readout_per_qubit.get(qubit).unwrap_or(&self.readout)
    }

    /// Amplitude-damping parameter and extra dephasing factor for a gate of
    /// the given duration; `None` when relaxation is disabled.
    pub fn relaxation(&self, duration: f64) -> Option<(f64, f64)> {
        let (t1, t2) = (self.t1?, self.t2?);
        if duration <= 0.0 {
            return None;
        }
        let gamma = 1.0 - (-duration / t1).exp();
        let dephase = (-duration * (1.0 / t2 - 0.5 / t1)).exp();
        Some((gamma, dephase))
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidNoise(m));
        for (label, p) in [("depolarizing_2q", self.depolarizing_2q), ("depolarizing_1q", self.depolarizing_1q)] {
            if !(0.0..=1.0).contains(&p) {
                return bad(format!("{label} = {p} outside [0, 1]"));
            }
        }
        for (label, d) in [("duration_2q", self.duration_2q), ("duration_1q", self.duration_1q)] {
            if !(d >= 0.0 && d.is_finite()) {
                return bad(format!("{label} = {d} must be a non-negative duration"));
            }
        }
        match (self.t1, self.t2) {
            (None, None) => {}
            (Some(t1), Some(t2)) => {
                if !(t1 > 0.0 && t2 > 0.0) {
                    return bad("T1 and T2 must be positive".into());
                }
                if t2 > 2.0 * t1 {
                    return bad(format!("T2 = {t2} exceeds 2*T1 = {}", 2.0 * t1));
                }
            }
            _ => return bad("T1 and T2 must be given together".into()),
        }
        let all_2 = std::iter::once(&self.readout).chain(&self.readout_per_qubit);
        for m in all_2 {
            if !m.iter().all(|r| is_stochastic_row(r)) {
                return bad(format!("readout matrix {m:?} is not row-stochastic"));
            }
        }
        if !self.readout_crosstalk_matrix.iter().all(|r| is_stochastic_row(r)) {
            return bad("readout crosstalk matrix is not row-stochastic".into());
        }
        Ok(())
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let model: NoiseModel = toml::from_str(text).map_err(|e| Error::InvalidNoise(e.to_string()))?;
        model.validate()?;
        Ok(model)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("noise model serialises")
    }
}

fn is_stochastic_row(row: &[f64]) -> bool {
    row.iter().all(|&x| x >= 0.0) && (row.iter().sum::<f64>() - 1.0).abs() <= 1e-12
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Preset {
    #[serde(rename = "noiseless")]
    Noiseless,
    #[serde(rename = "basic")]
    Basic,
    #[serde(rename = "basic+gct")]
    BasicGct,
    #[serde(rename = "basic+gct+rct")]
    BasicGctRct,
}

impl Preset {
    pub const ALL: [Preset; 4] = [Preset::Noiseless, Preset::Basic, Preset::BasicGct, Preset::BasicGctRct];

    pub fn as_str(self) -> &'static str {
        match self {
            Preset::Noiseless => "noiseless",
            Preset::Basic => "basic",
            Preset::BasicGct => "basic+gct",
            Preset::BasicGctRct => "basic+gct+rct",
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Preset {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Preset::ALL
            .into_iter()
            .find(|p| p.as_str() == s)
            .ok_or_else(|| Error::InvalidNoise(format!("unknown preset `{s}`")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_validate() {
        for p in Preset::ALL {
            NoiseModel::preset(p).validate().unwrap();
        }
        assert!(NoiseModel::noiseless().is_noiseless());
        assert!(!NoiseModel::basic().is_noiseless());
    }

    #[test]
    fn toml_round_trip_and_partial_files() {
        let m = NoiseModel::preset(Preset::BasicGctRct);
        assert_eq!(NoiseModel::from_toml_str(&m.to_toml_string()).unwrap(), m);
        let partial = NoiseModel::from_toml_str("depolarizing_2q = 0.02\n").unwrap();
        assert_eq!(partial.depolarizing_2q, 0.02);
        assert_eq!(partial.t1, Some(120.385e-6));
    }

    #[test]
    fn invalid_models_rejected() {
        assert!(NoiseModel::from_toml_str("t1 = 1e-6\nt2 = 3e-6\n").is_err());
        assert!(NoiseModel::from_toml_str("readout = [[0.9, 0.2], [0.0, 1.0]]\n").is_err());
        assert!(NoiseModel::from_toml_str("depolarizing_1q = 1.5\n").is_err());
        assert!(NoiseModel::from_toml_str("unknown_key = 1\n").is_err());
    }

    #[test]
    fn relaxation_parameters() {
        let (gamma, dephase) = NoiseModel::basic().relaxation(346.667e-9).unwrap();
        assert!((gamma - (1.0 - (-346.667e-9f64 / 120.385e-6).exp())).abs() < 1e-15);
        let coherence = (1.0 - gamma).sqrt() * dephase;
        assert!((coherence - (-346.667e-9f64 / 138.652e-6).exp()).abs() < 1e-15);
    }
}

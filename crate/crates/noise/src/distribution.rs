//! Outcome distributions, sampling and readout error.
//!
//! Outcome index bit `k` is qubit `k`; outcome strings print qubit 0 first.

use crate::density::DensityMatrix;
use crate::model::NoiseModel;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use vdcut_core::{Error, PauliObservable, Result};

/// Tolerance on the total probability of a distribution.
pub const NORM_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    width: usize,
    probs: Vec<f64>,
}

pub fn outcome_string(index: usize, width: usize) -> String {
    (0..width).map(|q| if (index >> q) & 1 == 1 { '1' } else { '0' }).collect()
}

pub fn parse_outcome(s: &str) -> Result<usize> {
    s.chars().enumerate().try_fold(0usize, |acc, (q, ch)| match ch {
        '0' => Ok(acc),
        '1' => Ok(acc | (1 << q)),
        _ => Err(Error::Invalid(format!("bad outcome string `{s}`"))),
    })
}

impl Distribution {
    /// Dense probability vector; must be non-negative and sum to one.
    pub fn new(width: usize, probs: Vec<f64>) -> Result<Self> {
        if probs.len() != 1 << width {
            return Err(Error::Invalid(format!("expected {} probabilities, got {}", 1usize << width, probs.len())));
        }
        if let Some(&p) = probs.iter().find(|p| p.is_nan() || **p < 0.0) {
            return Err(Error::NegativeProbability(p));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::Invalid(format!("probabilities sum to {total}")));
        }
        Ok(Self { width, probs })
    }

    /// Normalises non-negative weights.
    pub fn from_weights(width: usize, weights: Vec<f64>) -> Result<Self> {
        let total: f64 = weights.iter().sum();
        if total.is_nan() || total <= 0.0 {
            return Err(Error::DisjointSupport);
        }
        Self::new(width, weights.into_iter().map(|w| w / total).collect())
    }

    pub fn from_outcomes<'a>(width: usize, entries: impl IntoIterator<Item = (&'a str, f64)>) -> Result<Self> {
        let mut probs = vec![0.0; 1 << width];
        for (s, p) in entries {
            if s.len() != width {
                return Err(Error::Invalid(format!("outcome `{s}` does not have {width} bits")));
            }
            probs[parse_outcome(s)?] += p;
        }
        Self::new(width, probs)
    }

    pub fn point(width: usize, index: usize) -> Self {
        let mut probs = vec![0.0; 1 << width];
        probs[index] = 1.0;
        Self { width, probs }
    }

    pub fn uniform(width: usize) -> Self {
        let n = 1usize << width;
        Self { width, probs: vec![1.0 / n as f64; n] }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn prob(&self, index: usize) -> f64 {
        self.probs[index]
    }

    pub fn get(&self, outcome: &str) -> f64 {
        parse_outcome(outcome).map(|i| self.probs[i]).unwrap_or(0.0)
    }

    /// Non-zero entries keyed by outcome string.
    pub fn to_map(&self) -> BTreeMap<String, f64> {
        self.probs
            .iter()
            .enumerate()
            .filter(|(_, p)| **p > 0.0)
            .map(|(i, p)| (outcome_string(i, self.width), *p))
            .collect()
    }

    /// Marginal on `qubits`; qubit `qubits[j]` becomes bit `j`.
    pub fn marginal(&self, qubits: &[usize]) -> Distribution {
        let mut probs = vec![0.0; 1 << qubits.len()];
        for (i, &p) in self.probs.iter().enumerate() {
            let j = qubits.iter().enumerate().fold(0usize, |acc, (k, &q)| acc | (((i >> q) & 1) << k));
            probs[j] += p;
        }
        Distribution { width: qubits.len(), probs }
    }

    pub fn total_variation(&self, other: &Distribution) -> f64 {
        assert_eq!(self.width, other.width, "width mismatch");
        self.probs.iter().zip(&other.probs).map(|(a, b)| (a - b).abs()).sum::<f64>() / 2.0
    }

    /// Expectation of an I/Z observable.
    pub fn expectation(&self, obs: &PauliObservable) -> Result<f64> {
        obs.check_width(self.width)?;
        let terms = obs.z_terms()?;
        Ok(self
            .probs
            .iter()
            .enumerate()
            .filter(|(_, p)| **p != 0.0)
            .map(|(i, p)| {
                p * terms
                    .iter()
                    .map(|&(c, mask)| if (i & mask).count_ones() % 2 == 0 { c } else { -c })
                    .sum::<f64>()
            })
            .sum())
    }

    /// Multinomial draw of `shots` outcomes, reproducible for a fixed seed.
    pub fn sample(&self, shots: u64, seed: u64) -> Counts {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut cdf = Vec::with_capacity(self.probs.len());
        let mut acc = 0.0;
        for &p in &self.probs {
            acc += p;
            cdf.push(acc);
        }
        let last_nonzero = self.probs.iter().rposition(|&p| p > 0.0).unwrap_or(0);
        let mut counts = vec![0u64; self.probs.len()];
        for _ in 0..shots {
            let u: f64 = rng.gen::<f64>() * acc;
            let idx = cdf.partition_point(|&c| c <= u).min(last_nonzero);
            counts[idx] += 1;
        }
        Counts { width: self.width, counts }
    }
}

/// Diagonal of `rho` as a distribution. Entries in `[-1e-10, 0)` are clamped.
pub fn exact_probs(rho: &DensityMatrix) -> Result<Distribution> {
    let mut diag = rho.diagonal();
    for p in diag.iter_mut() {
        if *p < -1e-10 {
            return Err(Error::NegativeProbability(*p));
        }
        if *p < 0.0 {
            *p = 0.0;
        }
    }
    Distribution::from_weights(rho.width(), diag)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counts {
    width: usize,
    counts: Vec<u64>,
}

impl Counts {
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn shots(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn get(&self, outcome: &str) -> u64 {
        parse_outcome(outcome).map(|i| self.counts[i]).unwrap_or(0)
    }

    pub fn to_distribution(&self) -> Distribution {
        let shots = self.shots().max(1) as f64;
        Distribution { width: self.width, probs: self.counts.iter().map(|&c| c as f64 / shots).collect() }
    }

    pub fn to_map(&self) -> BTreeMap<String, u64> {
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, c)| **c > 0)
            .map(|(i, c)| (outcome_string(i, self.width), *c))
            .collect()
    }
}

fn apply_single(probs: &mut [f64], bit: usize, m: &[[f64; 2]; 2]) {
    let stride = 1 << bit;
    for i in 0..probs.len() {
        if i & stride != 0 {
            continue;
        }
        let (p0, p1) = (probs[i], probs[i | stride]);
        probs[i] = p0 * m[0][0] + p1 * m[1][0];
        probs[i | stride] = p0 * m[0][1] + p1 * m[1][1];
    }
}

fn apply_pair(probs: &mut [f64], a: usize, b: usize, m: &[[f64; 4]; 4]) {
    let (sa, sb) = (1 << a, 1 << b);
    for i in 0..probs.len() {
        if i & (sa | sb) != 0 {
            continue;
        }
        let idx = [i, i | sa, i | sb, i | sa | sb];
        let p = idx.map(|k| probs[k]);
        for (obs, &k) in idx.iter().enumerate() {
            probs[k] = (0..4).map(|t| p[t] * m[t][obs]).sum();
        }
    }
}

/// Greedy matching in ascending `(min, max)` edge order: each bit joins at most one pair.
pub fn crosstalk_pairs(width: usize, adjacency: &[(usize, usize)]) -> Vec<(usize, usize)> {
    let mut edges: Vec<(usize, usize)> =
        adjacency.iter().map(|&(a, b)| (a.min(b), a.max(b))).filter(|&(a, b)| a != b && b < width).collect();
    edges.sort_unstable();
    edges.dedup();
    let mut used = vec![false; width];
    let mut pairs = Vec::new();
    for (a, b) in edges {
        if !used[a] && !used[b] {
            used[a] = true;
            used[b] = true;
            pairs.push((a, b));
        }
    }
    pairs
}

/// Readout error on every bit; bit `j` uses the matrix of physical qubit
/// `labels[j]`. `adjacency` lists neighbouring bit pairs for readout crosstalk.
pub fn apply_readout_labelled(
    dist: &Distribution,
    noise: &NoiseModel,
    labels: &[usize],
    adjacency: &[(usize, usize)],
) -> Distribution {
    let mut probs = dist.probs.clone();
    for (bit, &label) in labels.iter().enumerate().take(dist.width) {
        let m = noise.readout_for(label);
        if *m != [[1.0, 0.0], [0.0, 1.0]] {
            apply_single(&mut probs, bit, m);
        }
    }
    if noise.readout_crosstalk {
        for (a, b) in crosstalk_pairs(dist.width, adjacency) {
            apply_pair(&mut probs, a, b, &noise.readout_crosstalk_matrix);
        }
    }
    Distribution { width: dist.width, probs }
}

/// Readout error with bit `j` taken as physical qubit `j`.
pub fn apply_readout(dist: &Distribution, noise: &NoiseModel, adjacency: &[(usize, usize)]) -> Distribution {
    let labels: Vec<usize> = (0..dist.width).collect();
    apply_readout_labelled(dist, noise, &labels, adjacency)
}

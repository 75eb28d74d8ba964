//! Shot-level post-processing of two-copy measurement outcomes.
//!
//! Outcome bit `i` is copy-0 qubit `i`, bit `n+i` its copy-1 partner. Per pair
//! the SWAP sign `s_i` is −1 on the singlet outcome and +1 otherwise. The
//! denominator weight is `Π_i s_i`; for a Z-string on qubit set `T` the
//! numerator weight is `Π_{i∈T} e_i · Π_{i∉T} s_i` with `e_i = +1` on `00`,
//! `−1` on `11` and `0` on the odd-parity outcomes.

use crate::circuit::DiagonalizingGate;
use vdcut_core::{Error, PauliObservable, Result};
use vdcut_noise::{Counts, Distribution, Execution};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VDEstimate {
    pub numerator: f64,
    pub denominator: f64,
    pub numerator_stderr: f64,
    pub denominator_stderr: f64,
    pub shots: u64,
}

impl VDEstimate {
    /// `numerator / denominator`, refused when the denominator is within
    /// ten standard errors of zero.
    pub fn mitigated(&self) -> Result<f64> {
        if self.denominator.abs() < 10.0 * self.denominator_stderr || self.denominator == 0.0 {
            return Err(Error::InsignificantDenominator { value: self.denominator, stderr: self.denominator_stderr });
        }
        Ok(self.numerator / self.denominator)
    }

    /// First-order standard error of [`Self::mitigated`].
    pub fn mitigated_stderr(&self) -> Result<f64> {
        let value = self.mitigated()?;
        Ok((self.numerator_stderr + value.abs() * self.denominator_stderr) / self.denominator.abs())
    }
}

struct Weights {
    width: usize,
    terms: Vec<(f64, usize)>,
    singlet: (usize, usize),
}

impl Weights {
    fn new(obs: &PauliObservable, width: usize) -> Result<Self> {
        if !width.is_multiple_of(2) {
            return Err(Error::Invalid(format!("two-copy outcomes need an even width, got {width}")));
        }
        obs.check_width(width / 2)?;
        let (a, b) = DiagonalizingGate::standard().singlet_bits();
        Ok(Self { width: width / 2, terms: obs.z_terms()?, singlet: (a as usize, b as usize) })
    }

    /// `(numerator weight, denominator weight)` of one outcome.
    fn of(&self, outcome: usize) -> (f64, f64) {
        let n = self.width;
        let mut sign_mask = 0usize; // pairs with s_i = −1
        let mut odd_mask = 0usize; // pairs with outcome 01 or 10
        let mut ones_mask = 0usize; // pairs with outcome 11
        for i in 0..n {
            let z = (outcome >> i) & 1;
            let zp = (outcome >> (n + i)) & 1;
            if (z, zp) == self.singlet {
                sign_mask |= 1 << i;
            }
            if z != zp {
                odd_mask |= 1 << i;
            } else if z == 1 {
                ones_mask |= 1 << i;
            }
        }
        let den = parity_sign(sign_mask);
        let num = self
            .terms
            .iter()
            .filter(|&&(_, t)| t & odd_mask == 0)
            .map(|&(c, t)| c * parity_sign((t & ones_mask) ^ (sign_mask & !t)))
            .sum();
        (num, den)
    }
}

fn parity_sign(mask: usize) -> f64 {
    if mask.count_ones().is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

fn moments(items: impl Iterator<Item = (f64, f64, f64)>) -> [f64; 4] {
    // (probability, numerator weight, denominator weight)
    items.fold([0.0; 4], |mut acc, (p, num, den)| {
        acc[0] += p * num;
        acc[1] += p * num * num;
        acc[2] += p * den;
        acc[3] += p * den * den;
        acc
    })
}

fn finish(m: [f64; 4], shots: u64) -> VDEstimate {
    let s = shots.max(1) as f64;
    let stderr = |mean: f64, sq: f64| ((sq - mean * mean).max(0.0) / s).sqrt();
    VDEstimate {
        numerator: m[0],
        denominator: m[2],
        numerator_stderr: if shots == 0 { 0.0 } else { stderr(m[0], m[1]) },
        denominator_stderr: if shots == 0 { 0.0 } else { stderr(m[2], m[3]) },
        shots,
    }
}

/// Shot averages of the weights over measured counts.
pub fn estimate_from_counts(counts: &Counts, obs: &PauliObservable) -> Result<VDEstimate> {
    let w = Weights::new(obs, counts.width())?;
    let shots = counts.shots();
    let total = shots.max(1) as f64;
    let m = moments(counts.counts().iter().enumerate().filter(|(_, c)| **c > 0).map(|(x, &c)| {
        let (num, den) = w.of(x);
        (c as f64 / total, num, den)
    }));
    Ok(finish(m, shots))
}

/// Exact weighting over a distribution. Standard errors are those of
/// `shots` samples from it (zero when `shots` is `None`).
pub fn estimate_from_distribution(dist: &Distribution, obs: &PauliObservable, shots: Option<u64>) -> Result<VDEstimate> {
    let w = Weights::new(obs, dist.width())?;
    let m = moments(dist.probs().iter().enumerate().filter(|(_, p)| **p > 0.0).map(|(x, &p)| {
        let (num, den) = w.of(x);
        (p, num, den)
    }));
    Ok(finish(m, shots.unwrap_or(0)))
}

/// Uses the sampled counts of `run` when present, its exact distribution otherwise.
pub fn estimate_from_execution(run: &Execution, obs: &PauliObservable) -> Result<VDEstimate> {
    match &run.counts {
        Some(counts) => estimate_from_counts(counts, obs),
        None => estimate_from_distribution(&run.exact, obs, None),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_of_single_pair() {
        let w = Weights::new(&PauliObservable::z(1, 0), 2).unwrap();
        // Outcome index: bit 0 = copy 0, bit 1 = copy 1.
        assert_eq!(w.of(0b00), (1.0, 1.0));
        assert_eq!(w.of(0b11), (-1.0, 1.0));
        assert_eq!(w.of(0b10), (0.0, 1.0)); // "01"
        assert_eq!(w.of(0b01), (0.0, -1.0)); // "10", the singlet
    }

    #[test]
    fn identity_term_tracks_denominator() {
        let obs = PauliObservable::new(2).with_term(2.5, "II").unwrap();
        let w = Weights::new(&obs, 4).unwrap();
        for x in 0..16 {
            let (num, den) = w.of(x);
            assert_eq!(num, 2.5 * den);
        }
    }

    #[test]
    fn insignificant_denominator_refused() {
        let e = VDEstimate { numerator: 0.1, denominator: 0.05, numerator_stderr: 0.01, denominator_stderr: 0.01, shots: 100 };
        assert!(matches!(e.mitigated(), Err(Error::InsignificantDenominator { .. })));
        let ok = VDEstimate { denominator_stderr: 0.001, ..e };
        assert!((ok.mitigated().unwrap() - 2.0).abs() < 1e-15);
    }
}

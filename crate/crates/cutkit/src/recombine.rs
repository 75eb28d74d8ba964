//! Merging mitigated pairwise distributions into the joint distribution.

use vdcut_core::{Error, Result};
use vdcut_noise::Distribution;

/// Marginal mass below which a pair outcome counts as unobserved.
pub const MISSING_MARGINAL: f64 = 1e-12;

/// Rescales `unmitigated` so each pair marginal moves to the corresponding
/// entry of `pairwise`: `Q(x) ∝ P(x) Π_i P_i(x_i, x_i') / M_i(x_i, x_i')`.
/// Pair outcomes the unmitigated data never saw receive their mitigated mass
/// spread uniformly over all joint outcomes carrying them.
pub fn recombine(unmitigated: &Distribution, pairwise: &[Distribution], pairs: &[(usize, usize)]) -> Result<Distribution> {
    let width = unmitigated.width();
    if pairwise.len() != pairs.len() {
        return Err(Error::Invalid(format!("{} pair distributions for {} pairs", pairwise.len(), pairs.len())));
    }
    let mut covered = vec![false; width];
    for (&(a, b), dist) in pairs.iter().zip(pairwise) {
        if a >= width || b >= width || a == b || covered[a] || covered[b] {
            return Err(Error::Invalid(format!("pair ({a}, {b}) is out of range or overlaps another pair")));
        }
        covered[a] = true;
        covered[b] = true;
        if dist.width() != 2 {
            return Err(Error::Invalid(format!("pair ({a}, {b}) distribution has {} bits", dist.width())));
        }
    }
    let marginals: Vec<Distribution> = pairs.iter().map(|&(a, b)| unmitigated.marginal(&[a, b])).collect();
    let pair_value = |x: usize, (a, b): (usize, usize)| ((x >> a) & 1) | (((x >> b) & 1) << 1);

    let mut q: Vec<f64> = unmitigated
        .probs()
        .iter()
        .enumerate()
        .map(|(x, &p)| {
            p * pairs
                .iter()
                .zip(pairwise.iter().zip(&marginals))
                .map(|(&pair, (target, current))| {
                    let v = pair_value(x, pair);
                    let m = current.prob(v);
                    if m < MISSING_MARGINAL {
                        0.0
                    } else {
                        target.prob(v) / m
                    }
                })
                .product::<f64>()
        })
        .collect();
    let spread = 1.0 / (1u64 << (width - 2)) as f64;
    for (&pair, (target, current)) in pairs.iter().zip(pairwise.iter().zip(&marginals)) {
        for v in 0..4 {
            if current.prob(v) < MISSING_MARGINAL && target.prob(v) > 0.0 {
                let mass = target.prob(v) * spread;
                q.iter_mut().enumerate().filter(|(x, _)| pair_value(*x, pair) == v).for_each(|(_, w)| *w += mass);
            }
        }
    }
    Distribution::from_weights(width, q)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn consistent_marginals_are_a_fixed_point() {
        let p = Distribution::from_weights(4, (1..=16).map(|k| (k * k % 7 + 1) as f64).collect()).unwrap();
        let pairs = [(0, 2), (1, 3)];
        let pw: Vec<_> = pairs.iter().map(|&(a, b)| p.marginal(&[a, b])).collect();
        assert!(recombine(&p, &pw, &pairs).unwrap().total_variation(&p) < 1e-15);
    }

    #[test]
    fn single_pair_is_fully_determined() {
        let p = Distribution::new(2, vec![0.5, 0.5, 0.0, 0.0]).unwrap();
        let target = Distribution::new(2, vec![0.1, 0.2, 0.3, 0.4]).unwrap();
        let q = recombine(&p, std::slice::from_ref(&target), &[(0, 1)]).unwrap();
        assert!(q.total_variation(&target) < 1e-15);
    }

    #[test]
    fn unobserved_pair_outcomes_receive_spread_mass() {
        let p = Distribution::point(4, 0b0101);
        let to_zero = Distribution::new(2, vec![1.0, 0.0, 0.0, 0.0]).unwrap();
        let q = recombine(&p, &[to_zero.clone(), to_zero], &[(0, 2), (1, 3)]).unwrap();
        assert!((q.marginal(&[0, 2]).prob(0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn disjoint_support_is_an_error() {
        let mut probs = vec![0.0; 16];
        probs[0b0000] = 0.5;
        probs[0b1111] = 0.5;
        let p = Distribution::new(4, probs).unwrap();
        let to_zero = Distribution::new(2, vec![1.0, 0.0, 0.0, 0.0]).unwrap();
        let to_three = Distribution::new(2, vec![0.0, 0.0, 0.0, 1.0]).unwrap();
        assert!(matches!(recombine(&p, &[to_zero, to_three], &[(0, 2), (1, 3)]), Err(Error::DisjointSupport)));
    }
}

//! CNOT overhead of the two-copy circuit over the original, after routing.

use crate::config::MapSpec;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use vdcut_core::{Entanglement, Error, RealAmplitudes, Result};
use vdcut_noise::{Backend, NoiseModel};
use vdcut_vdistill::build_vd_circuit;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OverheadRow {
    pub n: usize,
    pub layers: usize,
    pub map: String,
    pub cnot_original: usize,
    pub cnot_vd: usize,
    /// CNOTs beyond two copies of the original: `cnot_vd − 2·cnot_original`.
    pub cnot_extra: i64,
}

/// Routed CNOT counts for RealAmplitudes (circular) circuits with `n` qubits
/// and `layers` entangling layers, original versus two-copy. Fully connected
/// and linear maps are sized to each circuit.
pub fn overhead_sweep(qubits: &[usize], layers: &[usize], map: &MapSpec) -> Result<Vec<OverheadRow>> {
    let points: Vec<(usize, usize)> = qubits.iter().flat_map(|&n| layers.iter().map(move |&l| (n, l))).collect();
    points
        .par_iter()
        .map(|&(n, reps)| {
            let ansatz = RealAmplitudes::new(n, reps, Entanglement::Circular)?;
            let params: Vec<f64> = (0..ansatz.num_parameters()).map(|k| 0.1 + 0.01 * k as f64).collect();
            let original = ansatz.bind(&params)?;
            let vd = build_vd_circuit(&original)?;
            let count = |circuit: &vdcut_core::Circuit| -> Result<usize> {
                let device = Backend::new(NoiseModel::noiseless(), Some(map.build(circuit.width())?), None);
                Ok(device.compile(circuit)?.cnot)
            };
            let (cnot_original, cnot_vd) = (count(&original)?, count(&vd)?);
            Ok(OverheadRow {
                n,
                layers: reps,
                map: map.label(),
                cnot_original,
                cnot_vd,
                cnot_extra: cnot_vd as i64 - 2 * cnot_original as i64,
            })
        })
        .collect()
}

/// Least-squares slope of `ln(cnot_extra)` against `ln(n)` over rows with
/// the given layer count.
pub fn fit_exponent(rows: &[OverheadRow], layers: usize) -> Result<f64> {
    let points: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.layers == layers)
        .map(|r| {
            if r.cnot_extra <= 0 {
                return Err(Error::Invalid(format!("non-positive extra CNOTs at n={} layers={}", r.n, r.layers)));
            }
            Ok(((r.n as f64).ln(), (r.cnot_extra as f64).ln()))
        })
        .collect::<Result<_>>()?;
    if points.len() < 2 {
        return Err(Error::Invalid(format!("need two sweep points with {layers} layers")));
    }
    let count = points.len() as f64;
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / count;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / count;
    let sxx: f64 = points.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    if sxx == 0.0 {
        return Err(Error::Invalid("sweep needs two distinct qubit counts".into()));
    }
    Ok(sxy / sxx)
}

/// Parses `a..b` (inclusive) or a single number.
pub fn parse_range(text: &str) -> Result<Vec<usize>> {
    let number = |s: &str| s.trim().parse::<usize>().map_err(|_| Error::Invalid(format!("bad range `{text}`")));
    match text.split_once("..") {
        Some((a, b)) => {
            let (a, b) = (number(a)?, number(b.trim_start_matches('='))?);
            if a > b {
                return Err(Error::Invalid(format!("empty range `{text}`")));
            }
            Ok((a..=b).collect())
        }
        None => text.split(',').map(number).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fully_connected_overhead_is_three_cnots_per_pair() {
        let rows = overhead_sweep(&[2, 3, 5], &[1, 2], &MapSpec::Full).unwrap();
        for row in &rows {
            assert_eq!(row.cnot_extra, 3 * row.n as i64, "{row:?}");
        }
        assert!((fit_exponent(&rows, 2).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn ranges() {
        assert_eq!(parse_range("4..7").unwrap(), vec![4, 5, 6, 7]);
        assert_eq!(parse_range("4..=5").unwrap(), vec![4, 5]);
        assert_eq!(parse_range("2,4,8").unwrap(), vec![2, 4, 8]);
        assert!(parse_range("5..4").is_err());
        assert!(parse_range("x").is_err());
    }
}

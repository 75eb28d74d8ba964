//! Hardware-efficient RealAmplitudes ansatz: RY layers interleaved with CNOT layers.

use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Entanglement {
    /// Wrap-around CNOT(n−1, 0) first, then CNOT(i, i+1).
    #[default]
    Circular,
    Linear,
    Full,
}

impl FromStr for Entanglement {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "circular" => Ok(Self::Circular),
            "linear" => Ok(Self::Linear),
            "full" => Ok(Self::Full),
            other => Err(Error::Invalid(format!("unknown entanglement pattern `{other}`"))),
        }
    }
}

impl Entanglement {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Circular => "circular",
            Self::Linear => "linear",
            Self::Full => "full",
        }
    }

    /// Ordered CNOT (control, target) pairs of one entangling layer.
    pub fn pairs(self, n: usize) -> Vec<(usize, usize)> {
        let linear = (0..n.saturating_sub(1)).map(|i| (i, i + 1));
        match self {
            Self::Linear => linear.collect(),
            // On two qubits the wrap pair (1,0) duplicates (0,1) and is dropped.
            Self::Circular if n > 2 => std::iter::once((n - 1, 0)).chain(linear).collect(),
            Self::Circular => linear.collect(),
            Self::Full => (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RealAmplitudes {
    qubits: usize,
    reps: usize,
    entanglement: Entanglement,
}

impl RealAmplitudes {
    pub fn new(qubits: usize, reps: usize, entanglement: Entanglement) -> Result<Self> {
        if qubits < 2 {
            return Err(Error::Invalid(format!("ansatz needs at least 2 qubits, got {qubits}")));
        }
        Ok(Self { qubits, reps, entanglement })
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn reps(&self) -> usize {
        self.reps
    }

    pub fn entanglement(&self) -> Entanglement {
        self.entanglement
    }

    pub fn num_parameters(&self) -> usize {
        self.qubits * (self.reps + 1)
    }

    /// Concrete circuit for a parameter vector; parameter `l*n + q` drives
    /// the RY on qubit `q` in rotation layer `l`.
    pub fn bind(&self, params: &[f64]) -> Result<Circuit> {
        if params.len() != self.num_parameters() {
            return Err(Error::Invalid(format!(
                "ansatz takes {} parameters, got {}",
                self.num_parameters(),
                params.len()
            )));
        }
        let n = self.qubits;
        let pairs = self.entanglement.pairs(n);
        let mut c = Circuit::named(n, format!("real-amplitudes-{n}x{}", self.reps));
        for (layer, chunk) in params.chunks(n).enumerate() {
            if layer > 0 {
                for &(a, b) in &pairs {
                    c.push(Gate::cnot(a, b))?;
                }
            }
            for (q, &theta) in chunk.iter().enumerate() {
                c.push(Gate::ry(theta, q))?;
            }
        }
        Ok(c)
    }
}

//! Weighted sums of Pauli strings.

use crate::error::{Error, Result};
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn from_char(c: char) -> Option<Self> {
        match c.to_ascii_uppercase() {
            'I' => Some(Pauli::I),
            'X' => Some(Pauli::X),
            'Y' => Some(Pauli::Y),
            'Z' => Some(Pauli::Z),
            _ => None,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

/// Tensor product of single-qubit Paulis; letter `k` acts on qubit `k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PauliString(Vec<Pauli>);

impl PauliString {
    pub fn new(letters: Vec<Pauli>) -> Self {
        Self(letters)
    }

    pub fn identity(width: usize) -> Self {
        Self(vec![Pauli::I; width])
    }

    /// `Z` on each listed qubit, identity elsewhere.
    pub fn z_on(width: usize, qubits: &[usize]) -> Self {
        let mut s = Self::identity(width);
        for &q in qubits {
            s.0[q] = Pauli::Z;
        }
        s
    }

    pub fn width(&self) -> usize {
        self.0.len()
    }

    pub fn letters(&self) -> &[Pauli] {
        &self.0
    }

    pub fn is_diagonal(&self) -> bool {
        self.0.iter().all(|p| matches!(p, Pauli::I | Pauli::Z))
    }

    /// Bit mask of qubits carrying a `Z`.
    pub fn z_mask(&self) -> usize {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, p)| **p == Pauli::Z)
            .fold(0, |m, (k, _)| m | (1 << k))
    }

    /// Bit mask of qubits carrying `X` or `Y` (the bit-flip part).
    pub fn flip_mask(&self) -> usize {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, p)| matches!(p, Pauli::X | Pauli::Y))
            .fold(0, |m, (k, _)| m | (1 << k))
    }

    /// Eigenvalue of a diagonal string on a basis state.
    pub fn diagonal_sign(&self, basis: usize) -> f64 {
        if (basis & self.z_mask()).count_ones().is_multiple_of(2) {
            1.0
        } else {
            -1.0
        }
    }
}

impl FromStr for PauliString {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| Pauli::from_char(c).ok_or_else(|| Error::Invalid(format!("bad Pauli letter `{c}`"))))
            .collect::<Result<Vec<_>>>()
            .map(PauliString)
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.iter().try_for_each(|p| write!(f, "{}", p.as_char()))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PauliObservable {
    width: usize,
    terms: Vec<(f64, PauliString)>,
}

impl PauliObservable {
    pub fn new(width: usize) -> Self {
        Self { width, terms: Vec::new() }
    }

    pub fn from_terms(width: usize, terms: impl IntoIterator<Item = (f64, PauliString)>) -> Result<Self> {
        let mut obs = Self::new(width);
        for (c, p) in terms {
            obs.add_term(c, p)?;
        }
        Ok(obs)
    }

    pub fn add_term(&mut self, coefficient: f64, pauli: PauliString) -> Result<()> {
        if pauli.width() != self.width {
            return Err(Error::ObservableWidth { expected: self.width, found: pauli.width() });
        }
        self.terms.push((coefficient, pauli));
        Ok(())
    }

    pub fn with_term(mut self, coefficient: f64, pauli: &str) -> Result<Self> {
        self.add_term(coefficient, pauli.parse()?)?;
        Ok(self)
    }

    /// Single `Z` on `qubit`.
    pub fn z(width: usize, qubit: usize) -> Self {
        Self { width, terms: vec![(1.0, PauliString::z_on(width, &[qubit]))] }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn terms(&self) -> &[(f64, PauliString)] {
        &self.terms
    }

    pub fn is_diagonal(&self) -> bool {
        self.terms.iter().all(|(_, p)| p.is_diagonal())
    }

    pub fn check_width(&self, width: usize) -> Result<()> {
        if self.width == width {
            Ok(())
        } else {
            Err(Error::ObservableWidth { expected: width, found: self.width })
        }
    }

    /// Value of a diagonal observable on a computational basis state.
    pub fn diagonal_value(&self, basis: usize) -> f64 {
        self.terms.iter().map(|(c, p)| c * p.diagonal_sign(basis)).sum()
    }

    /// Diagonal terms as `(coefficient, z_mask)` pairs.
    pub fn z_terms(&self) -> Result<Vec<(f64, usize)>> {
        self.terms
            .iter()
            .map(|(c, p)| if p.is_diagonal() { Ok((*c, p.z_mask())) } else { Err(Error::NonDiagonalObservable) })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display() {
        let p: PauliString = "IZxY".parse().unwrap();
        assert_eq!(p.to_string(), "IZXY");
        assert_eq!(p.z_mask(), 0b0010);
        assert_eq!(p.flip_mask(), 0b1100);
        assert!("IQ".parse::<PauliString>().is_err());
    }

    #[test]
    fn width_mismatch_rejected() {
        let err = PauliObservable::new(3).with_term(1.0, "ZZ").unwrap_err();
        assert_eq!(err, Error::ObservableWidth { expected: 3, found: 2 });
    }

    #[test]
    fn diagonal_value_of_zz() {
        let obs = PauliObservable::new(2).with_term(0.5, "II").unwrap().with_term(-0.5, "ZZ").unwrap();
        assert_eq!(obs.diagonal_value(0b00), 0.0);
        assert_eq!(obs.diagonal_value(0b01), 1.0);
    }
}

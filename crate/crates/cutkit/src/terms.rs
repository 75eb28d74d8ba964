//! Expansion of the single-wire identity channel into measure/prepare pairs.
//!
//! `ρ = ½ Σ_{M∈{I,X,Y,Z}} Tr(Mρ) M`. The I term is read from Z outcomes, and
//! the |−⟩ and |−i⟩ projectors are rewritten as `I − |+⟩⟨+|` so that only
//! four preparations are needed.

use vdcut_core::Gate;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MeasureBasis {
    X,
    Y,
    Z,
}

impl MeasureBasis {
    pub const ALL: [MeasureBasis; 3] = [MeasureBasis::X, MeasureBasis::Y, MeasureBasis::Z];

    pub fn index(self) -> usize {
        self as usize
    }

    /// Gates rotating the basis eigenstates onto |0⟩ (+1) and |1⟩ (−1).
    pub fn rotation(self, qubit: usize) -> Vec<Gate> {
        match self {
            MeasureBasis::X => vec![Gate::h(qubit)],
            MeasureBasis::Y => vec![Gate::rz(-std::f64::consts::FRAC_PI_2, qubit), Gate::h(qubit)],
            MeasureBasis::Z => Vec::new(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PrepState {
    Zero,
    One,
    Plus,
    PlusI,
}

impl PrepState {
    pub const ALL: [PrepState; 4] = [PrepState::Zero, PrepState::One, PrepState::Plus, PrepState::PlusI];

    pub fn index(self) -> usize {
        self as usize
    }

    /// Gates preparing the state from |0⟩ (up to global phase).
    pub fn preparation(self, qubit: usize) -> Vec<Gate> {
        match self {
            PrepState::Zero => Vec::new(),
            PrepState::One => vec![Gate::x(qubit)],
            PrepState::Plus => vec![Gate::h(qubit)],
            PrepState::PlusI => vec![Gate::h(qubit), Gate::rz(std::f64::consts::FRAC_PI_2, qubit)],
        }
    }
}

/// One product term: measure in `basis`, condition on `outcome` (0 is the +1
/// eigenvalue), prepare `prep`, weight `half_units / 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Term {
    pub basis: MeasureBasis,
    pub outcome: u8,
    pub prep: PrepState,
    pub half_units: i8,
}

impl Term {
    pub fn coefficient(&self) -> f64 {
        f64::from(self.half_units) / 2.0
    }
}

const fn term(basis: MeasureBasis, outcome: u8, prep: PrepState, half_units: i8) -> Term {
    Term { basis, outcome, prep, half_units }
}

pub const TERMS: [Term; 14] = {
    use MeasureBasis::{X, Y, Z};
    use PrepState::{One, Plus, PlusI, Zero};
    [
        term(Z, 0, Zero, 2),
        term(Z, 1, One, 2),
        term(X, 0, Plus, 2),
        term(X, 0, Zero, -1),
        term(X, 0, One, -1),
        term(X, 1, Plus, -2),
        term(X, 1, Zero, 1),
        term(X, 1, One, 1),
        term(Y, 0, PlusI, 2),
        term(Y, 0, Zero, -1),
        term(Y, 0, One, -1),
        term(Y, 1, PlusI, -2),
        term(Y, 1, Zero, 1),
        term(Y, 1, One, 1),
    ]
};

#[cfg(test)]
mod tests {
    use super::*;
    use vdcut_core::linalg::{circuit_unitary, CMatrix, C64};
    use vdcut_core::Circuit;

    fn state(prep: PrepState) -> CMatrix {
        let u = circuit_unitary(&Circuit::from_gates(1, prep.preparation(0)).unwrap());
        let psi = [u[(0, 0)], u[(1, 0)]];
        let mut m = CMatrix::zeros(2);
        for r in 0..2 {
            for c in 0..2 {
                m[(r, c)] = psi[r] * psi[c].conj();
            }
        }
        m
    }

    fn outcome_probability(rho: &CMatrix, basis: MeasureBasis, outcome: u8) -> f64 {
        let u = circuit_unitary(&Circuit::from_gates(1, basis.rotation(0)).unwrap());
        let out = &(&u * rho) * &u.adjoint();
        out[(outcome as usize, outcome as usize)].re
    }

    #[test]
    fn terms_reproduce_identity_channel() {
        let rhos = [
            CMatrix::from_rows([
                [C64::new(0.7, 0.0), C64::new(0.1, -0.3)],
                [C64::new(0.1, 0.3), C64::new(0.3, 0.0)],
            ]),
            state(PrepState::PlusI),
            state(PrepState::One),
        ];
        for rho in rhos {
            let mut acc = CMatrix::zeros(2);
            for t in TERMS {
                let w = t.coefficient() * outcome_probability(&rho, t.basis, t.outcome);
                let sigma = state(t.prep);
                for r in 0..2 {
                    for c in 0..2 {
                        acc[(r, c)] += sigma[(r, c)] * w;
                    }
                }
            }
            assert!(acc.max_abs_diff(&rho) < 1e-14);
        }
    }

    #[test]
    fn three_bases_and_four_preparations() {
        let bases: std::collections::BTreeSet<_> = TERMS.iter().map(|t| t.basis).collect();
        let preps: std::collections::BTreeSet<_> = TERMS.iter().map(|t| t.prep).collect();
        assert_eq!((bases.len(), preps.len()), (3, 4));
    }
}

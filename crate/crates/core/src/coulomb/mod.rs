//! Hydrogenlike atom in the noncommuting-operator model.
//!
//! Units: lengths in reduced Compton wavelengths `hbar/(mu c)`, energies in
//! `mu c^2`, forces in `F0 = (mu c^2)^2 / (hbar c)`. In these units the Coulomb
//! force is `alphaZ / r^2`, and the bound-state wavefunctions are the
//! Schrödinger ones with the Bohr length `1/alphaZ` stretched by `eta^2`,
//! where `eta = 1 - epsilon`.

mod density;
mod eta;
mod hypergeometric;
mod wavefunction;

use crate::error::{Error, Result};
use crate::scalar::Real;

pub use density::epsilon_from_density;
pub use eta::{
    critical_coupling, rhs_epsilon, rhs_eta, solution_exists, solve_eta, Branch, EtaEquation, EtaSolution,
    SolverOptions, FIXED_POINT_TOLERANCE,
};
pub use hypergeometric::{
    confluent_hypergeometric_coefficients, confluent_hypergeometric_poly, snl_factor, snl_factor_exact,
    HypergeometricPoly,
};
pub use wavefunction::{radial_chi, RadialState};

/// Principal and orbital quantum numbers of one bound state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuantumNumbers {
    n: u32,
    l: u32,
}

impl QuantumNumbers {
    pub fn new(n: u32, l: u32) -> Result<Self> {
        if n == 0 || l >= n {
            return Err(Error::InvalidQuantumNumbers { n, l });
        }
        Ok(Self { n, l })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn l(&self) -> u32 {
        self.l
    }

    /// Number of interior nodes of the radial function, `n - l - 1`.
    pub fn radial_nodes(&self) -> u32 {
        self.n - self.l - 1
    }

    /// The states 1S, 2S, 2P.
    pub fn lowest_three() -> [Self; 3] {
        [Self { n: 1, l: 0 }, Self { n: 2, l: 0 }, Self { n: 2, l: 1 }]
    }
}

impl std::fmt::Display for QuantumNumbers {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        const LETTERS: &[u8] = b"SPDFGHIK";
        match LETTERS.get(self.l as usize) {
            Some(&c) => write!(f, "{}{}", self.n, c as char),
            None => write!(f, "({}, {})", self.n, self.l),
        }
    }
}

/// Dimensionless interaction constant `alphaZ`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Coupling<T>(T);

impl<T: Real> Coupling<T> {
    pub fn new(alpha_z: T) -> Result<Self> {
        if !(alpha_z > T::zero()) || !alpha_z.is_finite() {
            return Err(Error::InvalidCoupling(alpha_z.as_f64()));
        }
        Ok(Self(alpha_z))
    }

    pub fn value(&self) -> T {
        self.0
    }
}

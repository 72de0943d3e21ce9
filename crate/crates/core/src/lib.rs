//! Bound states of a two-particle system whose coordinate and momentum
//! operators fail to commute across particles, by an amount set by the
//! interaction force.
//!
//! The Coulomb case reduces to a scalar equation for `eta = 1 - epsilon`
//! ([`coulomb`]); [`spectrum`] turns its solution into energies and radii and
//! compares them with the Schrödinger and Klein-Gordon spectra; [`oracle`]
//! solves the same self-consistent problem by shooting for an arbitrary
//! central potential.
//!
//! Everything is generic over [`Real`]; the aliases below fix `f64`.
//!
//! ```
//! use noncomm::coulomb::{Coupling, QuantumNumbers};
//!
//! let qn = QuantumNumbers::new(1, 0).unwrap();
//! let level = noncomm::spectrum::solve_level(qn, Coupling::new(0.3).unwrap(), &Default::default()).unwrap();
//! assert!(level.energy_model < level.energy_schrodinger);
//! ```

// `!(a < b)` is used deliberately so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod coulomb;
pub mod error;
pub mod numerics;
pub mod oracle;
pub mod scalar;
pub mod spectrum;

pub use error::{Error, Result};
pub use scalar::Real;

pub type Coupling = coulomb::Coupling<f64>;
pub type EtaSolution = coulomb::EtaSolution<f64>;
pub type SolverOptions = coulomb::SolverOptions<f64>;
pub type QuadratureSpec = numerics::QuadratureSpec<f64>;
pub type RadialGrid = numerics::RadialGrid<f64>;
pub type LevelResult = spectrum::LevelResult<f64>;
pub type MassPair = spectrum::MassPair<f64>;
pub type CommutatorTable = spectrum::CommutatorTable<f64>;
pub type AngularCoefficients = spectrum::AngularCoefficients<f64>;
pub type PotentialSpec = oracle::PotentialSpec<f64>;
pub type NumericEigenstate = oracle::NumericEigenstate<f64>;
pub type SelfConsistentResult = oracle::SelfConsistentResult<f64>;
pub type IterationOptions = oracle::IterationOptions<f64>;

pub use coulomb::QuantumNumbers;

//! Per-level observables and comparison with the Schrödinger and
//! Klein-Gordon spectra. Energies are in units of `mu c^2`, lengths in
//! `hbar / (mu c)`.

use crate::coulomb::{solve_eta, Coupling, QuantumNumbers, RadialState, SolverOptions};
use crate::error::{Error, Result};
use crate::numerics::integrate_semi_infinite;
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq)]
pub struct LevelResult<T> {
    pub qn: QuantumNumbers,
    pub coupling: Coupling<T>,
    pub epsilon: T,
    pub eta: T,
    pub energy_model: T,
    pub energy_schrodinger: T,
    /// Absent beyond the Klein-Gordon critical coupling `alphaZ > l + 1/2`.
    pub energy_klein_gordon: Option<T>,
    pub mean_radius: T,
    pub root_count: usize,
    pub residual: T,
}

fn check_epsilon<T: Real>(epsilon: T, allow_one: bool) -> Result<()> {
    let upper_ok = if allow_one {
        epsilon <= T::one()
    } else {
        epsilon < T::one()
    };
    if epsilon >= T::zero() && upper_ok {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("epsilon out of range: {epsilon}")))
    }
}

/// Schrödinger level `-(alphaZ)^2 / (2 n^2)`.
pub fn energy_schrodinger<T: Real>(qn: QuantumNumbers, c: Coupling<T>) -> T {
    let az = c.value();
    let n = T::from_u32(qn.n()).unwrap();
    -az * az / (T::lit(2.0) * n * n)
}

/// Model level: the Schrödinger level divided by `(1 - epsilon)^2`.
pub fn energy_model<T: Real>(qn: QuantumNumbers, c: Coupling<T>, epsilon: T) -> Result<T> {
    check_epsilon(epsilon, false)?;
    let eta = T::one() - epsilon;
    Ok(energy_schrodinger(qn, c) / (eta * eta))
}

/// Spinless Klein-Gordon level of a particle of mass `mu` in a Coulomb field.
pub fn energy_klein_gordon<T: Real>(qn: QuantumNumbers, c: Coupling<T>) -> Result<T> {
    let az = c.value();
    let half = T::lit(0.5);
    let l = T::from_u32(qn.l()).unwrap();
    let n = T::from_u32(qn.n()).unwrap();
    let disc = (l + half) * (l + half) - az * az;
    if disc < T::zero() {
        return Err(Error::BeyondCriticalCoupling {
            n: qn.n(),
            l: qn.l(),
            alpha_z: az.as_f64(),
        });
    }
    let d = n - l - half + disc.sqrt();
    Ok(-T::one() + (T::one() + az * az / (d * d)).sqrt().recip())
}

/// `<r> = ∫ r chi(r)^2 dr` over the analytic density, by quadrature.
pub fn mean_radius<T: Real>(qn: QuantumNumbers, c: Coupling<T>, eta: T, opts: &SolverOptions<T>) -> Result<T> {
    let state = RadialState::new(qn, c, eta)?;
    integrate_semi_infinite(|r| r * state.chi(r).powi(2), &opts.quadrature)
}

/// Solves the self-consistency equation and fills every per-level observable.
pub fn solve_level<T: Real>(qn: QuantumNumbers, c: Coupling<T>, opts: &SolverOptions<T>) -> Result<LevelResult<T>> {
    let sol = solve_eta(qn, c, opts)?;
    let energy_klein_gordon = match energy_klein_gordon(qn, c) {
        Ok(e) => Some(e),
        Err(Error::BeyondCriticalCoupling { .. }) => None,
        Err(e) => return Err(e),
    };
    Ok(LevelResult {
        qn,
        coupling: c,
        epsilon: sol.epsilon,
        eta: sol.eta,
        energy_model: energy_model(qn, c, sol.epsilon)?,
        energy_schrodinger: energy_schrodinger(qn, c),
        energy_klein_gordon,
        mean_radius: mean_radius(qn, c, sol.eta, opts)?,
        root_count: sol.root_count,
        residual: sol.residual,
    })
}

/// Lowest model level among `candidates` that exists at coupling `c`.
pub fn ground_state<T: Real>(
    c: Coupling<T>,
    candidates: &[QuantumNumbers],
    opts: &SolverOptions<T>,
) -> Result<Option<QuantumNumbers>> {
    let mut best: Option<(QuantumNumbers, T)> = None;
    for &qn in candidates {
        let eps = match solve_eta(qn, c, opts) {
            Ok(s) => s.epsilon,
            Err(Error::NoBoundState { .. }) => continue,
            Err(e) => return Err(e),
        };
        let e = energy_model(qn, c, eps)?;
        if best.is_none_or(|(_, b)| e < b) {
            best = Some((qn, e));
        }
    }
    Ok(best.map(|(qn, _)| qn))
}

/// Masses of the two particles, in any common unit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MassPair<T> {
    m1: T,
    m2: T,
}

impl<T: Real> MassPair<T> {
    pub fn new(m1: T, m2: T) -> Result<Self> {
        let ok = |m: T| m > T::zero() && m.is_finite();
        if !ok(m1) || !ok(m2) {
            return Err(Error::InvalidMasses {
                m1: m1.as_f64(),
                m2: m2.as_f64(),
            });
        }
        Ok(Self { m1, m2 })
    }

    pub fn m1(&self) -> T {
        self.m1
    }

    pub fn m2(&self) -> T {
        self.m2
    }

    pub fn total(&self) -> T {
        self.m1 + self.m2
    }

    pub fn reduced(&self) -> T {
        self.m1 * self.m2 / self.total()
    }

    /// `(m1 / M, m2 / M)`.
    pub fn fractions(&self) -> (T, T) {
        let m = self.total();
        (self.m1 / m, self.m2 / m)
    }
}

/// Quantum Poisson brackets (commutators divided by `i hbar`) of the
/// coordinates and momenta of the two particles, x components.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CommutatorTable<T> {
    pub x1p1: T,
    pub x2p2: T,
    pub x1p2: T,
    pub x2p1: T,
    pub x1x2: T,
    pub p1p2: T,
}

pub fn commutator_table<T: Real>(masses: MassPair<T>, epsilon: T) -> Result<CommutatorTable<T>> {
    check_epsilon(epsilon, true)?;
    let (f1, f2) = masses.fractions();
    Ok(CommutatorTable {
        x1p1: T::one() - f2 * epsilon,
        x2p2: T::one() - f1 * epsilon,
        x1p2: f2 * epsilon,
        x2p1: f1 * epsilon,
        x1x2: T::zero(),
        p1p2: T::zero(),
    })
}

/// Coefficients `C_kn` of `L = sum C_kn [r_k x p_n]` reproducing the total
/// angular momentum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngularCoefficients<T> {
    pub c11: T,
    pub c12: T,
    pub c21: T,
    pub c22: T,
}

pub fn angular_coefficients<T: Real>(masses: MassPair<T>, epsilon: T) -> Result<AngularCoefficients<T>> {
    if epsilon == T::one() {
        return Err(Error::DegenerateEpsilon);
    }
    check_epsilon(epsilon, false)?;
    let (f1, f2) = masses.fractions();
    let inv = (T::one() - epsilon).recip();
    Ok(AngularCoefficients {
        c11: (T::one() - f1 * epsilon) * inv,
        c12: -f1 * epsilon * inv,
        c21: -f2 * epsilon * inv,
        c22: (T::one() - f2 * epsilon) * inv,
    })
}

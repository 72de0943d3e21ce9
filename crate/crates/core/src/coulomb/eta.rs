//! The nonlinear equation `eta = g(eta)` that fixes the noncommutativity
//! parameter of a hydrogenlike state, its root structure, and the critical
//! coupling beyond which it has no solution.

use std::cell::Cell;

use super::{snl_factor, Coupling, HypergeometricPoly, QuantumNumbers};
use crate::error::{Error, Result};
use crate::numerics::roots::{roots_from_scan, scan};
use crate::numerics::{
    bisect_predicate_bracket, integrate_semi_infinite, maximize_on_interval, Bracket, QuadratureSpec,
};
use crate::scalar::Real;

/// Largest accepted `|g(eta) - eta|` for a solution.
pub const FIXED_POINT_TOLERANCE: f64 = 1e-10;

/// Numerical knobs of the eta solver.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions<T> {
    pub quadrature: QuadratureSpec<T>,
    /// Bracket width at which a root of `g(eta) - eta` is accepted.
    pub root_tolerance: T,
    /// Uniform scan points over `[eta_min, 1]`.
    pub scan_points: usize,
    pub eta_min: T,
    /// Roots closer than this are reported as a tangency.
    pub tangency_tolerance: T,
    /// Resolution of the critical coupling search.
    pub critical_tolerance: T,
}

impl<T: Real> Default for SolverOptions<T> {
    fn default() -> Self {
        Self {
            quadrature: QuadratureSpec::default(),
            root_tolerance: T::tol(1e-12),
            scan_points: 512,
            eta_min: T::lit(0.01),
            tangency_tolerance: T::tol(1e-6),
            critical_tolerance: T::tol(1e-7),
        }
    }
}

impl<T: Real> SolverOptions<T> {
    pub fn validate(&self) -> Result<()> {
        let positive = |x: T| x > T::zero() && x.is_finite();
        if !positive(self.root_tolerance) || !positive(self.tangency_tolerance) || !positive(self.critical_tolerance) {
            return Err(Error::InvalidArgument("solver tolerances must be positive".into()));
        }
        if self.scan_points < 8 {
            return Err(Error::InvalidArgument(format!(
                "need at least 8 scan points, got {}",
                self.scan_points
            )));
        }
        if !(self.eta_min > T::zero() && self.eta_min < T::one()) {
            return Err(Error::InvalidArgument(format!(
                "eta_min must lie in (0, 1), got {}",
                self.eta_min
            )));
        }
        Ok(())
    }
}

/// Which root of the equation was selected.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// The root closest to 1; the lower one is unphysical.
    UpperRoot,
    /// The two roots merge (critical configuration).
    Tangent,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EtaSolution<T> {
    pub eta: T,
    pub epsilon: T,
    /// `|g(eta) - eta|` at the returned root.
    pub residual: T,
    /// Roots found on `[eta_min, 1]`.
    pub root_count: usize,
    pub branch: Branch,
    /// All roots found, ascending.
    pub roots: Vec<T>,
}

impl<T: Real> EtaSolution<T> {
    fn new(eta: T, residual: T, roots: Vec<T>, branch: Branch) -> Self {
        Self {
            eta,
            epsilon: T::one() - eta,
            residual,
            root_count: roots.len(),
            branch,
            roots,
        }
    }
}

/// Right-hand side of the self-consistency equation for one state, with the
/// hypergeometric polynomial and `S_nl` precomputed.
///
/// With `c = 4 (alphaZ)^3 / (n^2 eta^4)`,
/// `g(eta) = S_nl ∫ x^(2l+2) e^-x F(x)^2 / (1 + c / x^2) dx`.
/// The complement `1 - g = S_nl ∫ x^(2l+2) e^-x F(x)^2 c / (x^2 + c) dx` is the
/// noncommutativity parameter implied by the density; it is integrated
/// directly so that tiny couplings keep full relative precision.
#[derive(Debug, Clone)]
pub struct EtaEquation<T> {
    qn: QuantumNumbers,
    coupling: Coupling<T>,
    snl: T,
    poly: HypergeometricPoly<T>,
    quadrature: QuadratureSpec<T>,
}

impl<T: Real> EtaEquation<T> {
    pub fn new(qn: QuantumNumbers, coupling: Coupling<T>, quadrature: QuadratureSpec<T>) -> Self {
        Self {
            qn,
            coupling,
            snl: snl_factor(qn),
            poly: HypergeometricPoly::for_state(qn),
            quadrature,
        }
    }

    pub fn quantum_numbers(&self) -> QuantumNumbers {
        self.qn
    }

    pub fn coupling(&self) -> Coupling<T> {
        self.coupling
    }

    /// Force-to-scale ratio coefficient `c`: `F/F0 = c / x^2`.
    pub fn force_coefficient(&self, eta: T) -> T {
        let az = self.coupling.value();
        let n = T::from_u32(self.qn.n()).unwrap();
        T::lit(4.0) * az * az * az / (n * n * eta.powi(4))
    }

    fn check_eta(eta: T) -> Result<()> {
        if eta > T::zero() && eta <= T::one() {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!("eta must lie in (0, 1], got {eta}")))
        }
    }

    /// `1 - g(eta)`.
    pub fn epsilon_of(&self, eta: T) -> Result<T> {
        Self::check_eta(eta)?;
        let c = self.force_coefficient(eta);
        let power = 2 * self.qn.l() as i32 + 2;
        let integral = integrate_semi_infinite(
            |x: T| {
                let f = self.poly.eval(x);
                x.powi(power) * (-x).exp() * f * f * (c / (x * x + c))
            },
            &self.quadrature,
        )?;
        Ok(self.snl * integral)
    }

    /// `g(eta)`.
    pub fn rhs(&self, eta: T) -> Result<T> {
        Ok(T::one() - self.epsilon_of(eta)?)
    }

    /// `g(eta) - eta`, evaluated as `(1 - eta) - (1 - g(eta))`.
    pub fn residual(&self, eta: T) -> Result<T> {
        Ok((T::one() - eta) - self.epsilon_of(eta)?)
    }

    /// Scans the residual and returns the largest `max_eta (g(eta) - eta)` and
    /// where it is attained; stops early on the first nonnegative sample when
    /// `early_exit` is set.
    fn maximum(&self, opts: &SolverOptions<T>, early_exit: bool) -> Result<(T, T)> {
        let n = opts.scan_points;
        let last = T::from_count(n - 1);
        let lo = opts.eta_min;
        let hi = T::one();
        let x_at = |i: usize| {
            if i + 1 == n {
                hi
            } else {
                lo + (hi - lo) * T::from_count(i) / last
            }
        };
        let mut best = (0usize, T::neg_infinity());
        // Scan from eta = 1 down: the upper root sits near 1 at weak coupling.
        for i in (0..n).rev() {
            let h = self.residual(x_at(i))?;
            if h > best.1 {
                best = (i, h);
            }
            if early_exit && h >= T::zero() {
                return Ok((x_at(i), h));
            }
        }
        let (i, h) = best;
        let a = x_at(i.saturating_sub(1));
        let b = x_at((i + 1).min(n - 1));
        let failure = Cell::new(None);
        let (x, hx) = maximize_on_interval(|x| self.guarded(x, &failure), a, b, T::tol(1e-10));
        if let Some(e) = failure.take() {
            return Err(e);
        }
        Ok(if hx >= h { (x, hx) } else { (x_at(i), h) })
    }

    fn guarded(&self, eta: T, failure: &Cell<Option<Error>>) -> T {
        match self.residual(eta) {
            Ok(v) => v,
            Err(e) => {
                failure.set(Some(e));
                T::nan()
            }
        }
    }
}

/// `g(eta)` for state `qn` at coupling `c`.
pub fn rhs_eta<T: Real>(eta: T, qn: QuantumNumbers, c: Coupling<T>, spec: &QuadratureSpec<T>) -> Result<T> {
    EtaEquation::new(qn, c, *spec).rhs(eta)
}

/// `1 - g(eta)`.
pub fn rhs_epsilon<T: Real>(eta: T, qn: QuantumNumbers, c: Coupling<T>, spec: &QuadratureSpec<T>) -> Result<T> {
    EtaEquation::new(qn, c, *spec).epsilon_of(eta)
}

/// Solves `eta = g(eta)` and selects the physical (largest) root.
pub fn solve_eta<T: Real>(qn: QuantumNumbers, c: Coupling<T>, opts: &SolverOptions<T>) -> Result<EtaSolution<T>> {
    opts.validate()?;
    let eq = EtaEquation::new(qn, c, opts.quadrature);
    let failure = Cell::new(None);
    let h = |x: T| eq.guarded(x, &failure);

    let samples = scan(&h, opts.eta_min, T::one(), opts.scan_points);
    let roots = roots_from_scan(&h, &samples, opts.root_tolerance);
    if let Some(e) = failure.take() {
        return Err(e);
    }
    let no_state = || Error::NoBoundState {
        n: qn.n(),
        l: qn.l(),
        alpha_z: c.value().as_f64(),
    };

    if !roots.is_empty() {
        let xs: Vec<T> = roots.iter().map(|r| r.x).collect();
        let upper = roots[roots.len() - 1];
        let branch = if xs.len() >= 2 && upper.x - xs[xs.len() - 2] < opts.tangency_tolerance {
            Branch::Tangent
        } else {
            Branch::UpperRoot
        };
        return Ok(EtaSolution::new(upper.x, upper.residual, xs, branch));
    }

    // No sign change on the scan: the two roots may be closer than the scan
    // step, or merged into a tangency, or absent.
    let (x_max, h_max) = eq.maximum(opts, false)?;
    let tangent_floor = -T::tol(FIXED_POINT_TOLERANCE);
    if h_max > T::zero() {
        let step = (T::one() - opts.eta_min) / T::from_count(opts.scan_points - 1);
        let lo = (x_max - step).max(opts.eta_min);
        let hi = (x_max + step).min(T::one());
        let left = Bracket::new(lo, x_max, h(lo), h_max)?;
        let right = Bracket::new(x_max, hi, h_max, h(hi))?;
        let r_lo = crate::numerics::refine_bracket(&h, left, opts.root_tolerance);
        let r_hi = crate::numerics::refine_bracket(&h, right, opts.root_tolerance);
        if let Some(e) = failure.take() {
            return Err(e);
        }
        let branch = if r_hi.x - r_lo.x < opts.tangency_tolerance {
            Branch::Tangent
        } else {
            Branch::UpperRoot
        };
        Ok(EtaSolution::new(r_hi.x, r_hi.residual, vec![r_lo.x, r_hi.x], branch))
    } else if h_max >= tangent_floor {
        Ok(EtaSolution::new(x_max, h_max.abs(), vec![x_max], Branch::Tangent))
    } else {
        Err(no_state())
    }
}

/// Whether `eta = g(eta)` has a root: `max_eta (g(eta) - eta) >= 0`.
pub fn solution_exists<T: Real>(qn: QuantumNumbers, c: Coupling<T>, opts: &SolverOptions<T>) -> Result<bool> {
    let eq = EtaEquation::new(qn, c, opts.quadrature);
    Ok(eq.maximum(opts, true)?.1 >= T::zero())
}

/// Largest coupling for which the state exists, to within
/// `opts.critical_tolerance`. The returned value always satisfies the
/// existence predicate.
pub fn critical_coupling<T: Real>(qn: QuantumNumbers, opts: &SolverOptions<T>) -> Result<Coupling<T>> {
    opts.validate()?;
    let failure = Cell::new(None);
    let exists = |az: T| match Coupling::new(az).and_then(|c| solution_exists(qn, c, opts)) {
        Ok(b) => b,
        Err(e) => {
            failure.set(Some(e));
            false
        }
    };
    let lo = T::lit(1e-3);
    let mut hi = T::one();
    let mut tries = 0;
    while exists(hi) {
        hi = hi + hi;
        tries += 1;
        if tries > 16 {
            return Err(Error::InvalidArgument(format!(
                "state {qn} exists at every coupling probed"
            )));
        }
    }
    if let Some(e) = failure.take() {
        return Err(e);
    }
    let bracket = bisect_predicate_bracket(exists, lo, hi, opts.critical_tolerance)?;
    if let Some(e) = failure.take() {
        return Err(e);
    }
    Coupling::new(bracket.true_side())
}

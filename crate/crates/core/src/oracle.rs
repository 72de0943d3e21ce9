//! Grid-based verification path: a Numerov shooting eigensolver for the
//! radial equation with the kinetic term scaled by `eta^2`, and the damped
//! fixed-point loop that makes `epsilon` consistent with the eigenstate it
//! produces. Works for any central potential, not just Coulomb.

use std::cell::RefCell;
use std::fmt;
use std::sync::Arc;

use crate::coulomb::{epsilon_from_density, Coupling, QuantumNumbers};
use crate::error::{Error, Result};
pub use crate::numerics::RadialGrid;
use crate::numerics::{refine_bracket, Bracket};
use crate::scalar::Real;

type RadialFn<T> = Arc<dyn Fn(T) -> T + Send + Sync>;

/// A central potential `V(r)` (in `mu c^2`) and its force magnitude `|dV/dr|`
/// (in `F0` units).
#[derive(Clone)]
pub struct PotentialSpec<T> {
    potential: RadialFn<T>,
    force_magnitude: RadialFn<T>,
}

impl<T: Real> PotentialSpec<T> {
    pub fn new<V, F>(potential: V, force_magnitude: F) -> Self
    where
        V: Fn(T) -> T + Send + Sync + 'static,
        F: Fn(T) -> T + Send + Sync + 'static,
    {
        Self {
            potential: Arc::new(potential),
            force_magnitude: Arc::new(force_magnitude),
        }
    }

    /// `V = -alphaZ / r`, `|F| = alphaZ / r^2`.
    pub fn coulomb(c: Coupling<T>) -> Self {
        let az = c.value();
        Self::new(move |r: T| -az / r, move |r: T| az / (r * r))
    }

    pub fn potential(&self, r: T) -> T {
        (self.potential)(r)
    }

    pub fn force_magnitude(&self, r: T) -> T {
        (self.force_magnitude)(r)
    }
}

impl<T> fmt::Debug for PotentialSpec<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("PotentialSpec { .. }")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NumericEigenstate<T> {
    pub qn: QuantumNumbers,
    pub grid: RadialGrid<T>,
    /// Normalized so that `sum chi_i^2 * spacing = 1`.
    pub chi: Vec<T>,
    pub eigenvalue: T,
    pub node_count: u32,
}

impl<T: Real> NumericEigenstate<T> {
    pub fn density(&self) -> Vec<T> {
        self.chi.iter().map(|&x| x * x).collect()
    }

    pub fn norm(&self) -> T {
        self.chi.iter().fold(T::zero(), |s, &x| s + x * x) * self.grid.spacing()
    }
}

/// Grid for state `qn`: `r_min = 1e-6`, `r_max = 50 n^2 eta^2 / alphaZ`, and
/// 200 points per Bohr length `eta^2 / alphaZ` (the inner structure of every
/// shell lives on that scale, not on the decay length `n eta^2 / alphaZ`).
pub fn default_grid<T: Real>(qn: QuantumNumbers, c: Coupling<T>, eta: T) -> Result<RadialGrid<T>> {
    if !(eta > T::zero() && eta <= T::one()) {
        return Err(Error::InvalidArgument(format!("eta must lie in (0, 1], got {eta}")));
    }
    let n = T::from_u32(qn.n()).unwrap();
    let bohr = eta * eta / c.value();
    let r_min = T::lit(1e-6);
    let r_max = T::lit(50.0) * n * n * bohr;
    let spacing = bohr / T::lit(200.0);
    let intervals = ((r_max - r_min) / spacing).ceil().to_usize().unwrap_or(usize::MAX);
    RadialGrid::new(r_min, r_max, (intervals + 1).max(RadialGrid::<T>::MIN_POINTS))
}

const RESCALE_ABOVE: f64 = 1e100;
/// Numerov steps keep their sign structure while `h^2 k / 12` stays below this.
const STABLE_STEP: f64 = 0.2;
/// Start the recurrence once the centrifugal `h^2 k / 12` drops below this.
const START_STEP: f64 = 0.05;
const TAIL_THRESHOLD: f64 = 1e-6;

struct Shooter<'a, T> {
    grid: &'a RadialGrid<T>,
    l: u32,
    eta2: T,
    /// `l(l+1)/r^2 + 2 V / eta^2`, so that `chi'' = (q - 2E/eta^2) chi`.
    q: Vec<T>,
    h2_12: T,
    start: usize,
    coulomb_strength: T,
    v_eff_min: T,
    v_eff_max: T,
}

impl<'a, T: Real> Shooter<'a, T> {
    fn new(grid: &'a RadialGrid<T>, pot: &PotentialSpec<T>, l: u32, eta: T) -> Self {
        let eta2 = eta * eta;
        let h = grid.spacing();
        let h2_12 = h * h / T::lit(12.0);
        let ll = T::from_u32(l * (l + 1)).unwrap();
        let two = T::lit(2.0);
        let q: Vec<T> = grid
            .radii()
            .map(|r| ll / (r * r) + two * pot.potential(r) / eta2)
            .collect();
        let start_r = h * (ll / (T::lit(12.0) * T::lit(START_STEP))).sqrt();
        let start = ((start_r - grid.r_min()) / h).ceil().to_usize().unwrap_or(1).max(1);
        let (mut lo, mut hi) = (T::infinity(), T::neg_infinity());
        for &qi in &q[start..] {
            let v = qi * eta2 / two;
            lo = lo.min(v);
            hi = hi.max(v);
        }
        let r0 = grid.r_min();
        Self {
            grid,
            l,
            eta2,
            q,
            h2_12,
            start,
            coulomb_strength: -r0 * pot.potential(r0),
            v_eff_min: lo,
            v_eff_max: hi,
        }
    }

    fn window(&self) -> (T, T) {
        let stable = self.v_eff_max - T::lit(6.0 * STABLE_STEP) * self.eta2 / (self.grid.spacing().powi(2));
        (self.v_eff_min.max(stable), T::zero())
    }

    #[inline]
    fn k(&self, i: usize, e: T) -> T {
        self.q[i] - T::lit(2.0) * e / self.eta2
    }

    /// Regular solution near the origin, `r^(l+1) (1 - Z r / ((l+1) eta^2))`.
    fn series(&self, r: T) -> T {
        let a = self.coulomb_strength / (T::from_u32(self.l + 1).unwrap() * self.eta2);
        r.powi(self.l as i32 + 1) * (T::one() - a * r)
    }

    #[inline]
    fn step(&self, e: T, y_prev: T, y: T, i_prev: usize, i: usize, i_next: usize) -> T {
        let s = self.h2_12;
        let a = T::one() - s * self.k(i_next, e);
        let b = T::lit(2.0) * (T::one() + T::lit(5.0) * s * self.k(i, e)) * y;
        let c = (T::one() - s * self.k(i_prev, e)) * y_prev;
        (b - c) / a
    }

    /// Integrates outward through index `upto`, returning the sign changes seen.
    fn outward(&self, e: T, upto: usize, out: &mut Vec<T>) -> u32 {
        out.clear();
        for i in 0..=self.start.min(upto) {
            out.push(self.series(self.grid.r(i)));
        }
        let mut nodes = 0;
        for i in self.start..upto {
            let y = self.step(e, out[i - 1], out[i], i - 1, i, i + 1);
            if (y < T::zero()) != (out[i] < T::zero()) && y != T::zero() && out[i] != T::zero() {
                nodes += 1;
            }
            out.push(y);
            if y.abs() > T::lit(RESCALE_ABOVE) {
                let scale = T::lit(RESCALE_ABOVE).recip();
                out.iter_mut().for_each(|v| *v = *v * scale);
            }
        }
        nodes
    }

    /// Integrates inward from `chi(r_max) = 0` down to index `downto`; the
    /// result is indexed like the grid, with zeros below `downto`.
    fn inward(&self, e: T, downto: usize, out: &mut Vec<T>) {
        let n = self.grid.point_count();
        out.clear();
        out.resize(n, T::zero());
        out[n - 2] = T::lit(1e-30);
        let mut i = n - 2;
        while i > downto {
            let y = self.step(e, out[i + 1], out[i], i + 1, i, i - 1);
            out[i - 1] = y;
            if y.abs() > T::lit(RESCALE_ABOVE) {
                let scale = T::lit(RESCALE_ABOVE).recip();
                out[i - 1..].iter_mut().for_each(|v| *v = *v * scale);
            }
            i -= 1;
        }
    }

    fn node_count(&self, e: T, buf: &mut Vec<T>) -> u32 {
        self.outward(e, self.grid.point_count() - 1, buf)
    }

    /// Outermost classically allowed index, kept away from both ends.
    fn matching_index(&self, e: T) -> usize {
        let n = self.grid.point_count();
        let mut m = self.start + 2;
        for i in (self.start + 2..n - 3).rev() {
            if self.k(i, e) < T::zero() {
                m = i;
                break;
            }
        }
        m.clamp(self.start + 2, n - 4)
    }

    /// Log-derivative mismatch at index `m` of the outward and inward solutions.
    fn defect(&self, e: T, m: usize, out: &mut Vec<T>, inn: &mut Vec<T>) -> T {
        self.outward(e, m + 1, out);
        self.inward(e, m - 1, inn);
        let d_out = (out[m + 1] - out[m - 1]) / out[m];
        let d_in = (inn[m + 1] - inn[m - 1]) / inn[m];
        d_out - d_in
    }
}

/// Bound state of `-(eta^2/2)(chi'' - l(l+1) chi / r^2) + V chi = E chi` with
/// `n - l - 1` nodes, by two-sided Numerov shooting.
pub fn shoot_eigenvalue<T: Real>(
    qn: QuantumNumbers,
    pot: &PotentialSpec<T>,
    eta: T,
    grid: &RadialGrid<T>,
) -> Result<NumericEigenstate<T>> {
    if !(eta > T::zero() && eta <= T::one()) {
        return Err(Error::InvalidArgument(format!("eta must lie in (0, 1], got {eta}")));
    }
    let sh = Shooter::new(grid, pot, qn.l(), eta);
    if sh.start + 8 >= grid.point_count() {
        return Err(Error::InvalidGrid("grid too coarse for the centrifugal barrier".into()));
    }
    let nodes = qn.radial_nodes();
    let window = sh.window();
    let (mut lo, mut hi) = window;
    let not_bracketed = |lo: T, hi: T| Error::EigenvalueNotBracketed {
        nodes,
        lo: lo.as_f64(),
        hi: hi.as_f64(),
    };
    let mut buf = Vec::with_capacity(grid.point_count());
    if !(lo < hi) {
        return Err(not_bracketed(lo, hi));
    }
    if sh.node_count(hi, &mut buf) <= nodes {
        return Err(Error::NoBoundState {
            n: qn.n(),
            l: qn.l(),
            alpha_z: f64::NAN,
        });
    }
    if sh.node_count(lo, &mut buf) > nodes {
        return Err(not_bracketed(lo, hi));
    }

    // Node-count bisection down to a narrow window around the level.
    for _ in 0..200 {
        let mid = (lo + hi) * T::lit(0.5);
        if hi - lo <= T::lit(1e-7) * mid.abs().max(T::min_positive_value()) {
            break;
        }
        if sh.node_count(mid, &mut buf) <= nodes {
            lo = mid;
        } else {
            hi = mid;
        }
    }

    // Match outward and inward solutions at the outer turning point.
    let m = sh.matching_index((lo + hi) * T::lit(0.5));
    let mut out = Vec::with_capacity(grid.point_count());
    let mut inn = Vec::with_capacity(grid.point_count());
    let mut d_lo = sh.defect(lo, m, &mut out, &mut inn);
    let mut d_hi = sh.defect(hi, m, &mut out, &mut inn);
    // The node count flips within rounding of the defect root, which can
    // leave the root just outside; widen until the defect changes sign.
    let mut widen = hi - lo;
    for _ in 0..16 {
        if d_lo * d_hi <= T::zero() {
            break;
        }
        lo = (lo - widen).max(window.0);
        hi = (hi + widen).min(window.1);
        d_lo = sh.defect(lo, m, &mut out, &mut inn);
        d_hi = sh.defect(hi, m, &mut out, &mut inn);
        widen = widen * T::lit(2.0);
    }
    let bracket = Bracket::new(lo, hi, d_lo, d_hi).map_err(|_| not_bracketed(lo, hi))?;
    let tol = T::lit(4.0) * T::epsilon() * lo.abs().max(hi.abs());
    let buffers = RefCell::new((out, inn));
    let root = refine_bracket(
        &|e| {
            let (o, i) = &mut *buffers.borrow_mut();
            sh.defect(e, m, o, i)
        },
        bracket,
        tol,
    );
    let e = root.x;
    let (mut out, mut inn) = buffers.into_inner();

    sh.outward(e, m + 1, &mut out);
    sh.inward(e, m - 1, &mut inn);
    let sign = out[m].signum();
    let mut chi: Vec<T> = (0..grid.point_count())
        .map(|i| {
            if i <= m {
                out[i] / out[m].abs()
            } else {
                inn[i] / inn[m] * sign
            }
        })
        .collect();
    let norm = (chi.iter().fold(T::zero(), |s, &x| s + x * x) * grid.spacing()).sqrt();
    chi.iter_mut().for_each(|x| *x = *x / norm);

    let node_count = count_sign_changes(&chi);
    if node_count != nodes {
        return Err(not_bracketed(lo, hi));
    }
    let peak = chi.iter().fold(T::zero(), |p, &x| p.max(x.abs()));
    let n = grid.point_count();
    let tail = chi[n - 1 - n / 50].abs() / peak;
    if tail > T::lit(TAIL_THRESHOLD) {
        return Err(Error::GridTooSmall { tail: tail.as_f64() });
    }
    Ok(NumericEigenstate {
        qn,
        grid: *grid,
        chi,
        eigenvalue: e,
        node_count,
    })
}

fn count_sign_changes<T: Real>(v: &[T]) -> u32 {
    let mut last = T::zero();
    let mut count = 0;
    for &x in v {
        if x == T::zero() {
            continue;
        }
        if last != T::zero() && (x < T::zero()) != (last < T::zero()) {
            count += 1;
        }
        last = x;
    }
    count
}

/// Controls of the self-consistent loop.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterationOptions<T> {
    /// Exit when `|epsilon_new - epsilon| < tolerance`.
    pub tolerance: T,
    pub max_iterations: usize,
    /// `epsilon <- epsilon + damping (epsilon_new - epsilon)`.
    pub damping: T,
    /// Aitken extrapolation of runs of monotone damped steps.
    pub accelerate: bool,
}

impl<T: Real> Default for IterationOptions<T> {
    fn default() -> Self {
        Self {
            tolerance: T::tol(1e-10),
            max_iterations: 200,
            damping: T::lit(0.5),
            accelerate: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SelfConsistentResult<T> {
    pub epsilon: T,
    pub eigenstate: NumericEigenstate<T>,
    pub iterations: usize,
    /// Every accepted iterate, starting from 0.
    pub epsilon_history: Vec<T>,
    /// `|epsilon_new - epsilon|` at exit.
    pub residual: T,
}

/// Damped fixed-point iteration of `epsilon -> <chi_eps| F/(F + F0) |chi_eps>`,
/// starting from the Schrödinger state.
pub fn self_consistent_solve<T: Real>(
    qn: QuantumNumbers,
    pot: &PotentialSpec<T>,
    grid: &RadialGrid<T>,
    opts: &IterationOptions<T>,
) -> Result<SelfConsistentResult<T>> {
    let diverged = |iterations: usize, reason: String| Error::IterationDiverged { iterations, reason };
    let slack = opts.tolerance * T::lit(10.0);

    let mut eps = T::zero();
    let mut history = vec![eps];
    let mut direction: Option<bool> = None;
    // Consecutive plain damped iterates feeding the extrapolation.
    let mut run: Vec<T> = vec![eps];
    // Iterate to fall back to if an extrapolated point overshoots.
    let mut fallback: Option<T> = None;
    let mut cooldown = 0usize;

    for it in 1..=opts.max_iterations {
        let state = match shoot_eigenvalue(qn, pot, T::one() - eps, grid) {
            Ok(s) => s,
            Err(e @ Error::NoBoundState { .. }) => return Err(e),
            Err(e) if it == 1 => return Err(e),
            Err(e) => return Err(diverged(it, format!("eigensolve failed at epsilon = {eps}: {e}"))),
        };
        let eps_new = match epsilon_from_density(grid, &state.density(), |r| pot.force_magnitude(r)) {
            Ok(v) => v,
            Err(e) if it == 1 => return Err(e),
            // The state has outgrown the grid resolution, as happens when
            // epsilon runs away past the critical coupling.
            Err(e) => return Err(diverged(it, format!("density rejected at epsilon = {eps}: {e}"))),
        };
        let r = eps_new - eps;
        if r.abs() < opts.tolerance {
            return Ok(SelfConsistentResult {
                epsilon: eps,
                eigenstate: state,
                iterations: it,
                epsilon_history: history,
                residual: r.abs(),
            });
        }
        let up = r > T::zero();
        if let Some(d) = direction {
            if d != up && r.abs() > slack {
                match fallback.take() {
                    Some(prev) => {
                        eps = prev;
                        run = vec![eps];
                        cooldown = 3;
                        history.push(eps);
                        continue;
                    }
                    None => return Err(diverged(it, format!("iterates reversed direction at epsilon = {eps}"))),
                }
            }
        } else {
            direction = Some(up);
        }
        fallback = None;

        let mut next = eps + opts.damping * r;
        run.push(next);
        if opts.accelerate && cooldown == 0 && run.len() >= 3 {
            let k = run.len();
            let (x0, x1, x2) = (run[k - 3], run[k - 2], run[k - 1]);
            let (d1, d2) = (x1 - x0, x2 - x1);
            let ratio = d2 / d1;
            if d1 != T::zero() && ratio > T::zero() && ratio < T::one() - T::lit(1e-3) {
                let jump = x2 + d2 * ratio / (T::one() - ratio);
                if jump >= T::zero() && jump < T::one() {
                    fallback = Some(x2);
                    next = jump;
                    run = vec![jump];
                }
            }
        }
        cooldown = cooldown.saturating_sub(1);
        if !(next >= T::zero() && next < T::one()) {
            return Err(diverged(it, format!("epsilon left [0, 1): {next}")));
        }
        eps = next;
        history.push(eps);
    }
    Err(diverged(opts.max_iterations, "iteration budget exhausted".into()))
}

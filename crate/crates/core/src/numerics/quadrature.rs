//! Adaptive Gauss-Kronrod quadrature on finite and semi-infinite intervals.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Tolerance contract for the adaptive integrators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec<T> {
    pub relative_tolerance: T,
    pub absolute_tolerance: T,
    pub max_subdivisions: usize,
}

impl<T: Real> QuadratureSpec<T> {
    pub fn new(relative_tolerance: T, absolute_tolerance: T, max_subdivisions: usize) -> Result<Self> {
        let positive = |x: T| x > T::zero() && x.is_finite();
        if !positive(relative_tolerance) || !positive(absolute_tolerance) {
            return Err(Error::InvalidArgument(format!(
                "quadrature tolerances must be positive, got rel = {}, abs = {}",
                relative_tolerance, absolute_tolerance
            )));
        }
        if max_subdivisions == 0 {
            return Err(Error::InvalidArgument("max_subdivisions must be at least 1".into()));
        }
        Ok(Self {
            relative_tolerance,
            absolute_tolerance,
            max_subdivisions,
        })
    }

    /// Same spec with both tolerances replaced by `tol` (floored for the scalar type).
    pub fn with_tolerance(self, tol: T) -> Self {
        let floor = T::epsilon() * T::lit(64.0);
        Self {
            relative_tolerance: tol.max(floor),
            absolute_tolerance: (tol * T::lit(1e-2)).max(T::min_positive_value()),
            ..self
        }
    }

    fn target(&self, value: T) -> T {
        self.absolute_tolerance.max(self.relative_tolerance * value.abs())
    }
}

impl<T: Real> Default for QuadratureSpec<T> {
    fn default() -> Self {
        Self {
            relative_tolerance: T::tol(1e-12),
            absolute_tolerance: T::lit(1e-14).max(T::min_positive_value()),
            max_subdivisions: 2000,
        }
    }
}

/// Integral value together with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate<T> {
    pub value: T,
    pub error: T,
    pub subdivisions: usize,
}

// 15-point Kronrod extension of the 7-point Gauss rule (QUADPACK qk15).
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

#[derive(Debug, Clone, Copy)]
struct Panel<T> {
    a: T,
    b: T,
    value: T,
    error: T,
}

fn gauss_kronrod<T: Real, F: Fn(T) -> T>(f: &F, a: T, b: T) -> Panel<T> {
    let half = (b - a) * T::lit(0.5);
    let center = (a + b) * T::lit(0.5);
    let fc = f(center);
    let mut kronrod = fc * T::lit(WGK[7]);
    let mut gauss = fc * T::lit(WG[3]);
    let mut res_abs = kronrod.abs();
    let mut fv1 = [T::zero(); 7];
    let mut fv2 = [T::zero(); 7];
    for j in 0..7 {
        let dx = half * T::lit(XGK[j]);
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        let w = T::lit(WGK[j]);
        kronrod = kronrod + w * (f1 + f2);
        res_abs = res_abs + w * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss = gauss + T::lit(WG[j / 2]) * (f1 + f2);
        }
    }
    let mean = kronrod * T::lit(0.5);
    let mut res_asc = T::lit(WGK[7]) * (fc - mean).abs();
    for j in 0..7 {
        res_asc = res_asc + T::lit(WGK[j]) * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let scale = half.abs();
    let value = kronrod * half;
    let res_abs = res_abs * scale;
    let res_asc = res_asc * scale;
    let mut error = ((kronrod - gauss) * half).abs();
    if res_asc != T::zero() && error != T::zero() {
        error = res_asc * T::one().min((T::lit(200.0) * error / res_asc).powf(T::lit(1.5)));
    }
    let fifty_eps = T::lit(50.0) * T::epsilon();
    if res_abs > T::min_positive_value() / fifty_eps {
        error = error.max(fifty_eps * res_abs);
    }
    Panel { a, b, value, error }
}

/// Globally adaptive bisection starting from an initial partition.
fn refine<T: Real, F: Fn(T) -> T>(
    f: &F,
    mut panels: Vec<Panel<T>>,
    spec: &QuadratureSpec<T>,
    extra_error: T,
    extra_value: T,
) -> Result<Estimate<T>> {
    let mut subdivisions = 0usize;
    loop {
        let value = panels.iter().fold(extra_value, |s, p| s + p.value);
        let error = panels.iter().fold(extra_error, |s, p| s + p.error);
        if error <= spec.target(value) {
            return Ok(Estimate {
                value,
                error,
                subdivisions,
            });
        }
        // Deterministic choice: first panel with the largest error.
        let (worst, _) = panels
            .iter()
            .enumerate()
            .fold((0usize, T::neg_infinity()), |(bi, be), (i, p)| {
                if p.error > be {
                    (i, p.error)
                } else {
                    (bi, be)
                }
            });
        let p = panels[worst];
        let mid = (p.a + p.b) * T::lit(0.5);
        let resolvable = mid > p.a && mid < p.b;
        if subdivisions >= spec.max_subdivisions || !resolvable {
            return Err(Error::NonConvergence {
                estimate: value.as_f64(),
                error: error.as_f64(),
                subdivisions,
            });
        }
        panels[worst] = gauss_kronrod(f, p.a, mid);
        panels.insert(worst + 1, gauss_kronrod(f, mid, p.b));
        subdivisions += 1;
    }
}

/// Adaptive integral of `f` over the finite interval `[a, b]`.
pub fn integrate<T: Real, F: Fn(T) -> T>(f: F, a: T, b: T, spec: &QuadratureSpec<T>) -> Result<T> {
    integrate_estimate(f, a, b, spec).map(|e| e.value)
}

pub fn integrate_estimate<T: Real, F: Fn(T) -> T>(f: F, a: T, b: T, spec: &QuadratureSpec<T>) -> Result<Estimate<T>> {
    if a == b {
        return Ok(Estimate {
            value: T::zero(),
            error: T::zero(),
            subdivisions: 0,
        });
    }
    let first = gauss_kronrod(&f, a, b);
    refine(&f, vec![first], spec, T::zero(), T::zero())
}

/// Integral of `f` over `[0, inf)`.
///
/// The half-line is covered by doubling panels `[0,1], [1,2], [2,4], ...` until
/// two consecutive panels are negligible and decaying; the remainder beyond the
/// cut is estimated as a geometric continuation of the last panel ratio (exact
/// for exponential decay). The covered range `[0, X]` is then refined
/// adaptively.
pub fn integrate_semi_infinite<T: Real, F: Fn(T) -> T>(f: F, spec: &QuadratureSpec<T>) -> Result<T> {
    integrate_semi_infinite_estimate(f, spec).map(|e| e.value)
}

pub fn integrate_semi_infinite_estimate<T: Real, F: Fn(T) -> T>(f: F, spec: &QuadratureSpec<T>) -> Result<Estimate<T>> {
    const MIN_PANELS: usize = 5;
    const MAX_PANELS: usize = 160;

    let mut panels = vec![gauss_kronrod(&f, T::zero(), T::one())];
    let mut running = panels[0].value;
    let mut quiet = 0usize;
    let mut a = T::one();
    loop {
        if panels.len() >= MAX_PANELS {
            return Err(Error::NonConvergence {
                estimate: running.as_f64(),
                error: f64::INFINITY,
                subdivisions: panels.len(),
            });
        }
        let b = a + a;
        let p = gauss_kronrod(&f, a, b);
        let prev = panels[panels.len() - 1].value.abs();
        running = running + p.value;
        let negligible = p.value.abs() + p.error <= T::lit(1e-2) * spec.target(running);
        let decaying = p.value.abs() <= prev;
        panels.push(p);
        quiet = if negligible && decaying { quiet + 1 } else { 0 };
        a = b;
        if quiet >= 2 && panels.len() > MIN_PANELS {
            break;
        }
    }

    let n = panels.len();
    let last = panels[n - 1].value;
    let before = panels[n - 2].value;
    let tail = if before != T::zero() {
        let q = (last / before).abs();
        if q < T::one() {
            last * q / (T::one() - q)
        } else {
            last
        }
    } else {
        T::zero()
    };
    refine(&f, panels, spec, tail.abs(), tail)
}

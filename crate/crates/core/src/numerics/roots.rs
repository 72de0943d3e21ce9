//! One-dimensional root finding, predicate bisection and maximization.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// A sign-change bracket `[lo, hi]` with cached function values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket<T> {
    pub lo: T,
    pub hi: T,
    pub f_lo: T,
    pub f_hi: T,
}

impl<T: Real> Bracket<T> {
    pub fn new(lo: T, hi: T, f_lo: T, f_hi: T) -> Result<Self> {
        if !(lo < hi) || f_lo * f_hi > T::zero() || f_lo.is_nan() || f_hi.is_nan() {
            return Err(Error::InvalidBracket {
                lo: lo.as_f64(),
                hi: hi.as_f64(),
            });
        }
        Ok(Self { lo, hi, f_lo, f_hi })
    }

    pub fn width(&self) -> T {
        self.hi - self.lo
    }
}

/// A refined root and `|f(x)|` at it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root<T> {
    pub x: T,
    pub residual: T,
}

/// Refines a sign-change bracket with Brent's method (bisection safeguarding
/// secant and inverse quadratic steps) until the bracket is narrower than `tol`.
pub fn refine_bracket<T: Real, F: Fn(T) -> T>(f: &F, bracket: Bracket<T>, tol: T) -> Root<T> {
    let two = T::lit(2.0);
    let half = T::lit(0.5);
    let three = T::lit(3.0);
    let (mut a, mut b) = (bracket.lo, bracket.hi);
    let (mut fa, mut fb) = (bracket.f_lo, bracket.f_hi);
    if fa == T::zero() {
        return Root {
            x: a,
            residual: T::zero(),
        };
    }
    if fb == T::zero() {
        return Root {
            x: b,
            residual: T::zero(),
        };
    }
    let (mut c, mut fc) = (b, fb);
    let (mut d, mut e) = (b - a, b - a);
    for _ in 0..500 {
        if (fb > T::zero()) == (fc > T::zero()) {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = two * T::epsilon() * b.abs() + half * tol;
        let xm = half * (c - b);
        if xm.abs() <= tol1 || fb == T::zero() {
            break;
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = two * xm * s;
                q = T::one() - s;
            } else {
                let qq = fa / fc;
                let r = fb / fc;
                p = s * (two * xm * qq * (qq - r) - (b - a) * (r - T::one()));
                q = (qq - T::one()) * (r - T::one()) * (s - T::one());
            }
            if p > T::zero() {
                q = -q;
            }
            p = p.abs();
            let min1 = three * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if two * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b = if d.abs() > tol1 { b + d } else { b + tol1.copysign(xm) };
        fb = f(b);
    }
    Root {
        x: b,
        residual: fb.abs(),
    }
}

/// Scans `f` on a uniform grid of `scan_points` over `[lo, hi]`, refines every
/// sign change, and returns the roots in ascending order.
pub fn find_roots_on_interval<T: Real, F: Fn(T) -> T>(f: F, lo: T, hi: T, scan_points: usize, tol: T) -> Vec<Root<T>> {
    let scan = scan(&f, lo, hi, scan_points);
    roots_from_scan(&f, &scan, tol)
}

/// Uniform samples `(x_i, f(x_i))` with both endpoints included.
pub fn scan<T: Real, F: Fn(T) -> T>(f: &F, lo: T, hi: T, points: usize) -> Vec<(T, T)> {
    let points = points.max(2);
    let last = T::from_count(points - 1);
    (0..points)
        .map(|i| {
            let x = if i + 1 == points {
                hi
            } else {
                lo + (hi - lo) * T::from_count(i) / last
            };
            (x, f(x))
        })
        .collect()
}

pub fn roots_from_scan<T: Real, F: Fn(T) -> T>(f: &F, samples: &[(T, T)], tol: T) -> Vec<Root<T>> {
    let mut roots = Vec::new();
    for (i, &(x, fx)) in samples.iter().enumerate() {
        if fx == T::zero() {
            roots.push(Root { x, residual: T::zero() });
            continue;
        }
        if let Some(&(xn, fxn)) = samples.get(i + 1) {
            if fxn != T::zero() && (fx < T::zero()) != (fxn < T::zero()) {
                let bracket = Bracket {
                    lo: x,
                    hi: xn,
                    f_lo: fx,
                    f_hi: fxn,
                };
                roots.push(refine_bracket(f, bracket, tol));
            }
        }
    }
    roots
}

/// Final bracket `[lo, hi]` of a predicate boundary; `p(lo)` and `p(hi)` keep
/// their initial (distinct) values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryBracket<T> {
    pub lo: T,
    pub hi: T,
    pub value_at_lo: bool,
}

impl<T: Real> BoundaryBracket<T> {
    pub fn midpoint(&self) -> T {
        (self.lo + self.hi) * T::lit(0.5)
    }

    /// The endpoint at which the predicate holds.
    pub fn true_side(&self) -> T {
        if self.value_at_lo {
            self.lo
        } else {
            self.hi
        }
    }
}

pub fn bisect_predicate_bracket<T: Real, P: FnMut(T) -> bool>(
    mut p: P,
    lo: T,
    hi: T,
    tol: T,
) -> Result<BoundaryBracket<T>> {
    let (mut lo, mut hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let at_lo = p(lo);
    if at_lo == p(hi) {
        return Err(Error::InvalidBracket {
            lo: lo.as_f64(),
            hi: hi.as_f64(),
        });
    }
    while hi - lo > tol {
        let mid = (lo + hi) * T::lit(0.5);
        if mid <= lo || mid >= hi {
            break;
        }
        if p(mid) == at_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(BoundaryBracket {
        lo,
        hi,
        value_at_lo: at_lo,
    })
}

/// Locates where a monotone predicate flips on `[lo, hi]` to within `tol`.
pub fn bisect_predicate_boundary<T: Real, P: FnMut(T) -> bool>(p: P, lo: T, hi: T, tol: T) -> Result<T> {
    bisect_predicate_bracket(p, lo, hi, tol).map(|b| b.midpoint())
}

/// Golden-section search for the maximum of a unimodal `f` on `[lo, hi]`.
/// Returns `(argmax, max)`.
pub fn maximize_on_interval<T: Real, F: Fn(T) -> T>(f: F, lo: T, hi: T, tol: T) -> (T, T) {
    let inv_phi = T::lit(0.618_033_988_749_894_8);
    let (mut a, mut b) = (lo, hi);
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while b - a > tol {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        }
        if !(x1 < x2) {
            break;
        }
    }
    if f1 >= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_root() {
        let r = find_roots_on_interval(|x: f64| x - 0.5, 0.0, 1.0, 512, 1e-12);
        assert_eq!(r.len(), 1);
        assert!((r[0].x - 0.5).abs() < 1e-12);
    }

    #[test]
    fn factored_quadratic() {
        let r = find_roots_on_interval(|x: f64| (x - 0.25) * (x - 0.75), 0.0, 1.0, 512, 1e-12);
        let xs: Vec<f64> = r.iter().map(|r| r.x).collect();
        assert_eq!(xs.len(), 2);
        assert!((xs[0] - 0.25).abs() < 1e-12 && (xs[1] - 0.75).abs() < 1e-12, "{xs:?}");
    }

    #[test]
    fn no_real_root() {
        assert!(find_roots_on_interval(|x: f64| x * x + 1.0, 0.0, 1.0, 512, 1e-12).is_empty());
    }

    #[test]
    fn root_on_scan_node_counted_once() {
        // x = 0.5 is exactly a node of a 9-point scan on [0, 1].
        let r = find_roots_on_interval(|x: f64| x - 0.5, 0.0, 1.0, 9, 1e-12);
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].x, 0.5);
    }

    #[test]
    fn step_predicate() {
        let b = bisect_predicate_boundary(|x: f64| x < 0.3, 0.0, 1.0, 1e-9).unwrap();
        assert!((b - 0.3).abs() <= 1e-9);
    }

    #[test]
    fn sqrt_two_boundary() {
        let b = bisect_predicate_boundary(|x: f64| x * x < 2.0, 0.0, 2.0, 1e-10).unwrap();
        assert!((b - 2f64.sqrt()).abs() <= 1e-10);
    }

    #[test]
    fn predicate_without_flip() {
        let r = bisect_predicate_boundary(|_x: f64| true, 0.0, 1.0, 1e-9);
        assert!(matches!(r, Err(Error::InvalidBracket { .. })));
    }

    #[test]
    fn true_side_keeps_predicate() {
        let b = bisect_predicate_bracket(|x: f64| x <= 0.7, 0.0, 1.0, 1e-12).unwrap();
        assert!(b.true_side() <= 0.7);
        assert!(0.7 - b.true_side() <= 1e-12);
    }

    #[test]
    fn bracket_validation() {
        assert!(Bracket::new(0.0, 1.0, -1.0, 1.0).is_ok());
        assert!(Bracket::new(0.0, 1.0, 0.0, 1.0).is_ok());
        assert!(Bracket::new(0.0, 1.0, 1.0, 2.0).is_err());
        assert!(Bracket::new(1.0, 0.0, -1.0, 1.0).is_err());
    }

    #[test]
    fn golden_section_maximum() {
        let (x, fx) = maximize_on_interval(|x: f64| -(x - 0.3).powi(2) + 2.0, 0.0, 1.0, 1e-10);
        assert!((x - 0.3).abs() < 1e-7);
        assert!((fx - 2.0).abs() < 1e-13);
    }
}

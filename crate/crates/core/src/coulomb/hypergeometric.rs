//! Terminating confluent hypergeometric series `F(a, b, x)` and the
//! normalization factor `S_nl`, both built from exact rationals.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::QuantumNumbers;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Exact power-series coefficients of `F(a, b, x) = sum_k (a)_k / (b)_k x^k / k!`
/// for a non-positive integer `a` and positive integer `b`.
pub fn confluent_hypergeometric_coefficients(a: i64, b: i64) -> Result<Vec<BigRational>> {
    if a > 0 {
        return Err(Error::InvalidDegree { a });
    }
    if b < 1 {
        return Err(Error::InvalidArgument(format!(
            "second parameter must be positive, got {b}"
        )));
    }
    let degree = (-a) as usize;
    let mut coeffs = Vec::with_capacity(degree + 1);
    let mut term = BigRational::one();
    coeffs.push(term.clone());
    for k in 0..degree as i64 {
        let ratio = BigRational::new(BigInt::from(a + k), BigInt::from((b + k) * (k + 1)));
        term *= ratio;
        coeffs.push(term.clone());
    }
    Ok(coeffs)
}

fn rational_to<T: Real>(q: &BigRational) -> T {
    T::lit(q.to_f64().unwrap_or(f64::NAN))
}

/// `F(a, b, x)` as a polynomial with coefficients rounded once from exact
/// rationals, evaluated by Horner's rule.
#[derive(Debug, Clone, PartialEq)]
pub struct HypergeometricPoly<T> {
    coeffs: Vec<T>,
}

impl<T: Real> HypergeometricPoly<T> {
    pub fn new(a: i64, b: i64) -> Result<Self> {
        let coeffs = confluent_hypergeometric_coefficients(a, b)?
            .iter()
            .map(rational_to)
            .collect();
        Ok(Self { coeffs })
    }

    /// The polynomial `F(-(n - l - 1), 2l + 2, x)` of a bound state.
    pub fn for_state(qn: QuantumNumbers) -> Self {
        Self::new(-(qn.radial_nodes() as i64), 2 * qn.l() as i64 + 2).expect("bound-state parameters are valid")
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coefficients(&self) -> &[T] {
        &self.coeffs
    }

    #[inline]
    pub fn eval(&self, x: T) -> T {
        self.coeffs.iter().rev().fold(T::zero(), |acc, &c| acc * x + c)
    }
}

pub fn confluent_hypergeometric_poly<T: Real>(a: i64, b: i64, x: T) -> Result<T> {
    Ok(HypergeometricPoly::new(a, b)?.eval(x))
}

/// `S_nl = (n + l)! / ([(2l + 1)!]^2 * 2n * (n - l - 1)!)`, exactly.
pub fn snl_factor_exact(qn: QuantumNumbers) -> BigRational {
    fn factorial(k: u32) -> BigInt {
        (1..=k).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
    }
    let (n, l) = (qn.n(), qn.l());
    let num = factorial(n + l);
    let f = factorial(2 * l + 1);
    let den = &f * &f * BigInt::from(2 * n) * factorial(n - l - 1);
    debug_assert!(!den.is_zero());
    BigRational::new(num, den)
}

pub fn snl_factor<T: Real>(qn: QuantumNumbers) -> T {
    rational_to(&snl_factor_exact(qn))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qn(n: u32, l: u32) -> QuantumNumbers {
        QuantumNumbers::new(n, l).unwrap()
    }

    // Direct term-by-term summation, independent of the rational coefficients.
    fn series(a: i64, b: i64, x: f64) -> f64 {
        let mut sum = 0.0;
        let mut term = 1.0;
        for k in 0..=(-a) {
            sum += term;
            term *= (a + k) as f64 / (b + k) as f64 * x / (k + 1) as f64;
        }
        sum
    }

    #[test]
    fn zero_degree_is_one() {
        for x in [0.0, 0.5, 3.0, 40.0] {
            assert_eq!(confluent_hypergeometric_poly(0, 2, x).unwrap(), 1.0);
        }
    }

    #[test]
    fn low_degree_closed_forms() {
        for x in [0.0_f64, 0.3, 1.7, 9.0] {
            let f1 = confluent_hypergeometric_poly(-1, 2, x).unwrap();
            assert!((f1 - (1.0 - x / 2.0)).abs() < 1e-14);
            let f2 = confluent_hypergeometric_poly(-2, 4, x).unwrap();
            assert!((f2 - (1.0 - x / 2.0 + x * x / 20.0)).abs() < 1e-13);
        }
    }

    #[test]
    fn matches_direct_series() {
        for (a, b) in [(-3, 2), (-4, 4), (-5, 6), (-7, 2)] {
            for x in [0.1, 1.0, 4.5, 12.0] {
                let v = confluent_hypergeometric_poly(a, b, x).unwrap();
                let s = series(a, b, x);
                assert!((v - s).abs() <= 1e-11 * s.abs().max(1.0), "a={a} b={b} x={x}");
            }
        }
    }

    #[test]
    fn positive_a_rejected() {
        assert_eq!(
            confluent_hypergeometric_poly(1, 2, 0.5_f64),
            Err(Error::InvalidDegree { a: 1 })
        );
    }

    #[test]
    fn snl_values() {
        assert_eq!(snl_factor::<f64>(qn(1, 0)), 0.5);
        assert_eq!(snl_factor::<f64>(qn(2, 0)), 0.5);
        assert!((snl_factor::<f64>(qn(2, 1)) - 1.0 / 24.0).abs() < 1e-17);
        assert_eq!(
            snl_factor_exact(qn(2, 1)),
            BigRational::new(BigInt::from(1), BigInt::from(24))
        );
    }

    #[test]
    fn state_polynomial_degree() {
        assert_eq!(HypergeometricPoly::<f64>::for_state(qn(3, 0)).degree(), 2);
        assert_eq!(HypergeometricPoly::<f64>::for_state(qn(3, 2)).degree(), 0);
    }
}

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Uniform radial grid `r_i = r_min + i * spacing`, `i = 0..point_count`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialGrid<T> {
    r_min: T,
    r_max: T,
    point_count: usize,
    spacing: T,
}

impl<T: Real> RadialGrid<T> {
    pub const MIN_POINTS: usize = 1000;

    pub fn new(r_min: T, r_max: T, point_count: usize) -> Result<Self> {
        if !(r_min > T::zero()) || !(r_max > r_min) || !r_max.is_finite() {
            return Err(Error::InvalidGrid(format!(
                "need 0 < r_min < r_max, got [{r_min}, {r_max}]"
            )));
        }
        if point_count < Self::MIN_POINTS {
            return Err(Error::InvalidGrid(format!(
                "need at least {} points, got {point_count}",
                Self::MIN_POINTS
            )));
        }
        let spacing = (r_max - r_min) / T::from_count(point_count - 1);
        Ok(Self {
            r_min,
            r_max,
            point_count,
            spacing,
        })
    }

    pub fn r_min(&self) -> T {
        self.r_min
    }

    pub fn r_max(&self) -> T {
        self.r_max
    }

    pub fn point_count(&self) -> usize {
        self.point_count
    }

    pub fn spacing(&self) -> T {
        self.spacing
    }

    #[inline]
    pub fn r(&self, i: usize) -> T {
        if i + 1 == self.point_count {
            self.r_max
        } else {
            self.r_min + self.spacing * T::from_count(i)
        }
    }

    pub fn radii(&self) -> impl Iterator<Item = T> + '_ {
        (0..self.point_count).map(move |i| self.r(i))
    }

    /// Trapezoidal integral of samples taken on this grid.
    pub fn trapezoid(&self, values: &[T]) -> T {
        debug_assert_eq!(values.len(), self.point_count);
        let n = values.len();
        if n < 2 {
            return T::zero();
        }
        let inner = values[1..n - 1].iter().fold(T::zero(), |s, &v| s + v);
        (inner + (values[0] + values[n - 1]) * T::lit(0.5)) * self.spacing
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spacing_and_endpoints() {
        let g = RadialGrid::<f64>::new(1e-6, 10.0, 1001).unwrap();
        assert!((g.spacing() - (10.0 - 1e-6) / 1000.0).abs() < 1e-15);
        assert_eq!(g.r(0), 1e-6);
        assert_eq!(g.r(1000), 10.0);
        assert_eq!(g.radii().count(), 1001);
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(RadialGrid::new(0.0, 1.0, 2000).is_err());
        assert!(RadialGrid::new(1.0, 1.0, 2000).is_err());
        assert!(RadialGrid::new(1e-6, 1.0, 999).is_err());
    }

    #[test]
    fn trapezoid_is_exact_for_linear() {
        let g = RadialGrid::new(1.0, 3.0, 1001).unwrap();
        let v: Vec<f64> = g.radii().collect();
        assert!((g.trapezoid(&v) - 4.0).abs() < 1e-12);
    }
}

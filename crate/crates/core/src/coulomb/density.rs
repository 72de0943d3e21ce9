use crate::error::{Error, Result};
use crate::numerics::RadialGrid;
use crate::scalar::Real;

const NORMALIZATION_TOLERANCE: f64 = 1e-8;

/// Expectation of the noncommutativity operator `F / (F + F0)` (with `F0 = 1`)
/// over a radial density sampled on `grid`.
///
/// `density` holds `chi(r_i)^2`; `force_magnitude` is `|F(r)|` in `F0` units
/// and may be infinite.
pub fn epsilon_from_density<T: Real, F: Fn(T) -> T>(
    grid: &RadialGrid<T>,
    density: &[T],
    force_magnitude: F,
) -> Result<T> {
    if density.len() != grid.point_count() {
        return Err(Error::InvalidArgument(format!(
            "density has {} samples for a {}-point grid",
            density.len(),
            grid.point_count()
        )));
    }
    if density.iter().any(|&d| d < T::zero() || !d.is_finite()) {
        return Err(Error::InvalidArgument("density must be finite and nonnegative".into()));
    }
    let norm = grid.trapezoid(density);
    if (norm - T::one()).abs() > T::tol(NORMALIZATION_TOLERANCE) {
        return Err(Error::NotNormalized { norm: norm.as_f64() });
    }
    let weighted: Vec<T> = grid
        .radii()
        .zip(density)
        .map(|(r, &d)| {
            let f = force_magnitude(r);
            // F / (F + 1) written so that F = inf gives 1 and F = 0 gives 0.
            d / (T::one() + f.recip())
        })
        .collect();
    Ok(grid.trapezoid(&weighted) / norm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coulomb::{solve_eta, Coupling, QuantumNumbers, RadialState, SolverOptions};

    fn ground_density(az: f64, eta: f64, grid: &RadialGrid<f64>) -> Vec<f64> {
        let s = RadialState::new(QuantumNumbers::new(1, 0).unwrap(), Coupling::new(az).unwrap(), eta).unwrap();
        grid.radii().map(|r| s.chi(r).powi(2)).collect()
    }

    #[test]
    fn zero_and_infinite_force_limits() {
        let grid = RadialGrid::new(1e-6, 60.0, 20001).unwrap();
        let d = ground_density(1.0, 1.0, &grid);
        assert_eq!(epsilon_from_density(&grid, &d, |_| 0.0).unwrap(), 0.0);
        let one = epsilon_from_density(&grid, &d, |_| f64::INFINITY).unwrap();
        assert!((one - 1.0).abs() < 1e-15);
    }

    #[test]
    fn unnormalized_density_rejected() {
        let grid = RadialGrid::new(1e-6, 60.0, 20001).unwrap();
        let d: Vec<f64> = ground_density(1.0, 1.0, &grid).iter().map(|x| 2.0 * x).collect();
        assert!(matches!(
            epsilon_from_density(&grid, &d, |_| 0.0),
            Err(Error::NotNormalized { .. })
        ));
        assert!(epsilon_from_density(&grid, &d[1..], |_| 0.0).is_err());
    }

    #[test]
    fn coulomb_density_reproduces_eta_root() {
        let az = 0.3;
        let sol = solve_eta(
            QuantumNumbers::new(1, 0).unwrap(),
            Coupling::new(az).unwrap(),
            &SolverOptions::default(),
        )
        .unwrap();
        let scale = sol.eta * sol.eta / az;
        let grid = RadialGrid::new(1e-6, 60.0 * scale, 60_001).unwrap();
        let d = ground_density(az, sol.eta, &grid);
        let eps = epsilon_from_density(&grid, &d, |r| az / (r * r)).unwrap();
        assert!((eps - sol.epsilon).abs() < 1e-9, "{eps} vs {}", sol.epsilon);
    }
}

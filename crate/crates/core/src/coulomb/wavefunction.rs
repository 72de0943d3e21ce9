use super::{snl_factor, Coupling, HypergeometricPoly, QuantumNumbers};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Normalized radial function `chi_nl(r)` of the Coulomb problem with the
/// kinetic term scaled by `eta^2`.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialState<T> {
    qn: QuantumNumbers,
    coupling: Coupling<T>,
    eta: T,
    normalization: T,
    length_scale: T,
    poly: HypergeometricPoly<T>,
}

impl<T: Real> RadialState<T> {
    pub fn new(qn: QuantumNumbers, coupling: Coupling<T>, eta: T) -> Result<Self> {
        if !(eta > T::zero() && eta <= T::one()) {
            return Err(Error::InvalidArgument(format!("eta must lie in (0, 1], got {eta}")));
        }
        // Exponential decay length n * eta^2 * a0 / Z with a0 / Z = 1 / alphaZ.
        let length_scale = T::from_u32(qn.n()).unwrap() * eta * eta / coupling.value();
        let two_over = T::lit(2.0) / length_scale;
        let l = T::from_u32(qn.l()).unwrap();
        let normalization = snl_factor::<T>(qn).sqrt() * two_over.powf(l + T::lit(1.5));
        Ok(Self {
            qn,
            coupling,
            eta,
            normalization,
            length_scale,
            poly: HypergeometricPoly::for_state(qn),
        })
    }

    pub fn quantum_numbers(&self) -> QuantumNumbers {
        self.qn
    }

    pub fn coupling(&self) -> Coupling<T> {
        self.coupling
    }

    pub fn eta(&self) -> T {
        self.eta
    }

    pub fn normalization(&self) -> T {
        self.normalization
    }

    pub fn length_scale(&self) -> T {
        self.length_scale
    }

    pub fn chi(&self, r: T) -> T {
        if r <= T::zero() {
            return T::zero();
        }
        let x = r / self.length_scale;
        self.normalization * r.powi(self.qn.l() as i32 + 1) * self.poly.eval(x + x) * (-x).exp()
    }
}

pub fn radial_chi<T: Real>(state: &RadialState<T>, r: T) -> T {
    state.chi(r)
}

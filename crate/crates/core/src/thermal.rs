//! Gibbs state of the spin in the field direction `n(theta, phi)`.

use serde::Serialize;

use crate::error::{invalid, Result};
use crate::scalar::Real;
use crate::spin::{rotated_eigenbasis, ComplexMatrix, SpinNumber};

/// Adiabatic loop: fixed polar angle `theta`, azimuth swept over `[0, 2 pi]`,
/// at dimensionless inverse temperature times field `beta_b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LoopConfig<T: Real> {
    beta_b: T,
    theta: T,
}

impl<T: Real> LoopConfig<T> {
    pub fn new(beta_b: T, theta: T) -> Result<Self> {
        if !(beta_b.is_finite() && beta_b > T::zero()) {
            return invalid(format!("beta_b must be finite and > 0, got {beta_b}"));
        }
        if !(theta >= T::zero() && theta <= T::PI()) {
            return invalid(format!("theta must lie in [0, pi], got {theta}"));
        }
        Ok(Self { beta_b, theta })
    }

    pub fn beta_b(&self) -> T {
        self.beta_b
    }

    pub fn theta(&self) -> T {
        self.theta
    }
}

/// Boltzmann weights `p_m` in basis order `m = j, ..., -j`.
#[derive(Debug, Clone, PartialEq)]
pub struct ThermalSpectrum<T: Real> {
    probabilities: Vec<T>,
}

impl<T: Real> ThermalSpectrum<T> {
    pub fn probabilities(&self) -> &[T] {
        &self.probabilities
    }

    pub fn into_vec(self) -> Vec<T> {
        self.probabilities
    }
}

/// `p_m = e^{-beta_b m} / sum_m' e^{-beta_b m'}`, evaluated with the largest
/// exponent shifted to zero so large `beta_b * j` cannot overflow.
pub fn occupation_probabilities<T: Real>(
    spin: SpinNumber,
    beta_b: T,
) -> Result<ThermalSpectrum<T>> {
    if !(beta_b.is_finite() && beta_b > T::zero()) {
        return invalid(format!("beta_b must be finite and > 0, got {beta_b}"));
    }
    let exponents: Vec<T> = spin
        .magnetic_numbers::<T>()
        .into_iter()
        .map(|m| -beta_b * m)
        .collect();
    let top = exponents.iter().copied().fold(T::neg_infinity(), T::max);
    let weights: Vec<T> = exponents.iter().map(|&e| (e - top).exp()).collect();
    let total = weights.iter().copied().fold(T::zero(), |a, b| a + b);
    Ok(ThermalSpectrum {
        probabilities: weights.into_iter().map(|w| w / total).collect(),
    })
}

/// `rho = e^{-beta B n.J} / Z = U diag(p_m) U^dagger` at azimuth `phi`.
pub fn gibbs_state<T: Real>(
    spin: SpinNumber,
    cfg: &LoopConfig<T>,
    phi: T,
) -> Result<ComplexMatrix<T>> {
    let p = occupation_probabilities(spin, cfg.beta_b())?;
    let u = rotated_eigenbasis(spin, cfg.theta(), phi);
    let d = ComplexMatrix::from_real_diagonal(p.probabilities());
    Ok(&(&u * &d) * &u.adjoint())
}

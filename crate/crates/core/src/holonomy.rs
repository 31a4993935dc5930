//! Uhlmann connection, its holonomy around the azimuthal loop, and the phase
//! `arg Tr[rho P exp(oint A)]`.
//!
//! Everything here is the brute-force route: the connection is assembled
//! both from its closed form and from the spectral definition, and the
//! holonomy both from its closed form and by direct path-ordered integration.
//! The Chebyshev engine in [`crate::chebyshev`] is checked against it.

use num_complex::Complex;
use serde::Serialize;

use crate::error::{invalid, Result};
use crate::scalar::{arg, cos_polar, sin_polar, Cplx, Real};
use crate::spin::{
    angular_momentum_matrices, conjugate_by_z_rotation, matrix_exponential, rotated_eigenbasis,
    ComplexMatrix, SpinNumber, DEFAULT_EXPM_TOL,
};
use crate::thermal::{gibbs_state, occupation_probabilities, LoopConfig};

/// Trace magnitude below which the phase is reported as singular.
pub const SINGULAR_TRACE: f64 = 1e-9;
/// Default number of azimuthal steps for path-ordered integration.
pub const DEFAULT_PATH_STEPS: usize = 4096;
/// Fewest azimuthal steps accepted by [`holonomy_path_ordered`].
pub const MIN_PATH_STEPS: usize = 16;
/// Default central-difference step for [`connection_spectral`].
pub const DEFAULT_FD_STEP: f64 = 1e-6;

// Per-factor tolerance inside the path product; thousands of factors are chained.
const PATH_EXPM_TOL: f64 = 1e-14;

/// Coefficient of `d phi` in the Uhlmann connection at one point of the loop.
#[derive(Debug, Clone, PartialEq)]
pub struct ConnectionOneForm<T: Real> {
    pub coefficient: ComplexMatrix<T>,
}

/// Path-ordered exponential of the connection around the full loop.
#[derive(Debug, Clone, PartialEq)]
pub struct HolonomyMatrix<T: Real> {
    pub matrix: ComplexMatrix<T>,
}

/// Phase in `(-pi, pi]` together with the modulus of the complex amplitude it
/// came from. When `singular` is set the amplitude vanishes and the phase
/// carries no information.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhaseResult<T: Real> {
    pub phase: T,
    pub trace_magnitude: T,
    pub singular: bool,
}

impl<T: Real> PhaseResult<T> {
    pub fn from_amplitude(amplitude: Cplx<T>) -> Self {
        let trace_magnitude = amplitude.norm();
        Self {
            phase: arg(amplitude),
            trace_magnitude,
            singular: trace_magnitude.is_nan() || trace_magnitude < T::lit(SINGULAR_TRACE),
        }
    }
}

/// `1 - sech(x) = 2 sinh^2(x/2) / cosh(x)`, without cancellation at small `x`.
pub(crate) fn one_minus_sech<T: Real>(x: T) -> T {
    let s = (x * T::lit(0.5)).sinh();
    (s * s + s * s) / x.cosh()
}

/// `eta = sin(theta) [1 - sech(beta B / 2)]`.
pub fn eta<T: Real>(cfg: &LoopConfig<T>) -> T {
    sin_polar(cfg.theta()) * one_minus_sech(cfg.beta_b() * T::lit(0.5))
}

/// Probability weight `(sqrt p_l - sqrt p_k)^2 / (p_l + p_k)` of the spectral
/// connection, written in terms of the ratio of the smaller to the larger
/// probability so tiny populations do not lose precision.
pub fn probability_factor<T: Real>(p_l: T, p_k: T) -> T {
    let (big, small) = if p_l >= p_k { (p_l, p_k) } else { (p_k, p_l) };
    if big == T::zero() {
        return T::zero();
    }
    let r = small / big;
    let d = T::one() - r.sqrt();
    d * d / (T::one() + r)
}

/// Closed-form connection `-i eta (J_z sin(theta) - e^{-i phi J_z} J_x e^{i phi J_z} cos(theta))`,
/// with the matrices prepared once for repeated evaluation along the loop.
struct ClosedConnection<T: Real> {
    spin: SpinNumber,
    lab_z: ComplexMatrix<T>,
    tilted_x: ComplexMatrix<T>,
}

impl<T: Real> ClosedConnection<T> {
    fn new(spin: SpinNumber, cfg: &LoopConfig<T>) -> Self {
        let ops = angular_momentum_matrices::<T>(spin);
        let eta = eta(cfg);
        let minus_i_eta = Complex::new(T::zero(), -eta);
        let sin_t = sin_polar(cfg.theta());
        let cos_t = cos_polar(cfg.theta());
        Self {
            spin,
            lab_z: ops.jz.scale(minus_i_eta * sin_t),
            tilted_x: ops.jx.scale(-minus_i_eta * cos_t),
        }
    }

    fn at(&self, phi: T) -> ComplexMatrix<T> {
        &self.lab_z + &conjugate_by_z_rotation(self.spin, &self.tilted_x, phi)
    }
}

/// Closed-form Uhlmann connection at azimuth `phi`.
pub fn connection_closed_form<T: Real>(
    spin: SpinNumber,
    cfg: &LoopConfig<T>,
    phi: T,
) -> ConnectionOneForm<T> {
    ConnectionOneForm {
        coefficient: ClosedConnection::new(spin, cfg).at(phi),
    }
}

/// Uhlmann connection assembled from its spectral definition
/// `sum_{l,k} w(p_l, p_k) <l|d k> |l><k|` in the thermal eigenbasis, with
/// `d|k>/d phi` from central differences of the rotated basis.
///
/// The result is expressed in the fixed lab basis.
pub fn connection_spectral<T: Real>(
    spin: SpinNumber,
    cfg: &LoopConfig<T>,
    phi: T,
    fd_step: T,
) -> Result<ConnectionOneForm<T>> {
    connection_spectral_terms(spin, cfg, phi, fd_step, true)
}

/// As [`connection_spectral`]; `include_diagonal = false` drops the `l = k`
/// terms, whose probability weight is identically zero.
pub fn connection_spectral_terms<T: Real>(
    spin: SpinNumber,
    cfg: &LoopConfig<T>,
    phi: T,
    fd_step: T,
    include_diagonal: bool,
) -> Result<ConnectionOneForm<T>> {
    if !(fd_step.is_finite() && fd_step > T::zero()) {
        return invalid(format!("fd_step must be positive, got {fd_step}"));
    }
    let p = occupation_probabilities(spin, cfg.beta_b())?.into_vec();
    let theta = cfg.theta();
    let basis = rotated_eigenbasis(spin, theta, phi);
    let forward = rotated_eigenbasis(spin, theta, phi + fd_step);
    let backward = rotated_eigenbasis(spin, theta, phi - fd_step);
    let derivative = (&forward - &backward).scale_real(T::one() / (fd_step + fd_step));

    // <l| d|k> is anti-Hermitian for a unitary basis; keep only that part so
    // finite-difference noise does not leak into the Hermitian component.
    let raw = &basis.adjoint() * &derivative;
    let overlaps = (&raw - &raw.adjoint()).scale_real(T::lit(0.5));
    let weighted = ComplexMatrix::from_fn(spin.dimension(), |l, k| {
        if l == k && !include_diagonal {
            return Cplx::new(T::zero(), T::zero());
        }
        overlaps[(l, k)] * probability_factor(p[l], p[k])
    });
    Ok(ConnectionOneForm {
        coefficient: &(&basis * &weighted) * &basis.adjoint(),
    })
}

/// Closed-form holonomy `(-1)^{2j} exp(-2 pi i [(eta sin(theta) - 1) J_z - eta cos(theta) J_x])`.
pub fn holonomy_closed_form<T: Real>(spin: SpinNumber, cfg: &LoopConfig<T>) -> HolonomyMatrix<T> {
    let ops = angular_momentum_matrices::<T>(spin);
    let eta = eta(cfg);
    let sin_t = sin_polar(cfg.theta());
    let cos_t = cos_polar(cfg.theta());
    let bracket = &ops.jz.scale_real(eta * sin_t - T::one()) - &ops.jx.scale_real(eta * cos_t);
    let two_pi = T::PI() + T::PI();
    let generator = bracket.scale(Complex::new(T::zero(), -two_pi));
    let exp = matrix_exponential(&generator, T::lit(DEFAULT_EXPM_TOL))
        .expect("finite holonomy generator");
    HolonomyMatrix {
        matrix: exp.scale_real(spin.pauli_sign()),
    }
}

/// One-step propagator used to build the path-ordered product.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PathIntegrator {
    /// `exp(A(phi_k + h/2) h)`, global error `O(h^2)`.
    Midpoint,
    /// Fourth-order Magnus step on two Gauss-Legendre nodes, global error `O(h^4)`.
    #[default]
    Magnus4,
}

/// Path-ordered exponential of the closed-form connection over `phi in [0, 2 pi]`
/// with the default [`PathIntegrator::Magnus4`] step.
pub fn holonomy_path_ordered<T: Real>(
    spin: SpinNumber,
    cfg: &LoopConfig<T>,
    steps: usize,
) -> Result<HolonomyMatrix<T>> {
    holonomy_path_ordered_with(spin, cfg, steps, PathIntegrator::default())
}

/// Path-ordered product `prod_{k = steps-1 .. 0} S_k`, later azimuths to the left,
/// solving `dU/d phi = A(phi) U` with `U(0) = I`.
pub fn holonomy_path_ordered_with<T: Real>(
    spin: SpinNumber,
    cfg: &LoopConfig<T>,
    steps: usize,
    integrator: PathIntegrator,
) -> Result<HolonomyMatrix<T>> {
    if steps < MIN_PATH_STEPS {
        return invalid(format!(
            "path-ordered integration needs at least {MIN_PATH_STEPS} steps, got {steps}"
        ));
    }
    let connection = ClosedConnection::new(spin, cfg);
    let two_pi = T::PI() + T::PI();
    let h = two_pi / T::of_usize(steps);
    let tol = T::lit(PATH_EXPM_TOL);
    let gauss_offset = T::lit(3f64.sqrt() / 6.0);
    let magnus_weight = T::lit(3f64.sqrt() / 12.0) * h * h;

    let mut product = ComplexMatrix::identity(spin.dimension());
    for k in 0..steps {
        let start = T::of_usize(k) * h;
        let exponent = match integrator {
            PathIntegrator::Midpoint => connection.at(start + h * T::lit(0.5)).scale_real(h),
            PathIntegrator::Magnus4 => {
                let a1 = connection.at(start + h * (T::lit(0.5) - gauss_offset));
                let a2 = connection.at(start + h * (T::lit(0.5) + gauss_offset));
                &(&a1 + &a2).scale_real(h * T::lit(0.5))
                    + &a2.commutator(&a1).scale_real(magnus_weight)
            }
        };
        let step = matrix_exponential(&exponent, tol)?;
        product = &step * &product;
    }
    Ok(HolonomyMatrix { matrix: product })
}

/// How the holonomy entering the trace is obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HolonomyMethod {
    Closed,
    PathOrdered {
        steps: usize,
        integrator: PathIntegrator,
    },
}

impl HolonomyMethod {
    pub fn path_ordered(steps: usize) -> Self {
        HolonomyMethod::PathOrdered {
            steps,
            integrator: PathIntegrator::default(),
        }
    }
}

/// Uhlmann phase `arg Tr[rho(phi = 0) H]`, with `rho` normalized to unit trace.
pub fn uhlmann_phase_trace<T: Real>(
    spin: SpinNumber,
    cfg: &LoopConfig<T>,
    method: HolonomyMethod,
) -> Result<PhaseResult<T>> {
    let holonomy = match method {
        HolonomyMethod::Closed => holonomy_closed_form(spin, cfg),
        HolonomyMethod::PathOrdered { steps, integrator } => {
            holonomy_path_ordered_with(spin, cfg, steps, integrator)?
        }
    };
    let rho = gibbs_state(spin, cfg, T::zero())?;
    Ok(PhaseResult::from_amplitude(
        (&rho * &holonomy.matrix).trace(),
    ))
}

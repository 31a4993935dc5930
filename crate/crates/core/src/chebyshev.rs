//! Closed-form Uhlmann phase `arg[(-1)^{2j} U_{2j}(z)]` in terms of the
//! second-kind Chebyshev polynomial of the complex loop variable `z(theta, beta B)`.

use crate::error::{invalid, Error, Result};
use crate::holonomy::PhaseResult;
use crate::scalar::{cos_polar, sin_polar, Cplx, Real};
use crate::spin::SpinNumber;
use crate::thermal::LoopConfig;

/// Half-width of the exclusion zone around `z = +/-1` for the eigenvalue route.
pub const DEGENERATE_Z: f64 = 1e-8;

/// The loop variable `z` and its auxiliary `C(theta)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZPoint<T: Real> {
    pub value: Cplx<T>,
    pub c_factor: T,
}

/// `U_{2j}(z)` obtained from the eigenvalue ladder of the holonomy-weighted state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceValue<T: Real> {
    pub value: Cplx<T>,
}

/// Which square root enters `lambda = z +/- sqrt(z^2 - 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LambdaBranch {
    Principal,
    Flipped,
}

/// `z = cosh(bB/2) cos(pi C) - i sinh(bB/2) sin(pi C) cos(theta) / C` with
/// `C = sqrt(1 - sin^2(theta) tanh^2(bB/2))`.
///
/// `C^2` is evaluated as `cos^2(theta) + sin^2(theta) sech^2(bB/2)` and, for
/// `C > 1/2`, the trigonometric factors are taken about `pi (1 - C)`, so the
/// poles give `z = -cosh(bB/2)` and the equator a real `z` exactly.
pub fn z_variable<T: Real>(cfg: &LoopConfig<T>) -> ZPoint<T> {
    let half = cfg.beta_b() * T::lit(0.5);
    let s = sin_polar(cfg.theta());
    let c = cos_polar(cfg.theta());
    let sech = T::one() / half.cosh();
    let tanh = half.tanh();

    let c_factor = (c * c + s * s * sech * sech).sqrt();
    let (cos_pi_c, sin_pi_c) = if c_factor > T::lit(0.5) {
        let st = s * tanh;
        let one_minus_c = st * st / (T::one() + c_factor);
        let x = T::PI() * one_minus_c;
        (-x.cos(), x.sin())
    } else {
        let x = T::PI() * c_factor;
        (x.cos(), x.sin())
    };

    let re = half.cosh() * cos_pi_c;
    let im = if c == T::zero() {
        T::zero()
    } else {
        -half.sinh() * sin_pi_c * c / c_factor
    };
    ZPoint {
        value: Cplx::new(re, im),
        c_factor,
    }
}

/// `U_n(z)` by the recurrence `U_0 = 1`, `U_1 = 2z`, `U_{k+1} = 2z U_k - U_{k-1}`.
pub fn chebyshev_u<T: Real>(n: i64, z: Cplx<T>) -> Result<Cplx<T>> {
    if n < 0 {
        return invalid(format!("Chebyshev degree must be non-negative, got {n}"));
    }
    let two_z = z + z;
    let mut prev = Cplx::new(T::one(), T::zero());
    if n == 0 {
        return Ok(prev);
    }
    let mut cur = two_z;
    for _ in 1..n {
        let next = two_z * cur - prev;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// The `2j` real roots `cos(k pi / (2j + 1))`, `k = 1..=2j`, in decreasing order.
pub fn chebyshev_roots<T: Real>(spin: SpinNumber) -> Vec<T> {
    let n = spin.two_j() as usize;
    let denom = T::of_usize(n + 1);
    (1..=n)
        .map(|k| (T::of_usize(k) * T::PI() / denom).cos())
        .collect()
}

/// `(lambda^{2j+1} - lambda^{-2j-1}) / (lambda - lambda^{-1})` with the principal root.
pub fn trace_via_lambda<T: Real>(spin: SpinNumber, z: Cplx<T>) -> Result<TraceValue<T>> {
    trace_via_lambda_branch(spin, z, LambdaBranch::Principal)
}

/// As [`trace_via_lambda`] with an explicit choice of square-root branch.
pub fn trace_via_lambda_branch<T: Real>(
    spin: SpinNumber,
    z: Cplx<T>,
    branch: LambdaBranch,
) -> Result<TraceValue<T>> {
    let one = Cplx::new(T::one(), T::zero());
    let delta = T::lit(DEGENERATE_Z);
    if (z - one).norm() <= delta || (z + one).norm() <= delta {
        return Err(Error::DegenerateEigenvalue {
            re: z.re.to_f64().unwrap_or(f64::NAN),
            im: z.im.to_f64().unwrap_or(f64::NAN),
            delta: DEGENERATE_Z,
        });
    }
    let root = (z * z - one).sqrt();
    let root = match branch {
        LambdaBranch::Principal => root,
        LambdaBranch::Flipped => -root,
    };
    let lambda = z + root;
    let inv = one / lambda;
    let power = spin.two_j() + 1;
    let value = (lambda.powu(power) - inv.powu(power)) / (lambda - inv);
    Ok(TraceValue { value })
}

/// `(-1)^{2j} U_{2j}(z(theta, beta B))`, the complex amplitude whose argument is
/// the Uhlmann phase.
pub fn uhlmann_amplitude<T: Real>(spin: SpinNumber, cfg: &LoopConfig<T>) -> Cplx<T> {
    let z = z_variable(cfg).value;
    chebyshev_u(spin.two_j() as i64, z).expect("2j is non-negative") * spin.pauli_sign::<T>()
}

/// Uhlmann phase from the Chebyshev formula; `trace_magnitude` is `|U_{2j}(z)|`.
pub fn uhlmann_phase_closed<T: Real>(spin: SpinNumber, cfg: &LoopConfig<T>) -> PhaseResult<T> {
    PhaseResult::from_amplitude(uhlmann_amplitude(spin, cfg))
}

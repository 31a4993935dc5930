//! Matrix exponential by scaling and squaring with diagonal Pade approximants.
//!
//! Degree selection and the norm thresholds follow Higham, "The scaling and
//! squaring method for the matrix exponential revisited" (SIAM J. Matrix
//! Anal. Appl. 26, 2005). The thresholds are derived for double precision and
//! are conservative for `f32`.

use crate::error::{invalid, Result};
use crate::scalar::Real;

use super::matrix::ComplexMatrix;

/// Default backward-error tolerance for [`matrix_exponential`].
pub const DEFAULT_EXPM_TOL: f64 = 1e-12;

const THETA: [(usize, f64); 4] = [
    (3, 1.495585217958292e-2),
    (5, 2.53939833006323e-1),
    (7, 9.504178996162932e-1),
    (9, 2.097847961257068),
];
const THETA_13: f64 = 5.371920351148152;

const B3: [f64; 4] = [120., 60., 12., 1.];
const B5: [f64; 6] = [30240., 15120., 3360., 420., 30., 1.];
const B7: [f64; 8] = [
    17297280., 8648640., 1995840., 277200., 25200., 1512., 56., 1.,
];
const B9: [f64; 10] = [
    17643225600.,
    8821612800.,
    2075673600.,
    302702400.,
    30270240.,
    2162160.,
    110880.,
    3960.,
    90.,
    1.,
];
const B13: [f64; 14] = [
    64764752532480000.,
    32382376266240000.,
    7771770303897600.,
    1187353796428800.,
    129060195264000.,
    10559470521600.,
    670442572800.,
    33522128640.,
    1323241920.,
    40840800.,
    960960.,
    16380.,
    182.,
    1.,
];

/// Computes `exp(m)`.
///
/// The Pade degree and scaling are chosen so the backward error is at the
/// level of unit roundoff in double precision, which satisfies any `tol`
/// at or above machine epsilon. `tol` must be positive and finite.
pub fn matrix_exponential<T: Real>(m: &ComplexMatrix<T>, tol: T) -> Result<ComplexMatrix<T>> {
    if !m.is_finite() {
        return invalid("matrix exponential of a matrix with non-finite entries");
    }
    if !(tol.is_finite() && tol > T::zero()) {
        return invalid(format!(
            "matrix exponential tolerance must be positive, got {tol}"
        ));
    }
    let n = m.dim();
    if n == 0 {
        return Ok(ComplexMatrix::zeros(0));
    }
    let norm = m.norm_1();
    if norm == T::zero() {
        return Ok(ComplexMatrix::identity(n));
    }

    for &(degree, theta) in &THETA {
        if norm <= T::lit(theta) {
            let (u, v) = pade_low(m, degree);
            return finish(&u, &v, 0);
        }
    }

    let squarings = (norm / T::lit(THETA_13)).log2().ceil().max(T::zero());
    let squarings = squarings.to_u32().unwrap_or(0);
    let scaled = m.scale_real(T::lit(0.5).powi(squarings as i32));
    let (u, v) = pade13(&scaled);
    finish(&u, &v, squarings)
}

fn finish<T: Real>(
    u: &ComplexMatrix<T>,
    v: &ComplexMatrix<T>,
    squarings: u32,
) -> Result<ComplexMatrix<T>> {
    let numer = v + u;
    let denom = v - u;
    let mut r = denom
        .solve(&numer)
        .ok_or_else(|| crate::error::Error::InvalidInput("Pade denominator is singular".into()))?;
    for _ in 0..squarings {
        r = &r * &r;
    }
    Ok(r)
}

fn pade_low<T: Real>(a: &ComplexMatrix<T>, degree: usize) -> (ComplexMatrix<T>, ComplexMatrix<T>) {
    let b: &[f64] = match degree {
        3 => &B3,
        5 => &B5,
        7 => &B7,
        _ => &B9,
    };
    let n = a.dim();
    let a2 = a * a;
    let mut even_power = ComplexMatrix::identity(n);
    let mut u_sum = ComplexMatrix::zeros(n);
    let mut v_sum = ComplexMatrix::zeros(n);
    for k in 0..=degree / 2 {
        if k > 0 {
            even_power = &even_power * &a2;
        }
        v_sum = &v_sum + &even_power.scale_real(T::lit(b[2 * k]));
        u_sum = &u_sum + &even_power.scale_real(T::lit(b[2 * k + 1]));
    }
    (a * &u_sum, v_sum)
}

fn pade13<T: Real>(a: &ComplexMatrix<T>) -> (ComplexMatrix<T>, ComplexMatrix<T>) {
    let b = |k: usize| T::lit(B13[k]);
    let n = a.dim();
    let id = ComplexMatrix::identity(n);
    let a2 = a * a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;

    let inner_u = &(&a6.scale_real(b(13)) + &a4.scale_real(b(11))) + &a2.scale_real(b(9));
    let tail_u = &(&(&a6.scale_real(b(7)) + &a4.scale_real(b(5))) + &a2.scale_real(b(3)))
        + &id.scale_real(b(1));
    let u = a * &(&(&a6 * &inner_u) + &tail_u);

    let inner_v = &(&a6.scale_real(b(12)) + &a4.scale_real(b(10))) + &a2.scale_real(b(8));
    let tail_v = &(&(&a6.scale_real(b(6)) + &a4.scale_real(b(4))) + &a2.scale_real(b(2)))
        + &id.scale_real(b(0));
    let v = &(&a6 * &inner_v) + &tail_v;
    (u, v)
}

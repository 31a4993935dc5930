//! Scalar abstraction shared by every numerical routine in the crate.

use std::fmt::{Debug, Display, LowerExp};

use num_traits::{Float, FloatConst, FromPrimitive};

/// Real floating point type the physics is evaluated in: `f32` or `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + Debug + Display + LowerExp + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal, panicking only for types that cannot hold it.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }

    /// Converts a count or index.
    fn of_usize(n: usize) -> Self {
        Self::from_usize(n).expect("integer representable in scalar type")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Complex number over the crate scalar.
pub type Cplx<T> = num_complex::Complex<T>;

/// `sin(theta)` for a polar angle in `[0, pi]`, exactly zero at both poles.
pub(crate) fn sin_polar<T: Real>(theta: T) -> T {
    if theta > T::FRAC_PI_2() {
        (T::PI() - theta).sin()
    } else {
        theta.sin()
    }
}

/// `cos(theta)` for a polar angle in `[0, pi]`, exactly zero at `pi/2`.
pub(crate) fn cos_polar<T: Real>(theta: T) -> T {
    (T::FRAC_PI_2() - theta).sin()
}

/// Maps an angle to `(-pi, pi]`.
pub fn wrap_phase<T: Real>(angle: T) -> T {
    let two_pi = T::PI() + T::PI();
    let mut a = angle % two_pi;
    if a > T::PI() {
        a = a - two_pi;
    } else if a <= -T::PI() {
        a = a + two_pi;
    }
    a
}

/// Distance between two angles measured on the unit circle, `|e^{ia} - e^{ib}|`.
pub fn circle_distance<T: Real>(a: T, b: T) -> T {
    let d = (a - b) * T::lit(0.5);
    (d.sin() * (T::one() + T::one())).abs()
}

/// Argument of a complex number in `(-pi, pi]`; the negative real axis maps to `+pi`.
pub fn arg<T: Real>(z: Cplx<T>) -> T {
    let a = z.im.atan2(z.re);
    if a <= -T::PI() {
        T::PI()
    } else {
        // Adding +0 turns a signed zero into +0 so outputs never show "-0".
        a + T::zero()
    }
}

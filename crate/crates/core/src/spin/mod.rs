//! Spin-j angular momentum algebra: exact spin labels, the `J_x, J_y, J_z`
//! matrices, Euler rotations and the matrix exponential.
//!
//! Basis convention used throughout the crate: row/column `i` holds the state
//! `|j, m>` with `m = j - i`, i.e. descending `m = j, j-1, ..., -j`.

mod expm;
mod matrix;

use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use serde::{Serialize, Serializer};

use crate::error::{invalid, Error, Result};
use crate::scalar::{Cplx, Real};

pub use expm::{matrix_exponential, DEFAULT_EXPM_TOL};
pub use matrix::ComplexMatrix;

/// Largest supported `2j`; keeps the Hilbert space at most 32-dimensional.
pub const MAX_TWO_J: u32 = 31;

/// Spin quantum number `j`, stored exactly as the integer `2j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SpinNumber {
    two_j: u32,
}

impl SpinNumber {
    pub fn new(two_j: u32) -> Result<Self> {
        if two_j < 1 {
            return invalid("two_j must be ≥ 1");
        }
        if two_j > MAX_TWO_J {
            return invalid(format!("two_j must be ≤ {MAX_TWO_J}, got {two_j}"));
        }
        Ok(Self { two_j })
    }

    /// Every supported spin from `1/2` up to `max_two_j / 2`.
    pub fn up_to(max_two_j: u32) -> impl Iterator<Item = SpinNumber> {
        (1..=max_two_j.min(MAX_TWO_J)).map(|t| SpinNumber { two_j: t })
    }

    pub fn two_j(self) -> u32 {
        self.two_j
    }

    pub fn dimension(self) -> usize {
        self.two_j as usize + 1
    }

    pub fn value<T: Real>(self) -> T {
        T::of_usize(self.two_j as usize) * T::lit(0.5)
    }

    pub fn is_half_integer(self) -> bool {
        self.two_j % 2 == 1
    }

    /// `(-1)^{2j}`: `-1` for half-integer spin, `+1` for integer spin.
    pub fn pauli_sign<T: Real>(self) -> T {
        if self.is_half_integer() {
            -T::one()
        } else {
            T::one()
        }
    }

    /// Magnetic quantum numbers in basis order `j, j-1, ..., -j`.
    pub fn magnetic_numbers<T: Real>(self) -> Vec<T> {
        let j = self.value::<T>();
        (0..self.dimension()).map(|i| j - T::of_usize(i)).collect()
    }
}

impl fmt::Display for SpinNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_half_integer() {
            write!(f, "{}/2", self.two_j)
        } else {
            write!(f, "{}", self.two_j / 2)
        }
    }
}

impl FromStr for SpinNumber {
    type Err = Error;

    /// Accepts `"n/2"` or an integer `"n"`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad =
            || Error::InvalidInput(format!("cannot parse spin '{s}', expected e.g. 3/2 or 1"));
        let two_j = match s.split_once('/') {
            Some((num, den)) => {
                let num: u32 = num.trim().parse().map_err(|_| bad())?;
                let den: u32 = den.trim().parse().map_err(|_| bad())?;
                match den {
                    1 => num.checked_mul(2).ok_or_else(bad)?,
                    2 => num,
                    _ => return Err(bad()),
                }
            }
            None => s
                .parse::<u32>()
                .map_err(|_| bad())?
                .checked_mul(2)
                .ok_or_else(bad)?,
        };
        SpinNumber::new(two_j)
    }
}

impl Serialize for SpinNumber {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Cartesian angular momentum matrices of one spin (with `hbar = 1`).
#[derive(Debug, Clone)]
pub struct AngularMomentum<T: Real> {
    pub jx: ComplexMatrix<T>,
    pub jy: ComplexMatrix<T>,
    pub jz: ComplexMatrix<T>,
}

/// `J_x, J_y, J_z` for spin `j` in the descending-`m` basis, built from the
/// ladder elements `sqrt(j(j+1) - m(m+1))`.
pub fn angular_momentum_matrices<T: Real>(spin: SpinNumber) -> AngularMomentum<T> {
    let n = spin.dimension();
    let j = spin.value::<T>();
    let m = spin.magnetic_numbers::<T>();
    let half = T::lit(0.5);

    let mut jx = ComplexMatrix::zeros(n);
    let mut jy = ComplexMatrix::zeros(n);
    // <m+1| J+ |m> sits at (i - 1, i) because row i - 1 carries m + 1.
    for i in 1..n {
        let mi = m[i];
        let ladder = (j * (j + T::one()) - mi * (mi + T::one())).sqrt();
        let up = ladder * half;
        jx[(i - 1, i)] = Cplx::new(up, T::zero());
        jx[(i, i - 1)] = Cplx::new(up, T::zero());
        // J_y = (J+ - J-) / 2i
        jy[(i - 1, i)] = Cplx::new(T::zero(), -up);
        jy[(i, i - 1)] = Cplx::new(T::zero(), up);
    }
    let jz = ComplexMatrix::from_real_diagonal(&m);
    AngularMomentum { jx, jy, jz }
}

/// Conjugates `mat` by the z rotation: `e^{-i phi J_z} mat e^{i phi J_z}`.
///
/// The rotation is diagonal, so entry `(a, b)` picks up `e^{-i phi (m_a - m_b)}`
/// and diagonal entries are untouched.
pub fn conjugate_by_z_rotation<T: Real>(
    spin: SpinNumber,
    mat: &ComplexMatrix<T>,
    phi: T,
) -> ComplexMatrix<T> {
    assert_eq!(mat.dim(), spin.dimension());
    ComplexMatrix::from_fn(mat.dim(), |a, b| {
        let entry = mat[(a, b)];
        if a == b || entry.is_zero() {
            return entry;
        }
        // m_a - m_b = b - a in the descending basis
        let dm = T::of_usize(b) - T::of_usize(a);
        entry * Cplx::from_polar(T::one(), -phi * dm)
    })
}

/// Wigner small-d matrix `e^{-i theta J_y}`.
pub fn y_rotation<T: Real>(spin: SpinNumber, theta: T) -> ComplexMatrix<T> {
    let jy = angular_momentum_matrices::<T>(spin).jy;
    let generator = jy.scale(Cplx::new(T::zero(), -theta));
    matrix_exponential(&generator, T::lit(DEFAULT_EXPM_TOL)).expect("finite rotation generator")
}

/// Unitary whose `m`-th column is `|j, m; n> = e^{-i phi J_z} e^{-i theta J_y} e^{i phi J_z} |j, m>`,
/// the eigenvector of `n . J` with eigenvalue `m`.
pub fn rotated_eigenbasis<T: Real>(spin: SpinNumber, theta: T, phi: T) -> ComplexMatrix<T> {
    conjugate_by_z_rotation(spin, &y_rotation(spin, theta), phi)
}

/// `n . J` for the unit vector `n = (sin theta cos phi, sin theta sin phi, cos theta)`.
pub fn field_projection<T: Real>(spin: SpinNumber, theta: T, phi: T) -> ComplexMatrix<T> {
    let AngularMomentum { jx, jy, jz } = angular_momentum_matrices::<T>(spin);
    let s = crate::scalar::sin_polar(theta);
    let c = crate::scalar::cos_polar(theta);
    let x = jx.scale_real(s * phi.cos());
    let y = jy.scale_real(s * phi.sin());
    &(&x + &y) + &jz.scale_real(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    type M = ComplexMatrix<f64>;

    fn spins() -> impl Iterator<Item = SpinNumber> {
        SpinNumber::up_to(15)
    }

    fn taylor_exp(m: &M) -> M {
        // Plain power series; fine for the small norms used in these tests.
        let mut sum = M::identity(m.dim());
        let mut term = M::identity(m.dim());
        for k in 1..200 {
            term = (&term * m).scale_real(1.0 / k as f64);
            sum = &sum + &term;
            if term.max_abs() < 1e-20 {
                break;
            }
        }
        sum
    }

    #[test]
    fn spin_parsing_and_display() {
        assert_eq!("3/2".parse::<SpinNumber>().unwrap().two_j(), 3);
        assert_eq!("2".parse::<SpinNumber>().unwrap().two_j(), 4);
        assert_eq!("4/2".parse::<SpinNumber>().unwrap().to_string(), "2");
        assert_eq!(SpinNumber::new(5).unwrap().to_string(), "5/2");
        let err = "0/2".parse::<SpinNumber>().unwrap_err();
        assert!(err.to_string().contains("two_j must be ≥ 1"), "{err}");
        assert!("1/3".parse::<SpinNumber>().is_err());
        assert!("abc".parse::<SpinNumber>().is_err());
        assert!(SpinNumber::new(32).is_err());
        assert_eq!(SpinNumber::new(7).unwrap().dimension(), 8);
    }

    #[test]
    fn spin_half_is_pauli_over_two() {
        let s = SpinNumber::new(1).unwrap();
        let AngularMomentum { jx, jy, jz } = angular_momentum_matrices::<f64>(s);
        assert_eq!(jz[(0, 0)], Cplx::new(0.5, 0.0));
        assert_eq!(jz[(1, 1)], Cplx::new(-0.5, 0.0));
        assert_eq!(jx[(0, 1)], Cplx::new(0.5, 0.0));
        assert_eq!(jx[(1, 0)], Cplx::new(0.5, 0.0));
        assert_eq!(jy[(0, 1)], Cplx::new(0.0, -0.5));
        assert_eq!(jy[(1, 0)], Cplx::new(0.0, 0.5));
    }

    #[test]
    fn su2_commutator_and_casimir() {
        for s in spins() {
            let AngularMomentum { jx, jy, jz } = angular_momentum_matrices::<f64>(s);
            let comm = jx.commutator(&jy);
            let i_jz = jz.scale(Cplx::new(0.0, 1.0));
            assert!(comm.max_abs_diff(&i_jz) < 1e-14, "j = {s}");
            let cas = &(&(&jx * &jx) + &(&jy * &jy)) + &(&jz * &jz);
            let j: f64 = s.value();
            let expect = M::identity(s.dimension()).scale_real(j * (j + 1.0));
            assert!(cas.max_abs_diff(&expect) < 1e-13, "j = {s}");
            assert_eq!(jx.hermitian_defect(), 0.0);
            assert_eq!(jy.hermitian_defect(), 0.0);
            assert_eq!(jz.hermitian_defect(), 0.0);
        }
    }

    #[test]
    fn exp_of_zero_is_identity() {
        let e = matrix_exponential(&M::zeros(4), 1e-12).unwrap();
        assert_eq!(e, M::identity(4));
    }

    #[test]
    fn exp_of_diagonal_spin_half() {
        let s = SpinNumber::new(1).unwrap();
        let jz = angular_momentum_matrices::<f64>(s).jz;
        let two_jz = jz.scale_real(2.0);
        // exp(-i pi 2 J_z) = diag(e^{-i pi}, e^{i pi}) = -I
        let e = matrix_exponential(&two_jz.scale(Cplx::new(0.0, -PI)), 1e-12).unwrap();
        assert!(e.max_abs_diff(&M::identity(2).scale_real(-1.0)) < 1e-15);
        let e = matrix_exponential(&two_jz.scale(Cplx::new(0.0, -PI / 2.0)), 1e-12).unwrap();
        let expect = M::from_diagonal(&[Cplx::new(0.0, -1.0), Cplx::new(0.0, 1.0)]);
        assert!(e.max_abs_diff(&expect) < 1e-15);
    }

    #[test]
    fn exp_matches_taylor_series_for_y_rotation() {
        let s = SpinNumber::new(1).unwrap();
        let jy = angular_momentum_matrices::<f64>(s).jy;
        let m = jy.scale(Cplx::new(0.0, -PI / 3.0));
        let e = matrix_exponential(&m, 1e-12).unwrap();
        let oracle = taylor_exp(&m);
        assert!(e.max_abs_diff(&oracle) < 1e-15);
        assert!((e[(0, 0)].re - (PI / 6.0).cos()).abs() < 1e-15);
        assert!((e[(1, 1)].re - (PI / 6.0).cos()).abs() < 1e-15);
    }

    #[test]
    fn exp_matches_taylor_series_on_general_matrices() {
        for (k, scale) in [0.01, 0.2, 0.9, 1.8].into_iter().enumerate() {
            let m = M::from_fn(5, |i, j| {
                Cplx::new(
                    ((i * 7 + j * 3 + k) % 5) as f64 - 2.0,
                    ((i + 2 * j) % 3) as f64 - 1.0,
                )
                .scale(scale / 5.0)
            });
            let e = matrix_exponential(&m, 1e-12).unwrap();
            let oracle = taylor_exp(&m);
            assert!(
                e.max_abs_diff(&oracle) < 1e-13 * oracle.max_abs().max(1.0),
                "scale {scale}"
            );
        }
    }

    #[test]
    fn exp_rejects_non_finite() {
        let mut m = M::zeros(2);
        m[(0, 1)] = Cplx::new(f64::NAN, 0.0);
        assert!(matches!(
            matrix_exponential(&m, 1e-12),
            Err(Error::InvalidInput(_))
        ));
        assert!(matrix_exponential(&M::zeros(2), 0.0).is_err());
    }

    #[test]
    fn exp_inverse_pairs_up_to_eight_pi() {
        for s in SpinNumber::up_to(7) {
            let AngularMomentum { jx, jy, jz } = angular_momentum_matrices::<f64>(s);
            let gen = &(&jx.scale(Cplx::new(0.3, -1.1)) + &jy.scale(Cplx::new(-0.7, 0.4)))
                + &jz.scale(Cplx::new(0.2, 0.9));
            let norm = gen.norm_1();
            for target in [0.5, PI, 4.0 * PI, 8.0 * PI] {
                let m = gen.scale_real(target / norm);
                let e = matrix_exponential(&m, 1e-12).unwrap();
                let inv = matrix_exponential(&(-&m), 1e-12).unwrap();
                let prod = &e * &inv;
                assert!(
                    prod.max_abs_diff(&M::identity(s.dimension())) < 1e-11,
                    "j = {s}, norm {target}"
                );
            }
        }
    }

    #[test]
    fn rotated_basis_at_north_pole_is_identity() {
        for s in spins() {
            for phi in [0.0, 1.3, 2.0 * PI] {
                let u = rotated_eigenbasis::<f64>(s, 0.0, phi);
                assert_eq!(u, M::identity(s.dimension()), "j = {s}, phi = {phi}");
            }
        }
    }

    #[test]
    fn rotated_basis_on_equator_diagonalizes_jx() {
        for s in spins() {
            let jx = angular_momentum_matrices::<f64>(s).jx;
            let u = rotated_eigenbasis::<f64>(s, PI / 2.0, 0.0);
            let m = s.magnetic_numbers::<f64>();
            for (col, &mv) in m.iter().enumerate() {
                let v = u.column(col);
                let jv = jx.apply(&v);
                let err = jv
                    .iter()
                    .zip(&v)
                    .map(|(a, b)| (a - b * mv).norm())
                    .fold(0.0, f64::max);
                assert!(err < 1e-12, "j = {s}, m = {mv}: {err}");
            }
        }
    }

    #[test]
    fn rotated_basis_is_unitary_and_diagonalizes_field() {
        for s in SpinNumber::up_to(8) {
            let m = s.magnetic_numbers::<f64>();
            for &theta in &[0.0, 0.4, PI / 2.0, 2.2, PI] {
                for &phi in &[0.0, 1.0, 3.5, 2.0 * PI] {
                    let u = rotated_eigenbasis::<f64>(s, theta, phi);
                    assert!(u.unitarity_defect() < 1e-13, "j = {s}");
                    let h = field_projection::<f64>(s, theta, phi);
                    let d = &(&u.adjoint() * &h) * &u;
                    assert!(
                        d.max_abs_diff(&M::from_real_diagonal(&m)) < 1e-12,
                        "j = {s}, theta = {theta}, phi = {phi}"
                    );
                }
            }
        }
    }

    #[test]
    fn y_rotation_matches_wigner_small_d_for_spin_one() {
        let s = SpinNumber::new(2).unwrap();
        let b = 0.77_f64;
        let d = y_rotation::<f64>(s, b);
        let (c, sn) = (b.cos(), b.sin());
        let r2 = 2f64.sqrt();
        // rows/cols ordered m = 1, 0, -1
        let expect = [
            [(1.0 + c) / 2.0, -sn / r2, (1.0 - c) / 2.0],
            [sn / r2, c, -sn / r2],
            [(1.0 - c) / 2.0, sn / r2, (1.0 + c) / 2.0],
        ];
        for i in 0..3 {
            for j in 0..3 {
                assert!((d[(i, j)] - Cplx::new(expect[i][j], 0.0)).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn single_precision_algebra() {
        let s = SpinNumber::new(3).unwrap();
        let AngularMomentum { jx, jy, jz } = angular_momentum_matrices::<f32>(s);
        let comm = jx.commutator(&jy);
        assert!(comm.max_abs_diff(&jz.scale(Cplx::new(0.0, 1.0))) < 1e-6);
        let u = rotated_eigenbasis::<f32>(s, 1.0, 0.5);
        assert!(u.unitarity_defect() < 1e-5);
    }
}

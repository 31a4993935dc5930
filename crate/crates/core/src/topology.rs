//! Topological structure of the Uhlmann phase: critical temperatures on the
//! equator, Uhlmann (winding) numbers of the amplitude curve over
//! `theta in [0, pi]`, and the count of Chebyshev roots enclosed by `z(theta)`.

use rayon::prelude::*;
use serde::Serialize;

use crate::chebyshev::{chebyshev_roots, uhlmann_amplitude, z_variable};
use crate::error::{invalid, Error, Result};
use crate::scalar::{Cplx, Real};
use crate::spin::SpinNumber;
use crate::thermal::LoopConfig;

pub const DEFAULT_SCAN_RANGE: (f64, f64) = (0.01, 20.0);
pub const DEFAULT_SCAN_STEPS: usize = 4000;
pub const DEFAULT_ROOT_TOL: f64 = 1e-13;
/// Half-width in `beta B` of the excluded neighbourhood of each critical value.
pub const CRITICAL_EXCLUSION: f64 = 1e-6;
pub const DEFAULT_WINDING_GRID: usize = 256;
pub const DEFAULT_MAX_REFINE: usize = 30;

const MAX_ROOT_TOL: f64 = 1e-10;
const INTEGER_SLACK: f64 = 0.01;

/// Left-hand side of the critical condition, `cosh(x/2) cos(pi sech(x/2))`:
/// the value of `z` on the equator at `beta B = x`.
pub fn equator_z<T: Real>(beta_b: T) -> T {
    let half = beta_b * T::lit(0.5);
    half.cosh() * (T::PI() / half.cosh()).cos()
}

/// One solution of `equator_z(beta_b) = cos(k pi / (2j + 1))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CriticalEntry<T: Real> {
    pub k: usize,
    pub beta_b: T,
    pub chebyshev_root: T,
}

/// All critical values of one spin, sorted by increasing `beta_b`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriticalTable<T: Real> {
    pub spin: SpinNumber,
    pub entries: Vec<CriticalEntry<T>>,
    /// One message per `k` that produced more than one root.
    pub warnings: Vec<String>,
}

impl<T: Real> CriticalTable<T> {
    pub fn beta_values(&self) -> Vec<T> {
        self.entries.iter().map(|e| e.beta_b).collect()
    }

    /// Error if `beta_b` lies within [`CRITICAL_EXCLUSION`] of a critical value.
    pub fn check_non_critical(&self, beta_b: T) -> Result<()> {
        let zone = T::lit(CRITICAL_EXCLUSION);
        match self
            .entries
            .iter()
            .find(|e| (e.beta_b - beta_b).abs() < zone)
        {
            Some(e) => Err(Error::SingularInput {
                beta_b: beta_b.to_f64().unwrap_or(f64::NAN),
                critical: e.beta_b.to_f64().unwrap_or(f64::NAN),
                zone: CRITICAL_EXCLUSION,
            }),
            None => Ok(()),
        }
    }
}

fn bisect<T: Real>(g: impl Fn(T) -> T, mut lo: T, mut hi: T, tol: T) -> T {
    let mut g_lo = g(lo);
    for _ in 0..200 {
        let mid = (lo + hi) * T::lit(0.5);
        if hi - lo <= tol || mid <= lo || mid >= hi {
            break;
        }
        let g_mid = g(mid);
        if g_mid == T::zero() {
            return mid;
        }
        if (g_mid < T::zero()) == (g_lo < T::zero()) {
            lo = mid;
            g_lo = g_mid;
        } else {
            hi = mid;
        }
    }
    (lo + hi) * T::lit(0.5)
}

/// Every point where the sampled `curve` (values of `f` on `grid`) crosses
/// `level`, each sign change refined by bisection on `f`.
fn level_crossings<T: Real>(
    grid: &[T],
    curve: &[T],
    level: T,
    f: impl Fn(T) -> T,
    tol: T,
) -> Vec<T> {
    let g = |x: T| f(x) - level;
    let last = grid.len() - 1;
    let mut found = Vec::new();
    for i in 0..last {
        let (ga, gb) = (curve[i] - level, curve[i + 1] - level);
        if ga == T::zero() {
            found.push(grid[i]);
        } else if gb != T::zero() && (ga < T::zero()) != (gb < T::zero()) {
            found.push(bisect(g, grid[i], grid[i + 1], tol));
        }
    }
    if curve[last] - level == T::zero() {
        found.push(grid[last]);
    }
    found
}

/// Locates every sign change of `equator_z(x) - cos(k pi / (2j+1))` on a uniform
/// grid over `scan_range` and refines each by bisection down to `tol`.
///
/// Monotonicity of `equator_z` is not assumed; a `k` with several roots gets
/// all of them plus a warning.
pub fn critical_temperatures<T: Real>(
    spin: SpinNumber,
    scan_range: (T, T),
    scan_steps: usize,
    tol: T,
) -> Result<CriticalTable<T>> {
    let (lo, hi) = scan_range;
    if !(lo.is_finite() && hi.is_finite() && lo > T::zero() && hi > lo) {
        return invalid(format!(
            "scan range must satisfy 0 < lo < hi, got ({lo}, {hi})"
        ));
    }
    if scan_steps < 2 {
        return invalid("scan_steps must be at least 2");
    }
    if !(tol > T::zero() && tol <= T::lit(MAX_ROOT_TOL)) {
        return invalid(format!(
            "root tolerance must lie in (0, {MAX_ROOT_TOL:e}], got {tol}"
        ));
    }

    let grid: Vec<T> = (0..=scan_steps)
        .map(|i| lo + (hi - lo) * T::of_usize(i) / T::of_usize(scan_steps))
        .collect();
    let curve: Vec<T> = grid.iter().map(|&x| equator_z(x)).collect();

    let mut entries = Vec::new();
    let mut warnings = Vec::new();
    for (idx, root) in chebyshev_roots::<T>(spin).into_iter().enumerate() {
        let k = idx + 1;
        let found = level_crossings(&grid, &curve, root, equator_z, tol);
        if found.is_empty() {
            return Err(Error::MissingRoot {
                k,
                lo: lo.to_f64().unwrap_or(f64::NAN),
                hi: hi.to_f64().unwrap_or(f64::NAN),
            });
        }
        if found.len() > 1 {
            warnings.push(format!(
                "k = {k}: {} roots found for cos({k} pi / {})",
                found.len(),
                spin.two_j() + 1
            ));
        }
        entries.extend(found.into_iter().map(|beta_b| CriticalEntry {
            k,
            beta_b,
            chebyshev_root: root,
        }));
    }
    entries.sort_by(|a, b| a.beta_b.partial_cmp(&b.beta_b).expect("finite roots"));
    Ok(CriticalTable {
        spin,
        entries,
        warnings,
    })
}

/// [`critical_temperatures`] with the default scan range, grid and tolerance.
pub fn critical_temperatures_default<T: Real>(spin: SpinNumber) -> Result<CriticalTable<T>> {
    critical_temperatures(
        spin,
        (T::lit(DEFAULT_SCAN_RANGE.0), T::lit(DEFAULT_SCAN_RANGE.1)),
        DEFAULT_SCAN_STEPS,
        T::lit(DEFAULT_ROOT_TOL),
    )
}

/// Uhlmann number together with its pre-rounding value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WindingResult<T: Real> {
    pub n_u: u32,
    pub raw_integral: T,
    /// Largest accepted phase increment between neighbouring samples.
    pub max_step_jump: T,
}

struct Accumulated<T> {
    total: T,
    max_jump: T,
}

/// Sums the phase increments of `f` over `theta in [0, pi]`. Each increment is
/// `arg(f(b) conj f(a))`; an interval whose increment reaches `pi/2` is split
/// until it does not, at most `max_refine` times.
fn accumulate_phase<T: Real>(
    f: impl Fn(T) -> Cplx<T>,
    grid: usize,
    max_refine: usize,
) -> Result<Accumulated<T>> {
    let threshold = T::FRAC_PI_2();
    let mut acc = Accumulated {
        total: T::zero(),
        max_jump: T::zero(),
    };
    let mut stack = Vec::new();
    let theta_at = |i: usize| {
        if i == grid {
            T::PI()
        } else {
            T::PI() * T::of_usize(i) / T::of_usize(grid)
        }
    };
    let mut left = (T::zero(), f(T::zero()));
    for i in 1..=grid {
        let right = (theta_at(i), f(theta_at(i)));
        stack.push((left, right, 0usize));
        while let Some(((ta, wa), (tb, wb), depth)) = stack.pop() {
            let inc = (wb * wa.conj()).arg();
            let degenerate = wa.norm() == T::zero() || wb.norm() == T::zero();
            if inc.abs() < threshold && !degenerate {
                acc.total = acc.total + inc;
                acc.max_jump = acc.max_jump.max(inc.abs());
                continue;
            }
            if depth >= max_refine {
                return Err(Error::UnresolvedWinding {
                    theta: ta.to_f64().unwrap_or(f64::NAN),
                    jump: inc.to_f64().unwrap_or(f64::NAN),
                    levels: max_refine,
                });
            }
            let tm = (ta + tb) * T::lit(0.5);
            let mid = (tm, f(tm));
            // right half first so the left half is processed next
            stack.push((mid, (tb, wb), depth + 1));
            stack.push(((ta, wa), mid, depth + 1));
        }
        left = right;
    }
    Ok(acc)
}

fn round_winding<T: Real>(total: T) -> Result<(i64, T)> {
    let raw = total / (T::PI() + T::PI());
    let rounded = raw.round();
    if (raw - rounded).abs() >= T::lit(INTEGER_SLACK) {
        return Err(Error::NonIntegerWinding {
            raw: raw.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok((rounded.to_i64().unwrap_or(i64::MAX), raw))
}

fn check_grid(initial_grid: usize) -> Result<()> {
    if initial_grid < 4 {
        return invalid(format!(
            "winding grid needs at least 4 intervals, got {initial_grid}"
        ));
    }
    Ok(())
}

fn winding_with_table<T: Real>(
    spin: SpinNumber,
    beta_b: T,
    table: &CriticalTable<T>,
    initial_grid: usize,
    max_refine: usize,
) -> Result<WindingResult<T>> {
    check_grid(initial_grid)?;
    if !(beta_b.is_finite() && beta_b > T::zero()) {
        return invalid(format!("beta_b must be finite and > 0, got {beta_b}"));
    }
    table.check_non_critical(beta_b)?;
    let amplitude = |theta: T| {
        let cfg = LoopConfig::new(beta_b, theta).expect("theta within [0, pi]");
        uhlmann_amplitude(spin, &cfg)
    };
    let acc = accumulate_phase(amplitude, initial_grid, max_refine)?;
    let (signed, raw) = round_winding(acc.total)?;
    if signed < 0 {
        return Err(Error::NegativeWinding(signed));
    }
    debug_assert!(signed <= spin.two_j() as i64);
    Ok(WindingResult {
        n_u: signed as u32,
        raw_integral: raw,
        max_step_jump: acc.max_jump,
    })
}

/// Uhlmann number: winding of `(-1)^{2j} U_{2j}(z(theta))` about the origin as
/// `theta` runs over `[0, pi]`, i.e. the total change of the Uhlmann phase
/// divided by `2 pi`.
pub fn winding_number<T: Real>(
    spin: SpinNumber,
    beta_b: T,
    initial_grid: usize,
    max_refine: usize,
) -> Result<WindingResult<T>> {
    let table = critical_temperatures_default(spin)?;
    winding_with_table(spin, beta_b, &table, initial_grid, max_refine)
}

/// Number of Chebyshev roots `cos(k pi / (2j+1))` around which the closed curve
/// `z(theta)` winds once.
pub fn roots_enclosed<T: Real>(spin: SpinNumber, beta_b: T, grid: usize) -> Result<usize> {
    let table = critical_temperatures_default(spin)?;
    roots_enclosed_with_table(spin, beta_b, &table, grid)
}

fn roots_enclosed_with_table<T: Real>(
    spin: SpinNumber,
    beta_b: T,
    table: &CriticalTable<T>,
    grid: usize,
) -> Result<usize> {
    check_grid(grid)?;
    if !(beta_b.is_finite() && beta_b > T::zero()) {
        return invalid(format!("beta_b must be finite and > 0, got {beta_b}"));
    }
    table.check_non_critical(beta_b)?;
    let mut count = 0;
    for root in chebyshev_roots::<T>(spin) {
        let shifted = |theta: T| {
            let cfg = LoopConfig::new(beta_b, theta).expect("theta within [0, pi]");
            z_variable(&cfg).value - Cplx::new(root, T::zero())
        };
        let acc = accumulate_phase(shifted, grid, DEFAULT_MAX_REFINE)?;
        let (w, _) = round_winding(acc.total)?;
        if w.abs() == 1 {
            count += 1;
        }
    }
    Ok(count)
}

/// Uhlmann number at each `beta_b` of the grid, in grid order.
pub fn staircase<T: Real>(spin: SpinNumber, beta_b_grid: &[T]) -> Result<Vec<(T, u32)>> {
    let table = critical_temperatures_default(spin)?;
    beta_b_grid
        .par_iter()
        .map(|&bb| {
            winding_with_table(spin, bb, &table, DEFAULT_WINDING_GRID, DEFAULT_MAX_REFINE)
                .map(|w| (bb, w.n_u))
        })
        .collect()
}

/// Argument-principle counterpart of [`staircase`], sharing one critical table.
pub fn enclosed_staircase<T: Real>(spin: SpinNumber, beta_b_grid: &[T]) -> Result<Vec<(T, usize)>> {
    let table = critical_temperatures_default(spin)?;
    beta_b_grid
        .par_iter()
        .map(|&bb| {
            roots_enclosed_with_table(spin, bb, &table, DEFAULT_WINDING_GRID).map(|n| (bb, n))
        })
        .collect()
}

//! Cross-checks between the independent routes: spectral vs closed-form
//! connection, path-ordered vs closed-form holonomy, Chebyshev vs trace phase,
//! and winding number vs enclosed-root count.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::chebyshev::uhlmann_phase_closed;
use crate::holonomy::{
    connection_closed_form, connection_spectral, holonomy_closed_form, holonomy_path_ordered,
    uhlmann_phase_trace, HolonomyMethod, PhaseResult, DEFAULT_FD_STEP, DEFAULT_PATH_STEPS,
};
use crate::scalar::circle_distance;
use crate::spin::SpinNumber;
use crate::thermal::LoopConfig;
use crate::topology::{
    critical_temperatures_default, roots_enclosed, winding_number, DEFAULT_MAX_REFINE,
    DEFAULT_WINDING_GRID,
};

pub const CONNECTION_TOL: f64 = 1e-9;
pub const HOLONOMY_TOL: f64 = 1e-8;
pub const PHASE_CLOSED_TOL: f64 = 1e-8;
pub const PHASE_PATH_TOL: f64 = 1e-7;

/// Signature of a closed-form phase engine under test.
pub type ClosedPhaseFn = fn(SpinNumber, &LoopConfig<f64>) -> PhaseResult<f64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ValidationLevel {
    /// `j <= 3/2`, coarse grids.
    Quick,
    /// `j <= 3`, 4096 path-ordered steps.
    Full,
}

impl ValidationLevel {
    fn max_two_j(self) -> u32 {
        match self {
            ValidationLevel::Quick => 3,
            ValidationLevel::Full => 6,
        }
    }

    fn path_steps(self) -> usize {
        match self {
            ValidationLevel::Quick => 512,
            ValidationLevel::Full => DEFAULT_PATH_STEPS,
        }
    }

    fn thetas(self) -> Vec<f64> {
        vec![0.1, PI / 4.0, PI / 2.0, 2.7]
    }

    fn beta_bs(self) -> Vec<f64> {
        match self {
            ValidationLevel::Quick => vec![0.5, 2.0, 8.0],
            ValidationLevel::Full => vec![0.3, 1.0, 2.0, 3.5, 8.0, 15.0],
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub name: &'static str,
    pub points: usize,
    pub max_error: f64,
    pub tolerance: f64,
    /// First parameter point that exceeded the tolerance.
    pub failure: Option<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }

    fn from_points(name: &'static str, tolerance: f64, results: Vec<(String, f64)>) -> Self {
        let max_error = results.iter().map(|r| r.1).fold(0.0, f64::max);
        let failure = results
            .iter()
            .find(|(_, e)| e.is_nan() || *e >= tolerance)
            .map(|(p, e)| format!("{p}: error {e:.3e}"));
        Self {
            name,
            points: results.len(),
            max_error,
            tolerance,
            failure,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub suites: Vec<SuiteReport>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(SuiteReport::passed)
    }
}

fn spins(level: ValidationLevel) -> Vec<SpinNumber> {
    SpinNumber::up_to(level.max_two_j()).collect()
}

fn loop_points(level: ValidationLevel) -> Vec<(SpinNumber, f64, f64)> {
    let mut out = Vec::new();
    for s in spins(level) {
        for &theta in &level.thetas() {
            for &bb in &level.beta_bs() {
                out.push((s, theta, bb));
            }
        }
    }
    out
}

fn cfg(bb: f64, theta: f64) -> LoopConfig<f64> {
    LoopConfig::new(bb, theta).expect("validation grid inside domain")
}

fn connection_suite(level: ValidationLevel) -> SuiteReport {
    let mut points = Vec::new();
    for (s, theta, bb) in loop_points(level) {
        for phi in [0.0, 1.0, 4.0] {
            points.push((s, theta, bb, phi));
        }
    }
    let results = points
        .into_par_iter()
        .map(|(s, theta, bb, phi)| {
            let c = cfg(bb, theta);
            let closed = connection_closed_form(s, &c, phi).coefficient;
            let spectral = match connection_spectral(s, &c, phi, DEFAULT_FD_STEP) {
                Ok(a) => a.coefficient,
                Err(_) => {
                    return (
                        format!("j={s} theta={theta} beta_b={bb} phi={phi}"),
                        f64::INFINITY,
                    )
                }
            };
            let err = closed
                .max_abs_diff(&spectral)
                .max(closed.anti_hermitian_defect())
                .max(spectral.anti_hermitian_defect());
            (format!("j={s} theta={theta} beta_b={bb} phi={phi}"), err)
        })
        .collect();
    SuiteReport::from_points("connection", CONNECTION_TOL, results)
}

fn holonomy_suite(level: ValidationLevel) -> SuiteReport {
    let steps = level.path_steps();
    let results = loop_points(level)
        .into_par_iter()
        .map(|(s, theta, bb)| {
            let c = cfg(bb, theta);
            let closed = holonomy_closed_form(s, &c).matrix;
            let err = match holonomy_path_ordered(s, &c, steps) {
                Ok(h) => h.matrix.max_abs_diff(&closed),
                Err(_) => f64::INFINITY,
            };
            (
                format!("j={s} theta={theta} beta_b={bb} steps={steps}"),
                err,
            )
        })
        .collect();
    SuiteReport::from_points("holonomy", HOLONOMY_TOL, results)
}

fn phase_suite(level: ValidationLevel, engine: ClosedPhaseFn) -> (SuiteReport, SuiteReport) {
    let steps = level.path_steps();
    let rows: Vec<(String, f64, f64)> = loop_points(level)
        .into_par_iter()
        .map(|(s, theta, bb)| {
            let c = cfg(bb, theta);
            let label = format!("j={s} theta={theta} beta_b={bb}");
            let cheb = engine(s, &c);
            let closed = uhlmann_phase_trace(s, &c, HolonomyMethod::Closed);
            let path = uhlmann_phase_trace(s, &c, HolonomyMethod::path_ordered(steps));
            match (closed, path) {
                (Ok(closed), Ok(path)) => {
                    if cheb.singular || closed.singular || path.singular {
                        (label, 0.0, 0.0)
                    } else {
                        (
                            label,
                            circle_distance(cheb.phase, closed.phase),
                            circle_distance(cheb.phase, path.phase),
                        )
                    }
                }
                _ => (label, f64::INFINITY, f64::INFINITY),
            }
        })
        .collect();
    let closed = rows.iter().map(|(l, a, _)| (l.clone(), *a)).collect();
    let path = rows.into_iter().map(|(l, _, b)| (l, b)).collect();
    (
        SuiteReport::from_points("phase_trace_closed", PHASE_CLOSED_TOL, closed),
        SuiteReport::from_points("phase_trace_path_ordered", PHASE_PATH_TOL, path),
    )
}

fn winding_suite(level: ValidationLevel) -> SuiteReport {
    let mut points = Vec::new();
    for s in spins(level) {
        let table = match critical_temperatures_default::<f64>(s) {
            Ok(t) => t,
            Err(e) => {
                return SuiteReport {
                    name: "winding",
                    points: 0,
                    max_error: f64::INFINITY,
                    tolerance: 0.5,
                    failure: Some(format!("j={s}: {e}")),
                }
            }
        };
        let crit = table.beta_values();
        // one probe inside every interval between and around critical values
        let mut probes = vec![crit[0] * 0.5];
        probes.extend(crit.windows(2).map(|w| 0.5 * (w[0] + w[1])));
        probes.push(crit[crit.len() - 1] + 2.0);
        points.extend(probes.into_iter().map(|bb| (s, bb)));
    }
    let results = points
        .into_par_iter()
        .map(|(s, bb)| {
            let label = format!("j={s} beta_b={bb}");
            let w = winding_number::<f64>(s, bb, DEFAULT_WINDING_GRID, DEFAULT_MAX_REFINE);
            let r = roots_enclosed::<f64>(s, bb, DEFAULT_WINDING_GRID);
            let err = match (w, r) {
                (Ok(w), Ok(r)) => (w.n_u as f64 - r as f64)
                    .abs()
                    .max((w.raw_integral - w.n_u as f64).abs()),
                _ => f64::INFINITY,
            };
            (label, err)
        })
        .collect();
    SuiteReport::from_points("winding", 0.01, results)
}

/// Runs every suite with the production Chebyshev engine.
pub fn run_validation(level: ValidationLevel) -> ValidationReport {
    run_validation_with(level, uhlmann_phase_closed::<f64>)
}

/// Runs every suite, comparing `engine` against the trace routes.
pub fn run_validation_with(level: ValidationLevel, engine: ClosedPhaseFn) -> ValidationReport {
    let (phase_closed, phase_path) = phase_suite(level, engine);
    ValidationReport {
        suites: vec![
            connection_suite(level),
            holonomy_suite(level),
            phase_closed,
            phase_path,
            winding_suite(level),
        ],
    }
}

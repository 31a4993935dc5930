//! Subcommand bodies: validate inputs, evaluate rows (in parallel, collected in
//! input order), and render a [`Document`].

use rayon::prelude::*;
use serde_json::{json, Value};

use uhlmann::chebyshev::chebyshev_roots;
use uhlmann::holonomy::{DEFAULT_PATH_STEPS, MIN_PATH_STEPS};
use uhlmann::topology::critical_temperatures_default;
use uhlmann::validate::{run_validation, ValidationLevel, ValidationReport};
use uhlmann::{winding_number, z_variable, Error, LoopConfig, PhaseEngine, SpinNumber};

use crate::args::{EngineArg, LevelArg, Param};
use crate::output::{Cell, Document, Table};

/// Failure of a subcommand; maps onto the process exit code.
#[derive(Debug)]
pub enum CliError {
    /// Invalid arguments: exit 2.
    Usage(String),
    /// Numerical failure: exit 1.
    Compute(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Compute(_) => 1,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Compute(m) => m,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Compute(e.to_string())
    }
}

pub type CmdResult<T> = Result<T, CliError>;

pub fn select_engine(engine: EngineArg, steps: Option<usize>) -> CmdResult<PhaseEngine> {
    match (engine, steps) {
        (EngineArg::Chebyshev, None) => Ok(PhaseEngine::Chebyshev),
        (EngineArg::TraceClosed, None) => Ok(PhaseEngine::TraceClosed),
        (EngineArg::TracePathOrdered, steps) => {
            let steps = steps.unwrap_or(DEFAULT_PATH_STEPS);
            if steps < MIN_PATH_STEPS {
                return Err(CliError::Usage(format!(
                    "--steps must be ≥ {MIN_PATH_STEPS}, got {steps}"
                )));
            }
            Ok(PhaseEngine::TracePathOrdered { steps })
        }
        (_, Some(_)) => Err(CliError::Usage(
            "--steps only applies to --engine trace_path_ordered".into(),
        )),
    }
}

fn engine_spec(engine: PhaseEngine) -> (Value, Value) {
    let steps = match engine {
        PhaseEngine::TracePathOrdered { steps } => json!(steps),
        _ => Value::Null,
    };
    (json!(engine.name()), steps)
}

fn loop_config(beta_b: f64, theta: f64) -> CmdResult<LoopConfig> {
    LoopConfig::new(beta_b, theta).map_err(|e| CliError::Usage(e.to_string()))
}

fn check_configs(thetas: &[f64], beta_bs: &[f64]) -> CmdResult<()> {
    for &t in thetas {
        for &b in beta_bs {
            loop_config(b, t)?;
        }
    }
    Ok(())
}

pub fn phase_scan(
    spin: SpinNumber,
    theta: Param,
    beta_b: Param,
    engine: PhaseEngine,
) -> CmdResult<Document> {
    let theta_value = theta.as_value().ok_or_else(|| {
        CliError::Usage("phase-scan takes a single --theta; use grid for theta ranges".into())
    })?;
    let beta_bs = beta_b.values();
    check_configs(&[theta_value], &beta_bs)?;

    let results = beta_bs
        .par_iter()
        .map(|&bb| engine.evaluate(spin, &LoopConfig::new(bb, theta_value)?))
        .collect::<Result<Vec<_>, _>>()?;

    let mut table = Table::new(&["beta_b", "phase", "trace_magnitude", "singular"]);
    for (bb, r) in beta_bs.iter().zip(results) {
        table.push(vec![
            Cell::Num(*bb),
            Cell::Num(r.phase),
            Cell::Num(r.trace_magnitude),
            Cell::Bool(r.singular),
        ]);
    }
    let (name, steps) = engine_spec(engine);
    let spec = json!({
        "command": "phase-scan",
        "j": spin.to_string(),
        "theta": theta,
        "beta_b": beta_b,
        "engine": name,
        "steps": steps,
    });
    Ok(Document::new(spec, table))
}

pub fn grid(
    spin: SpinNumber,
    theta: Param,
    beta_b: Param,
    engine: PhaseEngine,
) -> CmdResult<Document> {
    let (Some(_), Some(_)) = (theta.as_range(), beta_b.as_range()) else {
        return Err(CliError::Usage(
            "grid needs ranges start:stop:count for both --theta and --beta-b".into(),
        ));
    };
    let thetas = theta.values();
    let beta_bs = beta_b.values();
    check_configs(&thetas, &beta_bs)?;

    let points: Vec<(f64, f64)> = thetas
        .iter()
        .flat_map(|&t| beta_bs.iter().map(move |&b| (t, b)))
        .collect();
    let results = points
        .par_iter()
        .map(|&(t, b)| engine.evaluate(spin, &LoopConfig::new(b, t)?))
        .collect::<Result<Vec<_>, _>>()?;

    let mut table = Table::new(&["theta", "beta_b", "phase", "singular"]);
    for ((t, b), r) in points.iter().zip(results) {
        table.push(vec![
            Cell::Num(*t),
            Cell::Num(*b),
            Cell::Num(r.phase),
            Cell::Bool(r.singular),
        ]);
    }
    let (name, steps) = engine_spec(engine);
    let spec = json!({
        "command": "grid",
        "j": spin.to_string(),
        "theta": theta,
        "beta_b": beta_b,
        "engine": name,
        "steps": steps,
    });
    Ok(Document::new(spec, table))
}

pub fn critical_temps(spin: SpinNumber) -> CmdResult<(Document, Vec<String>)> {
    let table = critical_temperatures_default::<f64>(spin)?;
    let mut rows = Table::new(&["k", "beta_b", "chebyshev_root"]);
    for e in &table.entries {
        rows.push(vec![
            Cell::Int(e.k as i64),
            Cell::Num(e.beta_b),
            Cell::Num(e.chebyshev_root),
        ]);
    }
    let spec = json!({ "command": "critical-temps", "j": spin.to_string() });
    Ok((Document::new(spec, rows), table.warnings))
}

pub fn winding(
    spin: SpinNumber,
    beta_b: Param,
    initial_grid: usize,
    max_refine: usize,
) -> CmdResult<Document> {
    let beta_bs = beta_b.values();
    if let Some(bad) = beta_bs.iter().find(|b| **b <= 0.0) {
        return Err(CliError::Usage(format!("beta_b must be > 0, got {bad}")));
    }
    if initial_grid < 4 {
        return Err(CliError::Usage(format!(
            "--initial-grid must be ≥ 4, got {initial_grid}"
        )));
    }
    let results: Vec<_> = beta_bs
        .par_iter()
        .map(|&bb| winding_number::<f64>(spin, bb, initial_grid, max_refine))
        .collect();

    let mut table = Table::new(&["beta_b", "n_u", "raw_integral", "singular"]);
    for (bb, r) in beta_bs.iter().zip(results) {
        let row = match r {
            Ok(w) => vec![
                Cell::Num(*bb),
                Cell::Int(w.n_u as i64),
                Cell::Num(w.raw_integral),
                Cell::Bool(false),
            ],
            Err(Error::SingularInput { .. }) => {
                vec![Cell::Num(*bb), Cell::Empty, Cell::Empty, Cell::Bool(true)]
            }
            Err(e) => return Err(CliError::Compute(format!("beta_b = {bb}: {e}"))),
        };
        table.push(row);
    }
    let spec = json!({
        "command": "winding",
        "j": spin.to_string(),
        "beta_b": beta_b,
        "initial_grid": initial_grid,
        "max_refine": max_refine,
    });
    Ok(Document::new(spec, table))
}

pub fn argand(spin: SpinNumber, beta_bs: &[f64], grid: usize) -> CmdResult<Document> {
    if grid < 2 {
        return Err(CliError::Usage(format!("--grid must be ≥ 2, got {grid}")));
    }
    let thetas = Param::Range(crate::args::Range {
        start: 0.0,
        stop: std::f64::consts::PI,
        count: grid,
    })
    .values();
    check_configs(&thetas, beta_bs)?;

    let mut table = Table::new(&["beta_b", "theta", "re_z", "im_z"]);
    for &bb in beta_bs {
        for &t in &thetas {
            let z = z_variable(&LoopConfig::new(bb, t)?).value;
            table.push(vec![
                Cell::Num(bb),
                Cell::Num(t),
                Cell::Num(z.re),
                Cell::Num(z.im),
            ]);
        }
    }
    let mut roots = Table::new(&["k", "root"]);
    for (i, r) in chebyshev_roots::<f64>(spin).into_iter().enumerate() {
        roots.push(vec![Cell::Int(i as i64 + 1), Cell::Num(r)]);
    }
    let spec = json!({
        "command": "argand",
        "j": spin.to_string(),
        "beta_b": beta_bs,
        "grid": grid,
    });
    let mut doc = Document::new(spec, table);
    doc.companions.push(("roots", roots));
    Ok(doc)
}

pub fn validate(level: LevelArg) -> ValidationReport {
    run_validation(match level {
        LevelArg::Quick => ValidationLevel::Quick,
        LevelArg::Full => ValidationLevel::Full,
    })
}

pub fn format_report(report: &ValidationReport) -> String {
    let mut out = String::new();
    for s in &report.suites {
        out.push_str(&format!(
            "{:<26} points={:<5} max_error={:.3e} tol={:.1e} {}\n",
            s.name,
            s.points,
            s.max_error,
            s.tolerance,
            if s.passed() { "PASS" } else { "FAIL" }
        ));
    }
    out
}

//! Acceptance gate: one PASS/FAIL line per criterion, each with its pinned
//! tolerance and runtime budget. Exits non-zero if any criterion fails.

use std::f64::consts::PI;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use uhlmann::chebyshev::{chebyshev_u, trace_via_lambda};
use uhlmann::holonomy::{holonomy_closed_form, holonomy_path_ordered, DEFAULT_FD_STEP};
use uhlmann::topology::{critical_temperatures_default, enclosed_staircase, staircase};
use uhlmann::{
    circle_distance, connection_closed_form, connection_spectral, uhlmann_phase_closed,
    uhlmann_phase_trace, z_variable, Complex64, HolonomyMethod, LoopConfig, SpinNumber,
};

type Outcome = Result<String, String>;
type Criterion = (u32, &'static str, Duration, fn() -> Outcome);

const SWEEP_THETAS: [f64; 4] = [0.3, PI / 4.0, PI / 2.0, 2.5];
const SWEEP_BETA_BS: [f64; 6] = [0.25, 0.9, 2.0, 3.3, 7.5, 14.0];

fn spins() -> Vec<SpinNumber> {
    SpinNumber::up_to(6).collect()
}

fn sweep() -> Vec<(SpinNumber, LoopConfig)> {
    let mut points = Vec::new();
    for s in spins() {
        for &t in &SWEEP_THETAS {
            for &b in &SWEEP_BETA_BS {
                points.push((s, LoopConfig::new(b, t).unwrap()));
            }
        }
    }
    points
}

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn equator_phase(s: SpinNumber, beta_b: f64) -> f64 {
    uhlmann_phase_closed(s, &LoopConfig::new(beta_b, PI / 2.0).unwrap()).phase
}

fn spin_half_critical() -> Outcome {
    let table =
        critical_temperatures_default::<f64>("1/2".parse().unwrap()).map_err(|e| e.to_string())?;
    let expected = 2.0 * (2.0 + 3f64.sqrt()).ln();
    let got = table
        .entries
        .first()
        .map(|e| e.beta_b)
        .ok_or("no critical value")?;
    let err = (got - expected).abs();
    check(
        table.entries.len() == 1 && err < 1e-9,
        format!("beta_c = {got:.12}, |error| = {err:.2e} (tol 1e-9)"),
    )
}

fn critical_counts_and_flips() -> Outcome {
    let mut worst_flip = f64::INFINITY;
    for s in spins() {
        let table = critical_temperatures_default::<f64>(s).map_err(|e| format!("j={s}: {e}"))?;
        let betas = table.beta_values();
        if betas.len() != s.two_j() as usize {
            return Err(format!(
                "j={s}: {} critical values, expected {}",
                betas.len(),
                s.two_j()
            ));
        }
        if betas.iter().any(|b| !(*b > 0.01 && *b <= 20.0)) {
            return Err(format!(
                "j={s}: critical value outside (0.01, 20]: {betas:?}"
            ));
        }
        for &b in &betas {
            let delta = 1e-4;
            let (lo, hi) = (equator_phase(s, b - delta), equator_phase(s, b + delta));
            let binary = |p: f64| p.abs() < 1e-9 || (p - PI).abs() < 1e-9;
            if !(binary(lo) && binary(hi)) {
                return Err(format!(
                    "j={s} beta_c={b}: phases {lo}, {hi} not in {{0, pi}}"
                ));
            }
            worst_flip = worst_flip.min(circle_distance(lo, hi));
        }
    }
    check(
        worst_flip > 2.0 - 1e-9,
        format!(
            "2j roots for every j <= 3; smallest |phase jump| chord = {worst_flip:.12} (expect 2)"
        ),
    )
}

fn chebyshev_vs_path_ordered() -> Outcome {
    let errors: Vec<Result<Option<f64>, String>> = sweep()
        .par_iter()
        .map(|(s, cfg)| {
            let trace = uhlmann_phase_trace(*s, cfg, HolonomyMethod::path_ordered(4096))
                .map_err(|e| e.to_string())?;
            let cheb = uhlmann_phase_closed(*s, cfg);
            if trace.singular || cheb.singular {
                return Ok(None);
            }
            Ok(Some(circle_distance(trace.phase, cheb.phase)))
        })
        .collect();
    let mut max = 0.0f64;
    let mut used = 0;
    for e in errors {
        if let Some(e) = e? {
            max = max.max(e);
            used += 1;
        }
    }
    check(
        max < 1e-7,
        format!("{used} points, max |dPhi| = {max:.2e} (tol 1e-7, 4096 steps)"),
    )
}

fn spectral_vs_closed_connection() -> Outcome {
    let errors: Vec<Result<f64, String>> = sweep()
        .par_iter()
        .flat_map(|(s, cfg)| {
            [0.0, 1.3, 4.4].into_par_iter().map(move |phi| {
                let closed = connection_closed_form(*s, cfg, phi);
                let spectral = connection_spectral(*s, cfg, phi, DEFAULT_FD_STEP)
                    .map_err(|e| e.to_string())?;
                Ok(closed.coefficient.max_abs_diff(&spectral.coefficient))
            })
        })
        .collect();
    let n = errors.len();
    let max = errors
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .fold(0.0, f64::max);
    check(
        max < 1e-9,
        format!("{n} connections, max entry difference = {max:.2e} (tol 1e-9, fd 1e-6)"),
    )
}

fn temperature_limits() -> Outcome {
    let thetas: Vec<f64> = (0..19).map(|i| PI * i as f64 / 18.0).collect();
    let (mut hot, mut cold) = (0.0f64, 0.0f64);
    for s in spins() {
        let j = s.value::<f64>();
        for &t in &thetas {
            hot = hot.max(
                uhlmann_phase_closed(s, &LoopConfig::new(0.01, t).unwrap())
                    .phase
                    .abs(),
            );
            let berry = 2.0 * j * PI * (1.0 - t.cos());
            let phase = uhlmann_phase_closed(s, &LoopConfig::new(30.0, t).unwrap()).phase;
            cold = cold.max(circle_distance(phase, berry));
        }
    }
    check(
        hot < 1e-3 && cold < 2e-3,
        format!("max |Phi| at 0.01 = {hot:.2e} (tol 1e-3); max distance to 2j pi(1 - cos) at 30 = {cold:.2e} (tol 2e-3)"),
    )
}

fn winding_staircase() -> Outcome {
    let grid: Vec<f64> = (0..400).map(|i| 0.1 + 7.9 * i as f64 / 399.0).collect();
    let spacing = grid[1] - grid[0];
    for s in spins() {
        let steps = staircase(s, &grid).map_err(|e| format!("j={s}: {e}"))?;
        let enclosed = enclosed_staircase(s, &grid).map_err(|e| format!("j={s}: {e}"))?;
        let roots = critical_temperatures_default::<f64>(s)
            .map_err(|e| e.to_string())?
            .beta_values();
        let n: Vec<u32> = steps.iter().map(|x| x.1).collect();
        if n[0] != 0 || *n.last().unwrap() != s.two_j() {
            return Err(format!(
                "j={s}: staircase runs {} -> {}",
                n[0],
                n.last().unwrap()
            ));
        }
        let mut jumps = Vec::new();
        for (i, w) in n.windows(2).enumerate() {
            match w[1] as i64 - w[0] as i64 {
                0 => {}
                1 => jumps.push(i),
                d => return Err(format!("j={s}: step of {d} at beta_b = {}", grid[i])),
            }
        }
        if jumps.len() != roots.len() {
            return Err(format!(
                "j={s}: {} steps for {} roots",
                jumps.len(),
                roots.len()
            ));
        }
        for (&i, &r) in jumps.iter().zip(&roots) {
            if !(grid[i] - 1e-12 <= r && r <= grid[i + 1] + 1e-12) {
                return Err(format!(
                    "j={s}: step in [{}, {}] misses root {r}",
                    grid[i],
                    grid[i + 1]
                ));
            }
        }
        if let Some(((b, w), _)) = steps
            .iter()
            .zip(&enclosed)
            .find(|((_, w), (_, e))| *w as usize != *e)
        {
            return Err(format!(
                "j={s} beta_b={b}: winding {w} differs from enclosed-root count"
            ));
        }
    }
    check(
        true,
        format!("j <= 3 on {} points (spacing {spacing:.3}): monotone unit steps at roots, winding == enclosed", grid.len()),
    )
}

fn invariants() -> Outcome {
    let (mut anti, mut unit, mut det) = (0.0f64, 0.0f64, 0.0f64);
    for (s, cfg) in sweep() {
        for phi in [0.0, 2.1, 5.0] {
            anti = anti.max(
                connection_closed_form(s, &cfg, phi)
                    .coefficient
                    .anti_hermitian_defect(),
            );
        }
        let closed = holonomy_closed_form(s, &cfg).matrix;
        let path = holonomy_path_ordered(s, &cfg, 256)
            .map_err(|e| e.to_string())?
            .matrix;
        unit = unit
            .max(closed.unitarity_defect())
            .max(path.unitarity_defect());
        det = det.max((closed.determinant() - Complex64::new(1.0, 0.0)).norm());
    }

    let mut rng = ChaCha8Rng::seed_from_u64(0xacce97);
    let mut lambda = 0.0f64;
    for _ in 0..100 {
        let z = Complex64::from_polar(3.0 * rng.gen::<f64>().sqrt(), rng.gen_range(-PI..PI));
        for s in spins() {
            let via = trace_via_lambda(s, z).map_err(|e| e.to_string())?.value;
            let rec = chebyshev_u(s.two_j() as i64, z).map_err(|e| e.to_string())?;
            lambda = lambda.max((via - rec).norm() / rec.norm().max(1.0));
        }
    }

    let mut closure = 0.0f64;
    for b in [0.01, 0.5, 2.0, 2.633915793849633, 5.0, 30.0] {
        let z0 = z_variable(&LoopConfig::new(b, 0.0).unwrap()).value;
        let zpi = z_variable(&LoopConfig::new(b, PI).unwrap()).value;
        closure = closure.max((z0 - zpi).norm());
    }

    check(
        anti < 1e-12 && unit < 1e-9 && det < 1e-10 && lambda < 1e-10 && closure < 1e-12,
        format!(
            "anti-Hermitian {anti:.1e} (1e-12), unitarity {unit:.1e} (1e-9), det {det:.1e} (1e-10), \
             lambda {lambda:.1e} (1e-10), closure {closure:.1e} (1e-12)"
        ),
    )
}

fn cli_determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let specs: [&[&str]; 5] = [
        &[
            "grid", "--j", "3/2", "--theta", "0:pi:37", "--beta-b", "0.1:8:40", "--format", "csv",
        ],
        &[
            "phase-scan",
            "--j",
            "2",
            "--theta",
            "pi/3",
            "--beta-b",
            "0.1:8:50",
            "--engine",
            "trace_path_ordered",
            "--steps",
            "256",
            "--format",
            "json",
        ],
        &[
            "winding", "--j", "1", "--beta-b", "0.5:6:24", "--format", "json",
        ],
        &["critical-temps", "--j", "3", "--format", "csv"],
        &[
            "argand",
            "--j",
            "3/2",
            "--beta-b",
            "0.5,2.2,2.8,5",
            "--grid",
            "91",
            "--format",
            "json",
        ],
    ];
    for (i, spec) in specs.iter().enumerate() {
        let mut files = Vec::new();
        for (run, threads) in ["1", "3", "3"].iter().enumerate() {
            let path = dir.path().join(format!("{i}-{run}.out"));
            let status = Command::new(env!("CARGO_BIN_EXE_uhlmann"))
                .args(*spec)
                .arg("--output")
                .arg(&path)
                .env("UHLMANN_THREADS", threads)
                .status()
                .map_err(|e| e.to_string())?;
            if !status.success() {
                return Err(format!("{spec:?} exited with {status}"));
            }
            files.push(std::fs::read(&path).map_err(|e| e.to_string())?);
        }
        if files.iter().any(|f| *f != files[0]) {
            return Err(format!("{spec:?}: outputs differ between runs"));
        }
    }
    check(
        true,
        format!(
            "{} specs x 3 runs (1 and 3 threads) byte-identical",
            specs.len()
        ),
    )
}

fn main() {
    let criteria: [Criterion; 8] = [
        (
            1,
            "spin-1/2 critical temperature",
            Duration::from_secs(1),
            spin_half_critical,
        ),
        (
            2,
            "2j critical values with equatorial phase flips",
            Duration::from_secs(10),
            critical_counts_and_flips,
        ),
        (
            3,
            "Chebyshev vs path-ordered trace phase",
            Duration::from_secs(300),
            chebyshev_vs_path_ordered,
        ),
        (
            4,
            "spectral vs closed-form connection",
            Duration::from_secs(60),
            spectral_vs_closed_connection,
        ),
        (
            5,
            "high- and low-temperature limits",
            Duration::from_secs(30),
            temperature_limits,
        ),
        (
            6,
            "Uhlmann-number staircase",
            Duration::from_secs(120),
            winding_staircase,
        ),
        (
            7,
            "structural invariants",
            Duration::from_secs(30),
            invariants,
        ),
        (
            8,
            "CLI determinism",
            Duration::from_secs(60),
            cli_determinism,
        ),
    ];
    let mut failed = 0;
    for (id, name, budget, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let (ok, detail) = match outcome {
            Ok(d) if elapsed <= budget => (true, d),
            Ok(d) => (false, format!("{d}; over budget")),
            Err(d) => (false, d),
        };
        if !ok {
            failed += 1;
        }
        println!(
            "{} criterion {id} ({name}): {detail} [{:.2}s / {}s]",
            if ok { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            budget.as_secs()
        );
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}

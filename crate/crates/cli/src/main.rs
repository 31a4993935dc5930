//! `uhlmann` command-line tool: scans of the Uhlmann phase, critical
//! temperatures, Uhlmann numbers and the z-curve, plus the oracle validation
//! suites.

mod args;
mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use uhlmann::SpinNumber;

use args::{
    parse_angle_param, parse_number, parse_number_param, EngineArg, Format, LevelArg, Param,
};
use commands::{CliError, CmdResult};
use output::{emit, Document};

/// Environment variable fixing the number of worker threads.
const THREADS_ENV: &str = "UHLMANN_THREADS";

#[derive(Parser)]
#[command(
    name = "uhlmann",
    version,
    about = "Uhlmann phase of a thermal spin-j in a rotating magnetic field"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Phase versus beta*B at fixed theta.
    PhaseScan(ScanArgs),
    /// Phase over a (theta, beta*B) grid, row-major in theta.
    Grid(ScanArgs),
    /// Critical beta*B values where the equatorial phase flips.
    CriticalTemps(CriticalArgs),
    /// Uhlmann numbers (winding numbers) versus beta*B.
    Winding(WindingArgs),
    /// The z(theta) curve and the Chebyshev roots it may enclose.
    Argand(ArgandArgs),
    /// Run the cross-route validation suites.
    Validate(ValidateArgs),
}

fn parse_spin(s: &str) -> Result<SpinNumber, String> {
    s.parse::<SpinNumber>().map_err(|e| e.to_string())
}

#[derive(Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Destination file; standard output when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ScanArgs {
    /// Spin, e.g. 1/2, 1, 3/2.
    #[arg(long = "j", value_parser = parse_spin)]
    j: SpinNumber,
    /// Polar angle or range start:stop:count (accepts pi, pi/2, pi/4, decimals).
    #[arg(long, value_parser = parse_angle_param, allow_hyphen_values = true)]
    theta: Param,
    /// beta*B value or range start:stop:count.
    #[arg(long = "beta-b", value_parser = parse_number_param, allow_hyphen_values = true)]
    beta_b: Param,
    #[arg(long, value_enum, default_value = "chebyshev")]
    engine: EngineArg,
    /// Azimuthal steps; trace_path_ordered only (default 4096).
    #[arg(long)]
    steps: Option<usize>,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct CriticalArgs {
    #[arg(long = "j", value_parser = parse_spin)]
    j: SpinNumber,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct WindingArgs {
    #[arg(long = "j", value_parser = parse_spin)]
    j: SpinNumber,
    #[arg(long = "beta-b", value_parser = parse_number_param, allow_hyphen_values = true)]
    beta_b: Param,
    /// Initial number of theta intervals.
    #[arg(long, default_value_t = uhlmann::topology::DEFAULT_WINDING_GRID)]
    initial_grid: usize,
    /// Maximum bisection depth for large phase steps.
    #[arg(long, default_value_t = uhlmann::topology::DEFAULT_MAX_REFINE)]
    max_refine: usize,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct ArgandArgs {
    #[arg(long = "j", value_parser = parse_spin)]
    j: SpinNumber,
    /// Comma-separated beta*B values.
    #[arg(long = "beta-b", value_parser = parse_number, value_delimiter = ',', required = true, allow_hyphen_values = true)]
    beta_b: Vec<f64>,
    /// Number of theta samples over [0, pi], endpoints included.
    #[arg(long, default_value_t = 181)]
    grid: usize,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct ValidateArgs {
    #[arg(long, value_enum, default_value = "quick")]
    level: LevelArg,
}

fn write_doc(doc: &Document, out: &OutputArgs) -> CmdResult<()> {
    emit(&doc.render(out.format), out.output.as_deref())
        .map_err(|e| CliError::Compute(format!("cannot write output: {e}")))
}

fn configure_threads() -> CmdResult<()> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = raw.trim().parse().map_err(|_| {
        CliError::Usage(format!(
            "{THREADS_ENV} must be a positive integer, got '{raw}'"
        ))
    })?;
    if n == 0 {
        return Err(CliError::Usage(format!(
            "{THREADS_ENV} must be a positive integer, got '{raw}'"
        )));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Compute(e.to_string()))
}

fn run(cli: Cli) -> CmdResult<()> {
    configure_threads()?;
    match cli.command {
        Command::PhaseScan(a) => {
            let engine = commands::select_engine(a.engine, a.steps)?;
            write_doc(
                &commands::phase_scan(a.j, a.theta, a.beta_b, engine)?,
                &a.out,
            )
        }
        Command::Grid(a) => {
            let engine = commands::select_engine(a.engine, a.steps)?;
            write_doc(&commands::grid(a.j, a.theta, a.beta_b, engine)?, &a.out)
        }
        Command::CriticalTemps(a) => {
            let (doc, warnings) = commands::critical_temps(a.j)?;
            for w in warnings {
                eprintln!("warning: {w}");
            }
            write_doc(&doc, &a.out)
        }
        Command::Winding(a) => write_doc(
            &commands::winding(a.j, a.beta_b, a.initial_grid, a.max_refine)?,
            &a.out,
        ),
        Command::Argand(a) => write_doc(&commands::argand(a.j, &a.beta_b, a.grid)?, &a.out),
        Command::Validate(a) => {
            let report = commands::validate(a.level);
            print!("{}", commands::format_report(&report));
            match report.suites.iter().find(|s| !s.passed()) {
                None => Ok(()),
                Some(s) => Err(CliError::Compute(format!(
                    "suite {} failed at {}",
                    s.name,
                    s.failure.as_deref().unwrap_or("?")
                ))),
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

//! `krein-photon`: runs verification suites and single checks from the
//! command line.
//!
//! Exit codes: 0 when every check passes, 1 when a check fails or a
//! numerical error occurs, 2 for configuration and I/O errors.

mod commands;
mod parse;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use krein_photon::harness::{ReportFormat, SuiteConfig};
use krein_photon::wavefunction::StateSpec;
use krein_photon::Error;

#[derive(Parser, Debug)]
#[command(
    name = "krein-photon",
    version,
    about = "Verification harness for the Krein-space photon formalism"
)]
struct Cli {
    /// Suite configuration (JSON); defaults are used for missing fields.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Random seed, overriding the configuration.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory for reports and matrix dumps, overriding the configuration.
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
    /// Report format for suite commands: json, csv or markdown.
    #[arg(long, global = true, default_value = "json")]
    format: String,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct GridArg {
    /// Grid configuration (JSON object with angular_order, radial_order, ir_cutoff, uv_cutoff).
    #[arg(long)]
    grid: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the selected suites (all suites of the configuration by default).
    RunAll {
        /// Suite to run; repeat to select several.
        #[arg(long = "suite")]
        suites: Vec<String>,
    },
    /// Run the eigensystem suite: geometry, quadrature and weight-matrix checks.
    VerifyEigensystem,
    /// Run the transversal suite.
    VerifyTransversal,
    /// Compare Krein and Hilbert products before and after a boost.
    VerifyIsometry {
        #[arg(long, default_value_t = 0.7, allow_hyphen_values = true)]
        boost_rapidity: f64,
        /// x, y, z or a comma-separated direction.
        #[arg(long, default_value = "z")]
        axis: String,
        /// State such as "tplus*gauss_ir + gauge_high*exp_ir:2".
        #[arg(long, default_value = "tplus*gauss_ir + gauge_high*exp_ir")]
        state: StateSpec,
        #[command(flatten)]
        grid: GridArg,
    },
    /// Sample the Wigner rotation block of a group element as CSV.
    ExtractTheta {
        /// Product of factors kind:axis:parameter, e.g. "boost:z:0.7*rotation:x:0.3".
        #[arg(long, default_value = "boost:z:0.7*rotation:x:0.3")]
        alpha: String,
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
    /// Decide membership of a library test function in the zero-mass class.
    CheckS0 {
        #[arg(long)]
        profile: String,
        #[arg(long, default_value_t = 4)]
        order: u32,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        /// Restrict a function on R⁴ to the cone before checking.
        #[arg(long)]
        restrict: bool,
    },
    /// Position-space value of a state or four-component library function.
    Fourier {
        #[arg(long)]
        profile: String,
        /// Comma-separated "t,x,y,z".
        #[arg(long, default_value = "0,0,0,0", allow_hyphen_values = true)]
        x: String,
        #[command(flatten)]
        grid: GridArg,
    },
    /// Build a truncated Fock sector and report all residuals as JSON.
    VerifyFock {
        /// Comma-separated four-component library functions; the default
        /// uses all atoms, unshifted and shifted.
        #[arg(long)]
        modes: Option<String>,
        #[arg(long, default_value_t = 2)]
        cutoff: usize,
        /// Write the mode symmetry and η as CSV into the output directory.
        #[arg(long)]
        dump_matrices: bool,
        #[command(flatten)]
        grid: GridArg,
    },
    /// Dump B(p), its eigensystem and J'(p) as JSON.
    DumpMatrix {
        /// Comma-separated spatial momentum "p1,p2,p3".
        #[arg(long, allow_hyphen_values = true)]
        p: String,
    },
    /// Dump the quadrature grid as CSV.
    DumpGrid {
        #[command(flatten)]
        grid: GridArg,
    },
}

/// Text for stdout and whether every check passed.
pub struct Outcome {
    pub text: String,
    pub passed: bool,
}

fn settings(cli: &Cli) -> krein_photon::Result<(SuiteConfig, ReportFormat)> {
    let mut cfg = match &cli.config {
        Some(path) => SuiteConfig::load(path)?,
        None => SuiteConfig::default(),
    };
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(dir) = &cli.out_dir {
        cfg.out_dir = dir.clone();
    }
    Ok((cfg, cli.format.parse()?))
}

fn run(cli: Cli) -> krein_photon::Result<Outcome> {
    let (mut cfg, format) = settings(&cli)?;
    match cli.command {
        Command::RunAll { suites } => {
            if !suites.is_empty() {
                cfg.suites = suites;
            }
            commands::suites(&cfg, format)
        }
        Command::VerifyEigensystem => {
            cfg.suites = vec!["eigensystem".into()];
            commands::suites(&cfg, format)
        }
        Command::VerifyTransversal => {
            cfg.suites = vec!["transversal".into()];
            commands::suites(&cfg, format)
        }
        Command::VerifyIsometry {
            boost_rapidity,
            axis,
            state,
            grid,
        } => commands::isometry(&cfg, boost_rapidity, &axis, &state, grid.grid.as_deref()),
        Command::ExtractTheta { alpha, samples } => commands::theta(&cfg, &alpha, samples),
        Command::CheckS0 {
            profile,
            order,
            tol,
            restrict,
        } => commands::check_s0(&profile, order, tol, restrict),
        Command::Fourier { profile, x, grid } => {
            commands::fourier(&cfg, &profile, &x, grid.grid.as_deref())
        }
        Command::VerifyFock {
            modes,
            cutoff,
            dump_matrices,
            grid,
        } => commands::fock(
            &cfg,
            modes.as_deref(),
            cutoff,
            dump_matrices,
            grid.grid.as_deref(),
        ),
        Command::DumpMatrix { p } => commands::dump_matrix(&p),
        Command::DumpGrid { grid } => commands::dump_grid(&cfg, grid.grid.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            print!("{}", out.text);
            if !out.text.ends_with('\n') {
                println!();
            }
            ExitCode::from(if out.passed { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::Config(_) | Error::Io(_) => 2,
                _ => 1,
            })
        }
    }
}

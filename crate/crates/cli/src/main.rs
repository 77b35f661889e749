//! `klein`: command-line front end for klein-core.

mod commands;
mod error;
mod input;
mod plot;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use klein_core::holonomy::{DEFAULT_STEPS, HOLONOMY_TOL};
use klein_core::Integrator;

use commands::{Ctx, Mode, Output, PathArg};
use error::CliError;

#[derive(Parser, Debug)]
#[command(name = "klein", version, about = "Real line and vector bundles on Klein bottles")]
struct Cli {
    /// Modulus τ > 0 of the lattice ⟨1, iτ⟩.
    #[arg(long, global = true, allow_negative_numbers = true, default_value_t = 1.0)]
    tau: f64,
    /// Exact rational coordinates (default).
    #[arg(long, global = true, conflicts_with = "float")]
    exact: bool,
    /// Floating-point coordinates with tolerance bands.
    #[arg(long, global = true)]
    float: bool,
    /// Emit the JSON document instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Integration steps per path segment.
    #[arg(long, global = true, default_value_t = DEFAULT_STEPS)]
    steps: usize,
    /// Tolerance for comparing integrated and closed-form holonomy.
    #[arg(long, global = true, default_value_t = HOLONOMY_TOL)]
    tol: f64,
    /// Output file (the SVG path for `plot`).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum IntegratorArg {
    ExponentialMidpoint,
    ExplicitMidpoint,
}

impl From<IntegratorArg> for Integrator {
    fn from(a: IntegratorArg) -> Self {
        match a {
            IntegratorArg::ExponentialMidpoint => Integrator::ExponentialMidpoint,
            IntegratorArg::ExplicitMidpoint => Integrator::ExplicitMidpoint,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Classify a line bundle class relative to σ_d.
    LineClassify {
        #[arg(long, allow_negative_numbers = true)]
        d: i64,
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
        /// Also integrate the transport ODE for the obstruction scalar.
        #[arg(long)]
        integrate: bool,
    },
    /// List the r-torsion subgroup of Pic0.
    Torsion {
        #[arg(long)]
        r: u32,
        /// Only the real points (b = 0).
        #[arg(long)]
        real: bool,
    },
    /// Integrate parallel transport of a flat connection.
    Holonomy {
        #[arg(long, allow_hyphen_values = true)]
        z0: String,
        #[arg(long, value_enum, default_value = "unit-loop")]
        path: PathArg,
        #[arg(long, value_enum, default_value = "exponential-midpoint")]
        integrator: IntegratorArg,
    },
    /// Classify a real rank-2 descriptor (JSON, or @file).
    Rank2Classify {
        #[arg(long)]
        desc: String,
    },
    /// Test two descriptors for isomorphism.
    IsoTest {
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
    },
    /// Describe the moduli of stable real bundles; with --a, key a point.
    ModuliReport {
        #[arg(long)]
        r: u32,
        #[arg(long, allow_negative_numbers = true)]
        d: i64,
        #[arg(long, allow_hyphen_values = true)]
        a: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        b: Option<String>,
    },
    /// Build the stable real bundle W ⊗ φ(t) by pushforward.
    Construct {
        #[arg(long)]
        r: u32,
        #[arg(long, allow_negative_numbers = true)]
        d: i64,
        #[arg(long, allow_hyphen_values = true, default_value = "0")]
        t: String,
    },
    /// Fixed circles of conjugation on Pic0/Γ_r, r odd.
    FixedLocus {
        #[arg(long)]
        r: u32,
        /// Sample this many points per circle.
        #[arg(long, default_value_t = 0)]
        grid: u32,
    },
    /// Write an SVG of the fundamental domain plus a CSV twin.
    Plot {
        #[arg(long, allow_negative_numbers = true, default_value_t = 0)]
        d: i64,
        #[arg(long, default_value_t = 1)]
        r: u32,
    },
}

fn run(cli: &Cli) -> Result<Output, CliError> {
    let ctx = Ctx {
        tau: cli.tau,
        mode: if cli.float { Mode::Float } else { Mode::Exact },
        steps: cli.steps,
        tol: cli.tol,
    };
    match &cli.command {
        Command::LineClassify { d, a, b, integrate } => commands::line_classify(&ctx, *d, a, b, *integrate),
        Command::Torsion { r, real } => commands::torsion(*r, *real),
        Command::Holonomy { z0, path, integrator } => commands::holonomy(&ctx, z0, *path, (*integrator).into()),
        Command::Rank2Classify { desc } => commands::rank2_classify(desc),
        Command::IsoTest { left, right } => commands::iso_test(left, right),
        Command::ModuliReport { r, d, a, b } => commands::moduli_report(&ctx, *r, *d, a.as_deref(), b.as_deref()),
        Command::Construct { r, d, t } => commands::construct(&ctx, *r, *d, t),
        Command::FixedLocus { r, grid } => commands::fixed_locus(&ctx, *r, *grid),
        Command::Plot { d, r } => {
            let out = cli
                .out
                .as_deref()
                .ok_or_else(|| CliError::Usage("plot needs --out <file.svg>".into()))?;
            commands::plot(&ctx, *d, *r, out)
        }
    }
}

fn fail(err: &CliError, json: bool) -> ExitCode {
    if json {
        let doc = serde_json::to_string_pretty(&err.report()).expect("error reports serialize");
        println!("{doc}");
    } else {
        eprintln!("error: {err}");
    }
    ExitCode::from(err.exit_code() as u8)
}

fn main() -> ExitCode {
    let json_requested = std::env::args().any(|a| a == "--json");
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() && json_requested => {
            let message = e.to_string();
            let first = message.lines().next().unwrap_or_default();
            return fail(&CliError::Usage(first.trim_start_matches("error: ").to_string()), true);
        }
        Err(e) => e.exit(),
    };
    let output = match run(&cli) {
        Ok(o) => o,
        Err(e) => return fail(&e, cli.json),
    };
    let body = if cli.json { output.json } else { output.text };
    let is_plot = matches!(cli.command, Command::Plot { .. });
    match (&cli.out, is_plot) {
        (Some(path), false) => {
            if let Err(e) = fs::write(path, format!("{body}\n")) {
                return fail(&CliError::from(e), cli.json);
            }
        }
        _ => println!("{body}"),
    }
    ExitCode::SUCCESS
}

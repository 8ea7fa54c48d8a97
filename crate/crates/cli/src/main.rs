use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use whitehead_cli::commands::{self, PolyFormat};
use whitehead_cli::sweep::{self, SweepSpec};
use whitehead_cli::verify::{self, parse_suites};
use whitehead_cli::{CliError, Output, Settings};

const SUITES: [&str; 8] = ["resultant", "symmetries", "roots", "preps", "seifert", "linear", "cohomology", "all"];

/// Seminorms, p-rep polynomials and representation checks for fillings of the Whitehead link.
#[derive(Parser)]
#[command(name = "whitehead", version)]
struct Cli {
    #[command(flatten)]
    tol: Tolerances,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Tolerances {
    /// Relative residual accepted for polished roots.
    #[arg(long, global = true, default_value_t = 1e-10)]
    root_tol: f64,
    /// Relative distance below which root approximations are merged.
    #[arg(long, global = true, default_value_t = 1e-7)]
    cluster_tol: f64,
    /// Relative residual accepted for reconstructed representations.
    #[arg(long, global = true, default_value_t = 1e-8)]
    residual_tol: f64,
}

#[derive(Args)]
struct Filling {
    #[arg(allow_negative_numbers = true)]
    p: i64,
    #[arg(allow_negative_numbers = true)]
    q: i64,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Seminorm coefficients, s_min and optionally the norm of a slope.
    Norm {
        #[command(flatten)]
        f: Filling,
        /// `a/b`, an integer, or `inf`.
        #[arg(long, allow_hyphen_values = true)]
        slope: Option<String>,
    },
    /// The normalized p-rep polynomial.
    Respq {
        #[command(flatten)]
        f: Filling,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Roots of the p-rep polynomial.
    Roots {
        #[command(flatten)]
        f: Filling,
        /// Also write `re,im` plot data to this file.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// One p-rep per conjugacy class, with residuals.
    Preps {
        #[command(flatten)]
        f: Filling,
    },
    /// Runs verification suites; exits 2 if any fails.
    Verify {
        #[command(flatten)]
        f: Filling,
        #[arg(long = "suite", value_parser = SUITES)]
        suites: Vec<String>,
    },
    /// Runs suites over a range of fillings and writes one CSV row per coprime pair.
    Sweep {
        #[arg(long, allow_negative_numbers = true)]
        p_min: i64,
        #[arg(long, allow_negative_numbers = true)]
        p_max: i64,
        #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
        q_min: i64,
        #[arg(long, allow_negative_numbers = true)]
        q_max: i64,
        #[arg(long)]
        out: PathBuf,
        /// Skip even p.
        #[arg(long)]
        odd_only: bool,
        #[arg(long = "suite", value_parser = SUITES)]
        suites: Vec<String>,
    },
}

fn settings(t: &Tolerances) -> Result<Settings, CliError> {
    for (name, v) in [("root-tol", t.root_tol), ("cluster-tol", t.cluster_tol), ("residual-tol", t.residual_tol)] {
        if !(v.is_finite() && v > 0.0) {
            return Err(CliError::Validation(format!("--{name} must be positive, got {v}")));
        }
    }
    let mut s = Settings::default();
    s.roots.residual = t.root_tol;
    s.roots.cluster = t.cluster_tol;
    s.reps.residual = t.residual_tol;
    Ok(s)
}

fn run(cli: Cli) -> Result<Output, CliError> {
    let s = settings(&cli.tol)?;
    match cli.command {
        Command::Norm { f, slope } => commands::norm(f.p, f.q, slope.as_deref()),
        Command::Respq { f, format } => {
            let format = match format {
                Format::Json => PolyFormat::Json,
                Format::Text => PolyFormat::Text,
            };
            commands::respq(f.p, f.q, format)
        }
        Command::Roots { f, csv } => commands::roots(f.p, f.q, csv.as_deref(), &s),
        Command::Preps { f } => commands::preps(f.p, f.q, &s),
        Command::Verify { f, suites } => verify::verify(f.p, f.q, &parse_suites(&suites)?, &s),
        Command::Sweep { p_min, p_max, q_min, q_max, out, odd_only, suites } => {
            let spec = SweepSpec { p_min, p_max, q_min, q_max, odd_only, suites: parse_suites(&suites)? };
            sweep::sweep(&spec, &out, &s)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match run(cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(out.stdout.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return ExitCode::from(4);
            }
            ExitCode::from(out.code as u8)
        }
        Err(e) => {
            eprintln!("whitehead: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

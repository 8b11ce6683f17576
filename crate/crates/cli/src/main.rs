//! `levi`: batch front end for the jet Levi normalization engine.
//!
//! Exit codes: 0 when every check passes, 1 when a check fails, 2 for
//! usage and parse errors.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use levi_core::ce::ModuleKind;
use levi_core::io::{load_problem, run_command, Command, CommandOptions, IoError, ModeName};
use levi_core::rational::{parse_rational, RationalString};
use levi_core::schedule::Variant;

#[derive(Parser)]
#[command(name = "levi", version, about = "Exact jet-level Levi normalization of Poisson structures and Lie algebroids")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check structure constants, the linear part and the Jacobi identity.
    Validate(Opts),
    /// Bring a Poisson structure (or algebroid) to Levi normal form.
    Normalize(Opts),
    /// Normalize a Lie algebroid given as a problem of kind "algebroid".
    Algebroid(Opts),
    /// Verify the homotopy identity and tabulate cohomology dimensions.
    Cohomology(Opts),
    /// Print the iteration constants and, with --t0, the schedule.
    Schedule(Opts),
    /// Audit the norm and smoothing inequalities on random jets.
    Axioms(Opts),
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Formal,
    Scheduled,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Main,
    Appendix,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Functions,
    Yfields,
    FiberwiseLinear,
    BaseFunctions,
}

#[derive(Args)]
struct Opts {
    /// Problem file (JSON).
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    /// Truncation degree D; overrides the file.
    #[arg(long)]
    degree: Option<u32>,
    /// Initial schedule parameter, a rational such as 16 or 33/2.
    #[arg(long, value_parser = rational)]
    t0: Option<RationalString>,
    #[arg(long)]
    max_steps: Option<usize>,
    /// Write the report here instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum)]
    variant: Option<VariantArg>,
    /// Extra smoothness for the appendix variant.
    #[arg(long, value_parser = rational)]
    tau: Option<RationalString>,
    /// Dimension for `schedule` and `axioms` without an input file.
    #[arg(long)]
    n: Option<usize>,
    /// Random samples (axioms; cohomology instead of spanning sets).
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Module for `cohomology`.
    #[arg(long, value_enum)]
    kind: Option<KindArg>,
    /// Record wall-clock time; the report is then no longer reproducible.
    #[arg(long)]
    timing: bool,
}

fn rational(s: &str) -> Result<RationalString, String> {
    parse_rational(s).map(RationalString).map_err(|e| e.to_string())
}

impl Opts {
    fn options(&self) -> CommandOptions {
        CommandOptions {
            mode: self.mode.map(|m| match m {
                ModeArg::Formal => ModeName::Formal,
                ModeArg::Scheduled => ModeName::Scheduled,
            }),
            degree: self.degree,
            t0: self.t0.clone(),
            max_steps: self.max_steps,
            variant: self.variant.map(|v| match v {
                VariantArg::Main => Variant::MainText,
                VariantArg::Appendix => Variant::Appendix,
            }),
            tau: self.tau.clone(),
            n: self.n,
            samples: self.samples,
            seed: self.seed,
            kind: self.kind.map(|k| match k {
                KindArg::Functions => ModuleKind::Functions,
                KindArg::Yfields => ModuleKind::YFields,
                KindArg::FiberwiseLinear => ModuleKind::FiberwiseLinear,
                KindArg::BaseFunctions => ModuleKind::BaseFunctions,
            }),
            timing: self.timing,
        }
    }
}

fn execute(command: Command, opts: &Opts) -> Result<i32, IoError> {
    let input = opts.input.as_deref().map(load_problem).transpose()?;
    let report = run_command(command, input.as_ref(), &opts.options())?;
    let json = report.to_json();
    match &opts.output {
        Some(path) => {
            std::fs::write(path, json).map_err(|e| IoError::File {
                path: path.display().to_string(),
                message: e.to_string(),
            })?;
            eprintln!("{}: {}", command.name(), if report.passed { "pass" } else { "FAIL" });
        }
        None => print!("{json}"),
    }
    Ok(report.exit_code())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, opts) = match &cli.command {
        Cmd::Validate(o) => (Command::Validate, o),
        Cmd::Normalize(o) => (Command::Normalize, o),
        Cmd::Algebroid(o) => (Command::Algebroid, o),
        Cmd::Cohomology(o) => (Command::Cohomology, o),
        Cmd::Schedule(o) => (Command::Schedule, o),
        Cmd::Axioms(o) => (Command::Axioms, o),
    };
    match execute(command, opts) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

//! Command-line interface: index computations and oracle validation over
//! problem files.
//!
//! Exit codes are a stable contract: 0 success, 1 input error, 2
//! mathematical precondition failure, 3 validation mismatch.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use phindex_core::error::Error;
use phindex_core::indices::Variant;
use phindex_core::report::{
    parse_rat, run_algebra, run_elk, run_gsv, run_oracle_curve, run_oracle_degree, run_sigma,
    run_validate, IndexReport, OrderChoice, ProblemFile, ValidationSummary,
};

#[derive(Parser)]
#[command(
    name = "phindex",
    about = "Exact indices of polynomial vector fields: Poincare-Hopf via algebra signatures, \
             real and complex GSV indices on singular hypersurfaces, and definition-based \
             degree oracles",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RunArgs {
    /// problem file (key-value document; see the bundled corpus/ examples)
    problem: PathBuf,
    /// odd-parity assembly: `reduced` (default, oracle-calibrated) or `as-published`
    #[arg(long)]
    variant: Option<String>,
    /// basis engine: `local` (germ at the origin) or `global` (affine)
    #[arg(long)]
    order: Option<String>,
    /// half-width of the oracle box, as an exact rational p/q
    #[arg(long = "box-radius")]
    box_radius: Option<String>,
    /// fiber level for the curve oracle, as an exact rational p/q; its sign
    /// selects the side
    #[arg(long, allow_hyphen_values = true)]
    epsilon: Option<String>,
    /// include the Gram matrix of the main bilinear form in the report
    #[arg(long = "show-gram")]
    show_gram: bool,
    /// run the definition-based oracle and report the comparison
    #[arg(long)]
    oracle: bool,
    /// replace X by the pairwise-Hamiltonian field of f
    #[arg(long)]
    hamiltonian: bool,
    /// emit the report as JSON
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Poincare-Hopf index of X from the signature of the Jacobian-positive form
    Elk(RunArgs),
    /// real and complex GSV indices of a tangent pair (f, X)
    Gsv(RunArgs),
    /// flag subspaces and signature vector attached to f
    Sigma(RunArgs),
    /// quotient algebra diagnostics: dimension, basis, socle
    Algebra(RunArgs),
    /// definition-based validators
    #[command(subcommand)]
    Oracle(OracleCommand),
    /// run a corpus of problem files against their expect-* annotations
    Validate {
        /// directory of *.problem files
        corpus: PathBuf,
        /// emit the summary as JSON
        #[arg(long)]
        json: bool,
    },
}

#[derive(Subcommand)]
enum OracleCommand {
    /// topological degree of X over a box, by boundary subdivision
    Degree(RunArgs),
    /// fiber-smoothing GSV count for a plane curve (side = sign of epsilon)
    CurveGsv(RunArgs),
}

fn apply_overrides(problem: &mut ProblemFile, args: &RunArgs) -> Result<(), Error> {
    if let Some(v) = &args.variant {
        problem.variant = Variant::parse(v)?;
    }
    if let Some(o) = &args.order {
        problem.order = OrderChoice::parse(o)?;
    }
    if let Some(r) = &args.box_radius {
        problem.box_radius = parse_rat(r)?;
    }
    if let Some(e) = &args.epsilon {
        problem.epsilon = parse_rat(e)?;
    }
    if args.show_gram {
        problem.show_gram = true;
    }
    if args.oracle {
        problem.oracle = true;
    }
    if args.hamiltonian {
        problem.hamiltonian = true;
    }
    Ok(())
}

fn exit_code_for(e: &Error) -> ExitCode {
    if e.is_math_failure() {
        ExitCode::from(2)
    } else {
        ExitCode::from(1)
    }
}

fn run_command(args: &RunArgs, runner: fn(&ProblemFile) -> Result<IndexReport, Error>) -> ExitCode {
    let mut problem = match ProblemFile::from_path(&args.problem) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {}", e);
            return ExitCode::from(1);
        }
    };
    if let Err(e) = apply_overrides(&mut problem, args) {
        eprintln!("error: {}", e);
        return ExitCode::from(1);
    }
    match runner(&problem) {
        Ok(report) => {
            if args.json {
                println!("{}", report.to_json());
            } else {
                print!("{}", report.render_text());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {}", e);
            exit_code_for(&e)
        }
    }
}

fn print_validation(summary: &ValidationSummary, json: bool) {
    if json {
        println!(
            "{}",
            serde_json::to_string_pretty(summary).expect("summary serializes")
        );
        return;
    }
    let width = summary
        .rows
        .iter()
        .map(|r| r.file.len())
        .max()
        .unwrap_or(4)
        .max(4);
    println!(
        "{:<width$}  {:<22}  {:<14}  {:<14}  result",
        "file",
        "check",
        "expected",
        "actual",
        width = width
    );
    for row in &summary.rows {
        println!(
            "{:<width$}  {:<22}  {:<14}  {:<14}  {}",
            row.file,
            row.check,
            row.expected,
            row.actual,
            if row.pass { "pass" } else { "FAIL" },
            width = width
        );
    }
    println!("{} passed, {} failed", summary.passed, summary.failed);
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match &cli.command {
        Command::Elk(args) => run_command(args, run_elk),
        Command::Gsv(args) => run_command(args, run_gsv),
        Command::Sigma(args) => run_command(args, run_sigma),
        Command::Algebra(args) => run_command(args, run_algebra),
        Command::Oracle(OracleCommand::Degree(args)) => run_command(args, run_oracle_degree),
        Command::Oracle(OracleCommand::CurveGsv(args)) => run_command(args, run_oracle_curve),
        Command::Validate { corpus, json } => match run_validate(corpus) {
            Ok(summary) => {
                print_validation(&summary, *json);
                if summary.failed > 0 {
                    ExitCode::from(3)
                } else {
                    ExitCode::SUCCESS
                }
            }
            Err(e) => {
                eprintln!("error: {}", e);
                ExitCode::from(1)
            }
        },
    }
}

//! Command-line front end: `solve`, `table`, `converge` and `basis`.
//!
//! Exit codes: 0 on success, 1 for usage and input errors, 2 when the solver
//! or output fails.

pub mod builtin;
pub mod problem_file;
pub mod report;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::basis::{BasisError, BasisSpec};
use crate::expr::format_monomial;
use crate::galerkin::{self, FredholmProblem, SolutionMode, SolveError, SolveMode};

pub use builtin::{builtin, BUILTIN_NAMES};
pub use problem_file::{load_problem, parse_problem, write_problem, ProblemFileError};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("unknown builtin `{0}` (valid: {})", BUILTIN_NAMES.join(", "))]
    UnknownBuiltin(String),
    #[error(transparent)]
    Problem(#[from] ProblemFileError),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error("cannot write {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

impl From<BasisError> for CliError {
    fn from(e: BasisError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::UnknownBuiltin(_) | CliError::Problem(_) => 1,
            CliError::Solve(_) | CliError::Io { .. } => 2,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "fredholm",
    version,
    about = "Galerkin–Bernstein solver for linear Fredholm integral equations of the second kind"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve for the Bernstein coefficients and print them with the monomial form
    Solve(SolveArgs),
    /// Tabulate exact vs approximate solution and the error E on a grid (CSV)
    Table(TableArgs),
    /// Maximum error over a 101-point grid for several degrees (CSV)
    Converge(ConvergeArgs),
    /// Sample the Bernstein basis on an interval (CSV)
    Basis(BasisArgs),
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct ProblemSource {
    /// Builtin problem: example1, example2, example3 or example4
    #[arg(long, value_name = "NAME")]
    builtin: Option<String>,
    /// Problem file in `key = value` format
    #[arg(long, value_name = "PATH")]
    problem: Option<PathBuf>,
}

impl ProblemSource {
    fn load(&self) -> Result<(String, FredholmProblem), CliError> {
        match (&self.builtin, &self.problem) {
            (Some(name), _) => Ok((name.clone(), builtin(name)?)),
            (None, Some(path)) => Ok((path.display().to_string(), load_problem(path)?)),
            (None, None) => Err(CliError::Usage("need --builtin or --problem".into())),
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Auto,
    Float,
    Exact,
}

impl From<ModeArg> for SolveMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Auto => SolveMode::Auto,
            ModeArg::Float => SolveMode::Float,
            ModeArg::Exact => SolveMode::Exact,
        }
    }
}

#[derive(Debug, Args)]
struct SolverOptions {
    /// Gauss–Legendre order [default: max(32, 2n+4)]
    #[arg(long, value_name = "Q")]
    quadrature: Option<usize>,
    #[arg(long, value_enum, default_value_t = ModeArg::Auto)]
    mode: ModeArg,
    /// Output file [default: stdout]
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SolveArgs {
    #[command(flatten)]
    source: ProblemSource,
    #[arg(long, value_name = "N", default_value_t = 3)]
    degree: usize,
    #[command(flatten)]
    options: SolverOptions,
}

#[derive(Debug, Args)]
struct TableArgs {
    #[command(flatten)]
    source: ProblemSource,
    #[arg(long, value_name = "N", default_value_t = 3)]
    degree: usize,
    /// Grid spacing [default: (b-a)/10]
    #[arg(long, value_name = "H", allow_negative_numbers = true)]
    grid_step: Option<f64>,
    #[command(flatten)]
    options: SolverOptions,
}

#[derive(Debug, Args)]
struct ConvergeArgs {
    #[command(flatten)]
    source: ProblemSource,
    #[arg(
        long,
        value_name = "N1,N2,...",
        value_delimiter = ',',
        default_value = "3,4,5,6"
    )]
    degrees: Vec<usize>,
    #[command(flatten)]
    options: SolverOptions,
}

#[derive(Debug, Args)]
struct BasisArgs {
    #[arg(long, value_name = "N", default_value_t = 10)]
    degree: usize,
    /// Number of equispaced sample points (at least 2)
    #[arg(long, default_value_t = 101)]
    samples: usize,
    #[arg(
        long,
        value_name = "A",
        allow_negative_numbers = true,
        default_value_t = 0.0
    )]
    interval_a: f64,
    #[arg(
        long,
        value_name = "B",
        allow_negative_numbers = true,
        default_value_t = 1.0
    )]
    interval_b: f64,
    /// Output file [default: stdout]
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

/// Runs the tool on `args` (including the program name) and returns the
/// process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{rendered}");
                    0
                }
                _ => {
                    let _ = write!(stderr, "{rendered}");
                    1
                }
            };
        }
    };
    match dispatch(cli.command, stderr) {
        Ok((text, out)) => match emit(&text, out.as_ref(), stdout) {
            Ok(()) => 0,
            Err(e) => report_error(&e, stderr),
        },
        Err(e) => report_error(&e, stderr),
    }
}

fn report_error(e: &CliError, stderr: &mut dyn Write) -> i32 {
    let _ = writeln!(stderr, "error: {e}");
    e.exit_code()
}

fn emit(text: &str, out: Option<&PathBuf>, stdout: &mut dyn Write) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        }),
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|source| CliError::Io {
                path: "<stdout>".into(),
                source,
            }),
    }
}

fn warn_condition(sol: &galerkin::Solution, stderr: &mut dyn Write) {
    if sol.is_ill_conditioned() {
        let _ = writeln!(
            stderr,
            "warning: degree {} system is ill-conditioned (cond_1 = {:.3e}); results may be inaccurate",
            sol.basis().degree(),
            sol.condition()
        );
    }
}

fn dispatch(
    command: Command,
    stderr: &mut dyn Write,
) -> Result<(String, Option<PathBuf>), CliError> {
    match command {
        Command::Solve(args) => {
            let (name, problem) = args.source.load()?;
            let sol = galerkin::solve(
                &problem,
                args.degree,
                args.options.mode.into(),
                args.options.quadrature,
            )?;
            warn_condition(&sol, stderr);
            Ok((solve_report(&name, &problem, &sol), args.options.out))
        }
        Command::Table(args) => {
            let (_, problem) = args.source.load()?;
            let exact = problem.exact().ok_or(SolveError::MissingExactSolution)?;
            let sol = galerkin::solve(
                &problem,
                args.degree,
                args.options.mode.into(),
                args.options.quadrature,
            )?;
            warn_condition(&sol, stderr);
            let (a, b) = problem.interval();
            let grid = galerkin::default_grid(a, b, args.grid_step)?;
            let rows = galerkin::error_table(&sol, exact, &grid)?;
            Ok((report::error_table_csv(&rows), args.options.out))
        }
        Command::Converge(args) => {
            let (_, problem) = args.source.load()?;
            if args.degrees.is_empty() {
                return Err(CliError::Usage(
                    "--degrees must list at least one degree".into(),
                ));
            }
            let rows = galerkin::convergence_study(
                &problem,
                &args.degrees,
                args.options.mode.into(),
                args.options.quadrature,
            )?;
            for row in rows
                .iter()
                .filter(|r| r.condition > galerkin::ILL_CONDITIONED)
            {
                let _ = writeln!(
                    stderr,
                    "warning: degree {} system is ill-conditioned (cond_1 = {:.3e})",
                    row.degree, row.condition
                );
            }
            Ok((report::convergence_csv(&rows), args.options.out))
        }
        Command::Basis(args) => {
            if args.samples < 2 {
                return Err(CliError::Usage("--samples must be at least 2".into()));
            }
            let spec = BasisSpec::new(args.degree, args.interval_a, args.interval_b)?;
            Ok((report::basis_samples_csv(&spec, args.samples)?, args.out))
        }
    }
}

fn solve_report(name: &str, problem: &FredholmProblem, sol: &galerkin::Solution) -> String {
    let (a, b) = problem.interval();
    let mut lines = vec![
        format!("problem: {name}"),
        format!(
            "mode: {}",
            match sol.mode() {
                SolutionMode::Exact => "exact",
                SolutionMode::Float => "float",
            }
        ),
        format!("degree: {}", sol.basis().degree()),
        format!("interval: [{a}, {b}]"),
        format!(
            "quadrature: {}",
            sol.quadrature_order()
                .map_or("none".to_string(), |q| q.to_string())
        ),
        format!("condition: {}", report::format_sig(sol.condition(), 4)),
    ];
    match sol.monomial_exact() {
        Some(monomial) => {
            let coeffs: Vec<String> = sol
                .exact_coefficients()
                .unwrap_or_default()
                .iter()
                .map(ToString::to_string)
                .collect();
            lines.push(format!("coefficients: {}", coeffs.join(" ")));
            lines.push(format!("monomial: {}", format_monomial(&monomial)));
        }
        None => {
            let sig = |v: &f64| report::format_sig(*v, report::TABLE_DIGITS);
            let coeffs: Vec<String> = sol.coefficients_f64().iter().map(sig).collect();
            lines.push(format!("coefficients: {}", coeffs.join(" ")));
            let rounded: Vec<f64> = sol
                .monomial_f64()
                .iter()
                .map(|v| sig(v).parse().unwrap_or(*v))
                .collect();
            lines.push(format!("monomial: {}", format_monomial(&rounded)));
        }
    }
    lines.join("\n") + "\n"
}

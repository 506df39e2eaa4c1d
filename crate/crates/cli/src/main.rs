//! `hh3`: certified midpoint-rule quadrature from the command line.
//!
//! Exit codes: 0 success, 2 math/domain error, 64 usage error, 74 I/O error.
//! Diagnostics go to standard error only.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use hh3_core::analysis::DEFAULT_GRID_N;
use hh3_core::QGrid;

use report::Format;

const EXIT_MATH: u8 = 2;
const EXIT_USAGE: u8 = 64;
const EXIT_IO: u8 = 74;

#[derive(Debug, Parser)]
#[command(name = "hh3", version, about = "Certified midpoint quadrature for integrands with log-convex |f'''|")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Single-interval bounds chi1, chi2, chi3 and their minimum.
    Bounds {
        #[command(flatten)]
        problem: Problem,
        #[command(flatten)]
        grid: GridOpts,
        #[command(flatten)]
        output: Output,
    },
    /// Composite midpoint and corrected-midpoint sums for a fixed n.
    Integrate {
        #[command(flatten)]
        problem: Problem,
        /// Number of uniform subintervals.
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        method: MethodOpts,
        /// Also compute the reference integral and the true error.
        #[arg(long)]
        oracle: bool,
        /// Include the per-subinterval breakdown.
        #[arg(long)]
        per_interval: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Double n until the certified bound is at most --tol.
    Certify {
        #[command(flatten)]
        problem: Problem,
        #[arg(long)]
        tol: f64,
        #[command(flatten)]
        method: MethodOpts,
        #[command(flatten)]
        output: Output,
    },
    /// Check the hypotheses: log-convexity, Hermite-Hadamard, and the defect identity.
    Verify {
        #[command(flatten)]
        problem: Problem,
        /// Exponent for the |f'''|^q check.
        #[arg(long, default_value_t = 2.0)]
        q: f64,
        #[arg(long, default_value_t = DEFAULT_GRID_N)]
        grid_n: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Convergence table over a list of n.
    Sweep {
        #[command(flatten)]
        problem: Problem,
        /// Comma-separated subinterval counts.
        #[arg(long, default_value = "1,2,4,8,16,32,64")]
        n_list: String,
        #[command(flatten)]
        grid: GridOpts,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Debug, Args)]
struct Problem {
    /// Integrand in x, e.g. "exp(x)".
    #[arg(long = "f", allow_hyphen_values = true)]
    f: String,
    #[arg(long, allow_negative_numbers = true)]
    a: f64,
    #[arg(long, allow_negative_numbers = true)]
    b: f64,
}

#[derive(Debug, Args)]
struct GridOpts {
    /// q grid as lo:hi:count(log|lin).
    #[arg(long, default_value = "1.001:64:64(log)")]
    q_grid: String,
    /// Sample count for the log-convexity check.
    #[arg(long, default_value_t = DEFAULT_GRID_N)]
    grid_n: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodName {
    Thm1,
    Thm2,
    Thm3,
    Best,
}

#[derive(Debug, Args)]
struct MethodOpts {
    #[arg(long, value_enum, default_value_t = MethodName::Best)]
    method: MethodName,
    /// Exponent for thm2 (q > 1) and thm3 (q >= 1).
    #[arg(long, default_value_t = 2.0)]
    q: f64,
    #[arg(long, default_value = "1.001:64:64(log)")]
    q_grid: String,
}

#[derive(Debug, Args)]
struct Output {
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Math(hh3_core::Error),
}

impl From<hh3_core::Error> for CliError {
    fn from(e: hh3_core::Error) -> Self {
        CliError::Math(e)
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn parse_grid(spec: &str) -> Result<QGrid, CliError> {
    spec.parse().map_err(CliError::Usage)
}

fn parse_method(m: &MethodOpts) -> Result<hh3_core::Method, CliError> {
    use hh3_core::Method;
    let q = m.q;
    Ok(match m.method {
        MethodName::Thm1 => Method::Thm1,
        MethodName::Thm2 if q > 1.0 && q.is_finite() => Method::Thm2(q),
        MethodName::Thm2 => return Err(usage(format!("thm2 needs --q > 1, got {q}"))),
        MethodName::Thm3 if q >= 1.0 && q.is_finite() => Method::Thm3(q),
        MethodName::Thm3 => return Err(usage(format!("thm3 needs --q >= 1, got {q}"))),
        MethodName::Best => Method::Best,
    })
}

fn parse_n_list(s: &str) -> Result<Vec<usize>, CliError> {
    let list: Vec<usize> = s
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().map_err(|_| usage(format!("invalid n `{t}` in --n-list"))))
        .collect::<Result<_, _>>()?;
    if list.is_empty() {
        return Err(usage("--n-list is empty"));
    }
    if list.contains(&0) {
        return Err(usage("--n-list entries must be >= 1"));
    }
    Ok(list)
}

impl Problem {
    fn validate(&self) -> Result<commands::Problem, CliError> {
        if !(self.a.is_finite() && self.b.is_finite() && self.a < self.b) {
            return Err(usage(format!("need finite --a < --b, got [{}, {}]", self.a, self.b)));
        }
        let expr = hh3_core::parse(&self.f).map_err(|e| usage(format!("--f: {e}")))?;
        Ok(commands::Problem {
            text: self.f.clone(),
            expr,
            a: self.a,
            b: self.b,
        })
    }
}

fn check_grid_n(n: usize) -> Result<(), CliError> {
    if n < 3 {
        return Err(usage("--grid-n must be at least 3"));
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(String, Option<PathBuf>), CliError> {
    let (report, output, default_format) = match cli.command {
        Command::Bounds { problem, grid, output } => {
            check_grid_n(grid.grid_n)?;
            let r = commands::bounds(&problem.validate()?, &parse_grid(&grid.q_grid)?, grid.grid_n)?;
            (r, output, Format::Json)
        }
        Command::Integrate {
            problem,
            n,
            method,
            oracle,
            per_interval,
            output,
        } => {
            if n == 0 {
                return Err(usage("--n must be at least 1"));
            }
            let p = problem.validate()?;
            let m = parse_method(&method)?;
            let g = parse_grid(&method.q_grid)?;
            (commands::integrate(&p, n, m, &g, oracle, per_interval)?, output, Format::Json)
        }
        Command::Certify {
            problem,
            tol,
            method,
            output,
        } => {
            if !(tol > 0.0 && tol.is_finite()) {
                return Err(usage(format!("--tol must be positive, got {tol}")));
            }
            let p = problem.validate()?;
            let m = parse_method(&method)?;
            let g = parse_grid(&method.q_grid)?;
            (commands::certify(&p, tol, m, &g)?, output, Format::Json)
        }
        Command::Verify {
            problem,
            q,
            grid_n,
            output,
        } => {
            check_grid_n(grid_n)?;
            if !(q >= 1.0 && q.is_finite()) {
                return Err(usage(format!("--q must be >= 1, got {q}")));
            }
            (commands::verify(&problem.validate()?, q, grid_n)?, output, Format::Json)
        }
        Command::Sweep {
            problem,
            n_list,
            grid,
            output,
        } => {
            let ns = parse_n_list(&n_list)?;
            let p = problem.validate()?;
            let g = parse_grid(&grid.q_grid)?;
            (commands::sweep(&p, &ns, &g)?, output, Format::Csv)
        }
    };
    let format = output.format.unwrap_or(default_format);
    Ok((report.render(format), output.out))
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("HH3_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n >= 1)
        .ok_or_else(|| usage(format!("HH3_THREADS must be a positive integer, got `{raw}`")))?;
    // Fails only if a pool already exists, which cannot happen this early.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    print!("{e}");
                    ExitCode::SUCCESS
                }
                _ => {
                    eprint!("{e}");
                    ExitCode::from(EXIT_USAGE)
                }
            };
        }
    };
    let outcome = configure_threads().and_then(|()| run(cli));
    match outcome {
        Ok((text, None)) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Ok((text, Some(path))) => match std::fs::write(&path, text) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("hh3: cannot write {}: {e}", path.display());
                ExitCode::from(EXIT_IO)
            }
        },
        Err(CliError::Usage(msg)) => {
            eprintln!("hh3: usage error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(CliError::Math(e)) => {
            eprintln!("hh3: {e}");
            ExitCode::from(EXIT_MATH)
        }
    }
}

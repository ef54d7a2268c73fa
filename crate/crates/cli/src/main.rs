use std::fs;
use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use haarql::catalog::{all_cases, get_case, BenchmarkCase, TABLE_POINTS};
use haarql::greens::KernelSpec;
use haarql::problem_file::parse_problem;
use haarql::report::{
    bench_case, bench_table, catalog_report, converge_study, converge_table, history_table, oracle_study, oracle_table,
    probe_table, quad_ladder, BenchOptions, Format, Report,
};
use haarql::{solve, Error, ProblemSpec, SolverConfig};

/// Haar wavelet quasilinearization solver for doubly singular BVPs
/// `(p y')' = q f(x, y)` on (0, 1).
#[derive(Parser, Debug)]
#[command(name = "haarql", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve a catalogue case or a problem file and print probe values plus sweep history
    Solve {
        #[command(flatten)]
        target: Target,
        /// Resolution level (2M = 2^(J+1) unknowns)
        #[arg(long = "J")]
        level: Option<u32>,
        #[command(flatten)]
        solver: SolverArgs,
        #[command(flatten)]
        probes: Probes,
        #[command(flatten)]
        output: Output,
    },
    /// Reproduce a published table: solver values against closed form and published values
    Bench {
        /// Catalogue case 1..=8
        #[arg(long = "case", required_unless_present = "all", conflicts_with = "all")]
        case: Option<u32>,
        /// Run all eight cases
        #[arg(long)]
        all: bool,
        /// Resolution level (defaults to the published one)
        #[arg(long = "J")]
        level: Option<u32>,
        /// Sweep count (defaults to the published one)
        #[arg(long)]
        iters: Option<usize>,
        /// Stop early once a sweep changes y by at most this much
        #[arg(long)]
        tol: Option<f64>,
        #[command(flatten)]
        probes: Probes,
        #[command(flatten)]
        output: Output,
    },
    /// Error against the closed form (or a finer reference solve) over a range of levels
    Converge {
        #[command(flatten)]
        target: Target,
        /// Level range `A..B` or a single level
        #[arg(long = "J", default_value = "2..6")]
        levels: String,
        #[arg(long, default_value_t = 30)]
        iters: usize,
        #[arg(long, default_value_t = 1e-13)]
        tol: f64,
        #[command(flatten)]
        output: Output,
    },
    /// Integral-form residual of a solve under quadrature refinement
    Oracle {
        #[command(flatten)]
        target: Target,
        #[arg(long = "J", default_value_t = 4)]
        level: u32,
        #[arg(long, default_value_t = 30)]
        iters: usize,
        #[arg(long, default_value_t = 1e-13)]
        tol: f64,
        /// Finest quadrature panel count; the study doubles from 16 up to it
        #[arg(long = "quad", default_value_t = 1024)]
        quad: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Export the problem catalogue and its published reference values
    Catalog {
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct Target {
    /// Catalogue case 1..=8
    #[arg(long = "case")]
    case: Option<u32>,
    /// Problem file (key = value format)
    #[arg(long = "problem")]
    problem: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SolverArgs {
    #[arg(long, default_value_t = 12)]
    iters: usize,
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
}

#[derive(Args, Debug)]
struct Probes {
    /// Comma-separated evaluation points in [0, 1]
    #[arg(long = "probe", value_parser = parse_probes)]
    probe: Option<ProbeList>,
}

#[derive(Clone, Debug, PartialEq)]
struct ProbeList(Vec<f64>);

#[derive(Args, Debug)]
struct Output {
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    format: OutputFormat,
    /// Write to a file instead of stdout
    #[arg(long = "out")]
    out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum OutputFormat {
    Csv,
    Markdown,
}

impl From<OutputFormat> for Format {
    fn from(f: OutputFormat) -> Self {
        match f {
            OutputFormat::Csv => Format::Csv,
            OutputFormat::Markdown => Format::Markdown,
        }
    }
}

fn parse_probes(s: &str) -> Result<ProbeList, String> {
    let probes = s
        .split(',')
        .map(|t| {
            let t = t.trim();
            let v: f64 = t.parse().map_err(|_| format!("`{t}` is not a number"))?;
            if (0.0..=1.0).contains(&v) {
                Ok(v)
            } else {
                Err(format!("probe {v} outside [0, 1]"))
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    if probes.is_empty() {
        return Err("no probe points".into());
    }
    Ok(ProbeList(probes))
}

fn parse_levels(s: &str) -> Result<RangeInclusive<u32>, String> {
    let bad = || format!("`{s}` is not a level or a range `A..B`");
    let (a, b) = match s.split_once("..") {
        Some((a, b)) => (a.trim(), b.trim().trim_start_matches('=')),
        None => (s.trim(), s.trim()),
    };
    let (a, b): (u32, u32) = (a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?);
    if a > b {
        return Err(format!("empty level range {a}..{b}"));
    }
    Ok(a..=b)
}

/// Failure with its exit status.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self { code: 1, message: format!("usage: {}", message.into()) }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let (code, kind) = match e.root() {
            Error::UnavailableKernel(_) => (3, "oracle unavailable"),
            Error::Parse { .. } | Error::MissingKey(_) => (1, "problem file"),
            Error::UnknownCase(_) | Error::InvalidConfig(_) => (1, "usage"),
            _ => (2, "solver"),
        };
        Self { code, message: format!("{kind}: {e}") }
    }
}

enum Problem {
    Case(Box<BenchmarkCase>),
    File(Box<ProblemSpec>),
}

impl Problem {
    fn load(target: &Target) -> Result<Self, Failure> {
        match (target.case, &target.problem) {
            (Some(id), None) => Ok(Problem::Case(Box::new(get_case(id)?))),
            (None, Some(path)) => {
                let text = fs::read_to_string(path)
                    .map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))?;
                let pf = parse_problem(&text).map_err(|e| {
                    let f = Failure::from(e);
                    Failure { message: format!("{}: {}", path.display(), f.message), ..f }
                })?;
                if pf.spec.uses_fd_slope() {
                    eprintln!("note: p' not given; using central differences");
                }
                Ok(Problem::File(Box::new(pf.spec)))
            }
            _ => Err(Failure::usage("exactly one of --case and --problem is required")),
        }
    }

    fn spec(&self) -> &ProblemSpec {
        match self {
            Problem::Case(c) => &c.spec,
            Problem::File(s) => s,
        }
    }

    fn case(&self) -> Option<&BenchmarkCase> {
        match self {
            Problem::Case(c) => Some(c),
            Problem::File(_) => None,
        }
    }

    fn kernel(&self) -> Result<KernelSpec, Error> {
        match self {
            Problem::Case(c) => c.kernel(),
            Problem::File(s) => KernelSpec::numeric(s),
        }
    }
}

fn warn_unconverged(sol: &haarql::Solution) {
    if !sol.converged {
        let last = sol.history.last().copied().unwrap_or(f64::NAN);
        eprintln!("warning: not converged after {} sweeps (last change {last:e})", sol.iters_used);
    }
}

fn run(command: Command) -> Result<(Report, Output), Failure> {
    match command {
        Command::Solve { target, level, solver, probes, output } => {
            let problem = Problem::load(&target)?;
            let level = level.or(problem.case().map(|c| c.published_level)).unwrap_or(4);
            let cfg = SolverConfig::new(level).max_iters(solver.iters).tol_outer(solver.tol);
            let sol = solve(problem.spec(), &cfg)?;
            warn_unconverged(&sol);
            let points = probes.probe.map_or_else(|| TABLE_POINTS.to_vec(), |p| p.0);
            let report = Report { tables: vec![probe_table(&sol, &points)?, history_table(&sol)] };
            Ok((report, output))
        }
        Command::Bench { case, all, level, iters, tol, probes, output } => {
            let opts = BenchOptions { level, iters, tol, probes: probes.probe.map(|p| p.0) };
            let cases =
                if all { all_cases() } else { vec![get_case(case.expect("clap requires --case without --all"))?] };
            // solves run concurrently; assembly below is in case order
            let results: Vec<_> = cases.par_iter().map(|c| bench_case(c, &opts)).collect();
            let reports = results.into_iter().collect::<Result<Vec<_>, _>>()?;
            Ok((Report::single(bench_table(&reports)), output))
        }
        Command::Converge { target, levels, iters, tol, output } => {
            let levels = parse_levels(&levels).map_err(Failure::usage)?;
            let problem = Problem::load(&target)?;
            let exact = problem.case().and_then(|c| c.exact.clone());
            let exact_ref = exact.as_ref().map(|f| f.as_ref() as &(dyn Fn(f64) -> f64 + Sync));
            let rows = converge_study(problem.spec(), exact_ref, levels, iters, tol)?;
            Ok((Report::single(converge_table(&rows)), output))
        }
        Command::Oracle { target, level, iters, tol, quad, output } => {
            if quad < 16 {
                return Err(Failure::usage("--quad must be at least 16"));
            }
            let problem = Problem::load(&target)?;
            let ks = problem.kernel()?;
            let cfg = SolverConfig::new(level).max_iters(iters).tol_outer(tol);
            let sol = solve(problem.spec(), &cfg)?;
            warn_unconverged(&sol);
            let exact = problem.case().and_then(|c| c.exact.clone());
            let exact_ref = exact.as_ref().map(|f| f.as_ref() as &(dyn Fn(f64) -> f64 + Sync));
            let rows = oracle_study(&sol, problem.spec(), &ks, exact_ref, &quad_ladder(quad))?;
            Ok((Report::single(oracle_table(&rows)), output))
        }
        Command::Catalog { output } => Ok((catalog_report(&all_cases()), output)),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let result = run(cli.command).and_then(|(report, output)| {
        let text = report.render(output.format.into());
        match output.out {
            Some(path) => {
                fs::write(&path, text).map_err(|e| Failure::usage(format!("cannot write {}: {e}", path.display())))
            }
            None => {
                print!("{text}");
                Ok(())
            }
        }
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

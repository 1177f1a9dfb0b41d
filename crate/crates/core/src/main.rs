use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use hardy_opa::fspec::{format_complex, parse_function};
use hardy_opa::harness::{
    audit, pythag_trials, sweep_cyclic, sweep_roots, write_csv, write_json, CorpusSpec, Execution,
    ExitStatus, SweepRecord,
};
use hardy_opa::orthogonality::DEFAULT_SLACK_TOL;
use hardy_opa::{Result, SolverOptions, DEFAULT_GRID};

/// Optimal polynomial approximants in Hardy spaces, with numeric audits.
#[derive(Parser)]
#[command(name = "hardy-opa", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct SolverArgs {
    /// Quadrature grid size (power of two, at least 4).
    #[arg(long, default_value_t = DEFAULT_GRID)]
    grid: usize,
    /// Newton iteration budget, shared by all smoothing stages.
    #[arg(long, default_value_t = 500)]
    max_iters: usize,
    /// Relative orthogonality tolerance declaring convergence.
    #[arg(long, default_value_t = 1e-10)]
    grad_tol: f64,
    /// Start from zero instead of the least-squares solution.
    #[arg(long)]
    cold_start: bool,
}

impl SolverArgs {
    fn options(&self) -> Result<SolverOptions> {
        let opts = SolverOptions {
            max_iters: self.max_iters,
            grad_tol: self.grad_tol,
            warm_start: !self.cold_start,
            ..SolverOptions::default()
        };
        opts.validate()?;
        Ok(opts)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Compute q_{n,p}[f] and report its residual and orthogonality certificate.
    Solve {
        /// Function spec, e.g. `poly:1,-1` or `blaschke:0.5,0.2+0.1i`.
        /// Function spec: `poly:c0,c1,...` or `blaschke:z1,z2,...`.
        #[arg(long = "f")]
        f: String,
        /// Exponent p > 1.
        #[arg(long)]
        p: f64,
        /// Degree of the approximant.
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        solver: SolverArgs,
        /// Write the records as a JSON document to this file.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Solve and run every applicable bound and closed-form check.
    Audit {
        /// Function spec: `poly:c0,c1,...` or `blaschke:z1,z2,...`.
        #[arg(long = "f")]
        f: String,
        /// Exponent p > 1.
        #[arg(long)]
        p: f64,
        /// Degree of the approximant.
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        solver: SolverArgs,
        /// Write the record as a JSON document to this file.
        #[arg(long)]
        json: PathBuf,
    },
    /// Audit a seeded corpus at several exponents and summarize root moduli.
    SweepRoots {
        /// JSON corpus spec file.
        #[arg(long)]
        corpus: PathBuf,
        /// Comma-separated exponents.
        #[arg(long, value_delimiter = ',', required = true)]
        p: Vec<f64>,
        /// Degree of the approximant.
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[command(flatten)]
        solver: SolverArgs,
        /// Write one CSV row per record to this file.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Write the records as a JSON document to this file.
        #[arg(long)]
        json: Option<PathBuf>,
        /// Evaluate instances one at a time.
        #[arg(long)]
        serial: bool,
    },
    /// Audit degrees 0..=nmax for a cyclic polynomial.
    SweepCyclic {
        /// Function spec: `poly:c0,c1,...` or `blaschke:z1,z2,...`.
        #[arg(long = "f")]
        f: String,
        /// Exponent p > 1.
        #[arg(long)]
        p: f64,
        /// Largest degree to solve.
        #[arg(long)]
        nmax: usize,
        #[command(flatten)]
        solver: SolverArgs,
        /// Write one CSV row per record to this file.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Write the records as a JSON document to this file.
        #[arg(long)]
        json: Option<PathBuf>,
        /// Evaluate one at a time instead of in parallel.
        #[arg(long)]
        serial: bool,
    },
    /// Check the Pythagorean inequalities on seeded orthogonal pairs.
    Pythag {
        /// Orthogonal pairs drawn per exponent.
        #[arg(long)]
        trials: usize,
        /// Seed of the pair generator.
        #[arg(long)]
        seed: u64,
        /// Comma-separated exponents.
        #[arg(long, value_delimiter = ',', required = true)]
        p: Vec<f64>,
        /// Quadrature grid size (power of two, at least 4).
        #[arg(long, default_value_t = DEFAULT_GRID)]
        grid: usize,
        /// Evaluate one at a time instead of in parallel.
        #[arg(long)]
        serial: bool,
    },
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path)?))
}

fn execution(serial: bool) -> Execution {
    if serial {
        Execution::Serial
    } else {
        Execution::Parallel
    }
}

fn command_line() -> String {
    std::env::args().skip(1).collect::<Vec<_>>().join(" ")
}

fn fmt_opt(z: Option<num_complex::Complex64>) -> String {
    z.map(format_complex).unwrap_or_else(|| "-".into())
}

fn print_record(rec: &SweepRecord) {
    let coeffs: Vec<String> = rec.coeffs.iter().map(|&c| format_complex(c)).collect();
    println!(
        "f = {}  p = {}  n = {}  grid = {}",
        rec.f, rec.p, rec.n, rec.grid
    );
    println!("coeffs = [{}]", coeffs.join(", "));
    println!("residual = {:.12e}", rec.residual_pnorm);
    println!(
        "max orthogonality residual = {:.3e}",
        rec.orth_residuals.iter().copied().fold(0.0, f64::max)
    );
    println!(
        "converged = {}  iterations = {}",
        rec.converged, rec.iterations
    );
    if rec.n == 1 {
        println!("a = {}  w = {}", fmt_opt(rec.a), fmt_opt(rec.w));
    }
    if !rec.roots.is_empty() {
        let roots: Vec<String> = rec
            .roots
            .iter()
            .map(|&z| format!("{} (|z| = {:.6})", format_complex(z), z.norm()))
            .collect();
        println!("roots = {}", roots.join(", "));
    }
}

fn print_bounds(rec: &SweepRecord) {
    for b in &rec.bounds {
        println!(
            "  {:<26} lhs = {:>14.6e}  rhs = {:>14.6e}  slack = {:>11.3e}  {}",
            b.name,
            b.lhs,
            b.rhs,
            b.slack,
            if b.satisfied { "ok" } else { "VIOLATED" }
        );
    }
    for note in &rec.notes {
        println!("  note: {note}");
    }
}

fn run(cli: Cli) -> Result<ExitStatus> {
    match cli.command {
        Command::Solve {
            f,
            p,
            n,
            solver,
            json,
        } => {
            let f = parse_function(&f, solver.grid)?;
            let opts = solver.options()?;
            let res = hardy_opa::solver::solve(&f, n, p, &opts)?;
            let rec = SweepRecord::from_solve(&f, &res);
            print_record(&rec);
            if let Some(path) = json {
                write_json::<()>(
                    create(&path)?,
                    &command_line(),
                    std::slice::from_ref(&rec),
                    None,
                )?;
            }
            Ok(if rec.converged {
                ExitStatus::Clean
            } else {
                ExitStatus::NotConverged
            })
        }
        Command::Audit {
            f,
            p,
            n,
            solver,
            json,
        } => {
            let f = parse_function(&f, solver.grid)?;
            let rec = audit(&f, p, n, &solver.options()?)?;
            print_record(&rec);
            print_bounds(&rec);
            if let Some(check) = &rec.formulas {
                println!(
                    "  closed forms: max pairwise w deviation = {:.3e}, vs solver w = {:.3e}, vs solver a = {:.3e}",
                    check.max_pairwise_w_deviation, check.max_solver_w_deviation, check.max_solver_a_deviation
                );
            }
            write_json::<()>(
                create(&json)?,
                &command_line(),
                std::slice::from_ref(&rec),
                None,
            )?;
            Ok(ExitStatus::of([&rec]))
        }
        Command::SweepRoots {
            corpus,
            p,
            n,
            solver,
            csv,
            json,
            serial,
        } => {
            let spec = CorpusSpec::from_json(&std::fs::read_to_string(&corpus)?)?;
            let out = sweep_roots(&spec, &p, n, &solver.options()?, execution(serial))?;
            for s in &out.summaries {
                println!(
                    "p = {:<6} min |w| = {:<22} (instance {:>4})  converged = {}  not converged = {}  constant = {}",
                    s.p,
                    s.min_w_abs.map_or("-".into(), |v| format!("{v:.15}")),
                    s.argmin_instance.map_or("-".into(), |i| i.to_string()),
                    s.converged,
                    s.not_converged,
                    s.degenerate
                );
            }
            let violations = out
                .records
                .iter()
                .filter(|r| r.converged && r.violations().next().is_some())
                .count();
            println!(
                "records = {}  converged records with violated bounds = {violations}",
                out.records.len()
            );
            if let Some(path) = csv {
                write_csv(create(&path)?, &out.records)?;
            }
            if let Some(path) = json {
                write_json(
                    create(&path)?,
                    &command_line(),
                    &out.records,
                    Some(&out.summaries),
                )?;
            }
            Ok(ExitStatus::of(&out.records))
        }
        Command::SweepCyclic {
            f,
            p,
            nmax,
            solver,
            csv,
            json,
            serial,
        } => {
            let f = parse_function(&f, solver.grid)?;
            let out = sweep_cyclic(&f, p, nmax, &solver.options()?, execution(serial))?;
            println!(
                "{:>3}  {:>22}  {:>22}  converged",
                "n", "residual", "root lower bound"
            );
            for (rec, lb) in out.records.iter().zip(&out.summary.root_lower_bounds) {
                println!(
                    "{:>3}  {:>22.15e}  {:>22.15}  {}",
                    rec.n, rec.residual_pnorm, lb, rec.converged
                );
            }
            let s = &out.summary;
            println!(
                "residuals strictly decreasing = {}  lower bounds nondecreasing = {}  roots respect bound = {}",
                s.residuals_strictly_decreasing, s.lower_bounds_nondecreasing, s.roots_respect_bound
            );
            if let Some(path) = csv {
                write_csv(create(&path)?, &out.records)?;
            }
            if let Some(path) = json {
                write_json(
                    create(&path)?,
                    &command_line(),
                    &out.records,
                    Some(&out.summary),
                )?;
            }
            let status = ExitStatus::of(&out.records);
            Ok(
                if status == ExitStatus::Clean
                    && !(s.residuals_nonincreasing && s.roots_respect_bound)
                {
                    ExitStatus::BoundViolated
                } else {
                    status
                },
            )
        }
        Command::Pythag {
            trials,
            seed,
            p,
            grid,
            serial,
        } => {
            let out = pythag_trials(trials, seed, &p, grid, execution(serial))?;
            let mut violated = false;
            for &pv in &p {
                let rows: Vec<_> = out.iter().filter(|t| t.p == pv).collect();
                let lower = rows
                    .iter()
                    .map(|t| t.lower_slack)
                    .fold(f64::INFINITY, f64::min);
                let upper = rows
                    .iter()
                    .map(|t| t.upper_slack)
                    .fold(f64::INFINITY, f64::min);
                let orth = rows.iter().map(|t| t.orth_residual).fold(0.0, f64::max);
                let ok = lower >= -DEFAULT_SLACK_TOL && upper >= -DEFAULT_SLACK_TOL;
                violated |= !ok;
                println!(
                    "p = {pv:<6} trials = {:<6} min lower slack = {lower:>11.3e}  min upper slack = {upper:>11.3e}  max orth residual = {orth:.2e}  {}",
                    rows.len(),
                    if ok { "ok" } else { "VIOLATED" }
                );
            }
            Ok(if violated {
                ExitStatus::BoundViolated
            } else {
                ExitStatus::Clean
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() {
                ExitStatus::InputError.code() as u8
            } else {
                0
            });
        }
    };
    match run(cli) {
        Ok(status) => ExitCode::from(status.code() as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(ExitStatus::InputError.code() as u8)
        }
    }
}

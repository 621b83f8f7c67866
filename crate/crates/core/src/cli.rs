//! `afsimplex` command line.

use std::io::Write;
use std::path::{Path as FsPath, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::lp_io::{gen_random_lp, read_lp, Format, Method, TraceDocument};
use crate::oracle::{self, compare_paths};
use crate::rational::Rational;
use crate::tableau::{Dictionary, LinearProgram};
use crate::trace::{Outcome, Path, PivotRule, SolveOptions, DEFAULT_MAX_ITERS};
use crate::{asm, asmd};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "afsimplex", version, about = "Artificial-free phase-1 simplex in exact arithmetic")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Debug)]
struct SolveFlags {
    #[arg(long, default_value_t = DEFAULT_MAX_ITERS)]
    max_iters: usize,
    /// Smallest-index pricing instead of most-negative.
    #[arg(long)]
    bland: bool,
}

impl SolveFlags {
    fn options(&self, tableaux: bool) -> SolveOptions {
        let mut o = SolveOptions::default()
            .with_max_iters(self.max_iters)
            .with_rule(if self.bland { PivotRule::Bland } else { PivotRule::Dantzig });
        o.record_tableaux = tableaux;
        o
    }
}

#[derive(Args, Debug)]
struct TraceFlags {
    /// Print every tableau.
    #[arg(long)]
    trace: bool,
    /// Line-delimited JSON instead of tables.
    #[arg(long)]
    machine: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum PrimalMethod {
    Asm,
    Oracle,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Primal feasibility (exit 0 feasible, 1 infeasible, 2 error or iteration cap).
    Check {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "asm")]
        method: PrimalMethod,
        #[command(flatten)]
        trace: TraceFlags,
        #[command(flatten)]
        solve: SolveFlags,
    },
    /// Dual feasibility with the dual method.
    Dual {
        file: PathBuf,
        #[command(flatten)]
        trace: TraceFlags,
        #[command(flatten)]
        solve: SolveFlags,
    },
    /// Compare the artificial-free path with the two-phase path, or with a stored corner path.
    Compare {
        file: PathBuf,
        #[arg(long)]
        path: Option<PathBuf>,
        #[command(flatten)]
        solve: SolveFlags,
    },
    /// Compare both methods on seeded random instances.
    Random {
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        rows: usize,
        #[arg(long)]
        cols: usize,
        #[arg(long)]
        count: usize,
        #[arg(long)]
        feasible: bool,
        #[arg(long, default_value_t = 9)]
        bound: i64,
        #[command(flatten)]
        solve: SolveFlags,
    },
}

struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

fn load(file: &FsPath) -> Result<LinearProgram<Rational>, Failure> {
    let text = std::fs::read_to_string(file).map_err(|e| Failure(format!("{}: {e}", file.display())))?;
    read_lp(&text).map_err(|e| Failure(format!("{}:{e}", file.display())))
}

fn exit_for<T>(outcome: &Outcome<T>) -> i32 {
    match outcome {
        Outcome::Feasible => EXIT_OK,
        Outcome::Infeasible { .. } => EXIT_NEGATIVE,
        Outcome::IterationCapExceeded => EXIT_ERROR,
    }
}

fn emit(out: &mut dyn Write, doc: &TraceDocument, flags: &TraceFlags) -> Result<(), Failure> {
    let text = if flags.machine {
        doc.render(Format::Machine)
    } else if flags.trace {
        doc.render(Format::Table)
    } else {
        let mut brief = doc.clone();
        brief.tables.clear();
        brief.steps.clear();
        brief.render(Format::Table).lines().last().unwrap_or_default().to_string() + "\n"
    };
    out.write_all(text.as_bytes())?;
    Ok(())
}

fn corners_text(corners: &[Vec<Rational>]) -> String {
    corners
        .iter()
        .map(|c| format!("({})", c.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(", ")))
        .collect::<Vec<_>>()
        .join(" ")
}

/// Reads a stored corner path: one point per line, whitespace-separated rationals.
pub fn parse_corner_path(text: &str, dim: usize) -> Result<Path<Rational>, String> {
    let mut corners = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let body = line.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let point = body
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<Rational>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| format!("line {}: {e}", i + 1))?;
        if point.len() != dim {
            return Err(format!("line {}: expected {dim} coordinates, found {}", i + 1, point.len()));
        }
        corners.push(point);
    }
    Ok(Path::from_corners(corners))
}

fn run(cli: Cli, out: &mut dyn Write) -> Result<i32, Failure> {
    match cli.cmd {
        Cmd::Check {
            file,
            method,
            trace,
            solve,
        } => {
            let lp = load(&file)?;
            let opts = solve.options(trace.trace);
            let doc = match method {
                PrimalMethod::Asm => {
                    let sol = asm::solve(Dictionary::from_lp(&lp), &opts)?;
                    TraceDocument::from_solution(Method::Asm, &lp, &sol)
                }
                PrimalMethod::Oracle => TraceDocument::from_oracle(&lp, &oracle::solve(&lp, &opts)?),
            };
            emit(out, &doc, &trace)?;
            Ok(outcome_code(&doc))
        }
        Cmd::Dual { file, trace, solve } => {
            let lp = load(&file)?;
            let sol = asmd::solve(Dictionary::from_lp(&lp), &solve.options(trace.trace))?;
            let doc = TraceDocument::from_solution(Method::Asmd, &lp, &sol);
            emit(out, &doc, &trace)?;
            Ok(exit_for(sol.outcome()))
        }
        Cmd::Compare { file, path, solve } => {
            let lp = load(&file)?;
            let opts = solve.options(false);
            let a = asm::solve(Dictionary::from_lp(&lp), &opts)?;
            if matches!(a.outcome(), Outcome::IterationCapExceeded) {
                return Err(Failure("asm: iteration cap exceeded".into()));
            }
            let (other_name, other) = match path {
                Some(p) => {
                    let text = std::fs::read_to_string(&p).map_err(|e| Failure(format!("{}: {e}", p.display())))?;
                    let fixture = parse_corner_path(&text, lp.num_vars())
                        .map_err(|e| Failure(format!("{}: {e}", p.display())))?;
                    (p.display().to_string(), fixture)
                }
                None => {
                    let o = oracle::solve(&lp, &opts)?;
                    if matches!(o.outcome(), Outcome::IterationCapExceeded) {
                        return Err(Failure("oracle: iteration cap exceeded".into()));
                    }
                    if o.outcome().is_feasible() != a.outcome().is_feasible() {
                        writeln!(out, "verdicts differ: asm {}, oracle {}", a.outcome().name(), o.outcome().name())?;
                        return Ok(EXIT_NEGATIVE);
                    }
                    ("oracle".to_string(), o.trace().path())
                }
            };
            let report = compare_paths(&a.trace.path(), &other);
            writeln!(out, "asm: {}", corners_text(&report.corners_a))?;
            writeln!(out, "{other_name}: {}", corners_text(&report.corners_b))?;
            match report.first_divergence {
                None => {
                    writeln!(out, "paths equal")?;
                    Ok(EXIT_OK)
                }
                Some(k) => {
                    writeln!(out, "paths diverge at step {k}")?;
                    Ok(EXIT_NEGATIVE)
                }
            }
        }
        Cmd::Random {
            seed,
            rows,
            cols,
            count,
            feasible,
            bound,
            solve,
        } => {
            if rows == 0 || cols == 0 || bound <= 0 {
                return Err(Failure("--rows, --cols and --bound must be positive".into()));
            }
            let opts = solve.options(false);
            let (mut equal, mut bad, mut capped) = (0usize, 0usize, 0usize);
            for s in seed..seed + count as u64 {
                let lp = gen_random_lp(s, rows, cols, bound, feasible);
                let a = asm::solve(Dictionary::from_lp(&lp), &opts)?;
                let o = oracle::solve(&lp, &opts)?;
                let capped_run = [a.outcome(), o.outcome()]
                    .iter()
                    .any(|x| matches!(x, Outcome::IterationCapExceeded));
                let status = if capped_run {
                    capped += 1;
                    "capped".to_string()
                } else if a.outcome().is_feasible() != o.outcome().is_feasible() {
                    bad += 1;
                    format!("verdicts differ (asm {}, oracle {})", a.outcome().name(), o.outcome().name())
                } else {
                    let report = compare_paths(&a.trace.path(), &o.trace().path());
                    match report.first_divergence {
                        None => {
                            equal += 1;
                            format!("equal {} ({} pivots)", a.outcome().name(), a.trace.len())
                        }
                        Some(k) => {
                            bad += 1;
                            format!("diverge at step {k}")
                        }
                    }
                };
                writeln!(out, "seed {s}: {status}")?;
            }
            writeln!(out, "{count} instances: {equal} equal, {bad} mismatched, {capped} capped")?;
            Ok(if bad == 0 { EXIT_OK } else { EXIT_NEGATIVE })
        }
    }
}

fn outcome_code(doc: &TraceDocument) -> i32 {
    match doc.outcome.outcome.as_str() {
        "feasible" => EXIT_OK,
        "infeasible" => EXIT_NEGATIVE,
        _ => EXIT_ERROR,
    }
}

/// Runs the command line and returns the process exit code.
pub fn run_cli<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    match run(cli, out) {
        Ok(code) => code,
        Err(Failure(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_ERROR
        }
    }
}

//! Command-line interface. [`run`] takes the argument list and output
//! streams and returns the process exit code:
//! 0 success, 1 infeasible or violated, 2 input error, 3 resource limit.

use std::fmt::Display;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::approx::{approximate, integer_optimum, lp_optimum, measure_gap, ApproxError, GapError, LpChoice};
use crate::covers::{alpha, forest_cover, laminar_cover, structural_cover, CoverError, CoverPlan};
use crate::exact::{branch_and_bound_opt, brute_force_opt, ExactError};
use crate::format_rational;
use crate::io::{assignment_to_json, parse_assignment, parse_instance, serialize_instance};
use crate::model::{violations, Instance};
use crate::reductions::{gen_unweighted, gen_weighted, ThreeDMInstance};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INFEASIBLE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_LIMIT: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "simassign", version, about = "Simultaneous assignment problems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Optimal assignment
    Solve {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = SolveMethod::Auto)]
        method: SolveMethod,
    },
    /// Optimum of an LP relaxation
    Bound {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = LpKind::Lp1)]
        lp: LpKind,
        /// Cut budget for lp1star
        #[arg(long, default_value_t = 64)]
        budget: usize,
    },
    /// LP optimum, integer optimum and their ratio
    Gap {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = LpKind::Lp1)]
        lp: LpKind,
        #[arg(long, default_value_t = 64)]
        budget: usize,
    },
    /// Edge cover used by the approximation
    Cover {
        file: PathBuf,
        /// laminar, structural or forest:M,L
        #[arg(long, default_value = "laminar")]
        strategy: String,
    },
    /// Best per-part optimum of a cover
    Approx {
        file: PathBuf,
        #[arg(long, default_value = "laminar")]
        strategy: String,
    },
    /// Optimal laminar cover ratio
    Alpha { k: usize, k_prime: usize },
    /// Instance generators
    Gen {
        #[command(subcommand)]
        generator: Generator,
    },
    /// Feasibility of a solution
    Check { file: PathBuf, solution: PathBuf },
}

#[derive(Subcommand, Debug)]
enum Generator {
    /// Instance from a 2-regular 3-dimensional matching file
    #[command(name = "3dm")]
    ThreeDM {
        file: PathBuf,
        #[arg(long)]
        weighted: bool,
        #[arg(long, conflicts_with = "weighted")]
        split_claws: bool,
    },
    /// Random 2-regular 3-dimensional matching instance in text form
    #[command(name = "random-3dm")]
    Random3DM {
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SolveMethod {
    Exact,
    Bnb,
    Auto,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum LpKind {
    Lp1,
    Lp1star,
}

impl LpKind {
    fn choice(self, budget: usize) -> LpChoice {
        match self {
            LpKind::Lp1 => LpChoice::Lp1,
            LpKind::Lp1star => LpChoice::Lp1Star { budget },
        }
    }
}

/// A failed command: exit code and message for stderr.
struct Failure(i32, String);

fn fail(code: i32, msg: impl Display) -> Failure {
    Failure(code, msg.to_string())
}

impl From<ExactError> for Failure {
    fn from(e: ExactError) -> Failure {
        match e {
            ExactError::TooLarge { .. } => fail(EXIT_LIMIT, e),
            ExactError::Unbounded(_) => fail(EXIT_INFEASIBLE, e),
        }
    }
}

impl From<CoverError> for Failure {
    fn from(e: CoverError) -> Failure {
        match e {
            CoverError::BadArguments { .. } => fail(EXIT_INPUT, e),
            CoverError::TooManySubgraphs { .. } | CoverError::DepthExceeded { .. } => fail(EXIT_LIMIT, e),
            _ => fail(EXIT_INFEASIBLE, e),
        }
    }
}

impl From<GapError> for Failure {
    fn from(e: GapError) -> Failure {
        match e {
            GapError::Exact(e) => e.into(),
            _ => fail(EXIT_INFEASIBLE, e),
        }
    }
}

impl From<ApproxError> for Failure {
    fn from(e: ApproxError) -> Failure {
        match e {
            ApproxError::Exact(e) => e.into(),
            _ => fail(EXIT_INFEASIBLE, e),
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| fail(EXIT_INPUT, format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<Instance, Failure> {
    parse_instance(&read(path)?).map_err(|e| fail(EXIT_INPUT, format!("{}: {e}", path.display())))
}

fn plan_for(inst: &Instance, strategy: &str) -> Result<CoverPlan, Failure> {
    match strategy {
        "laminar" => Ok(laminar_cover(inst)?),
        "structural" => Ok(structural_cover(inst)?),
        s => {
            let parsed = s.strip_prefix("forest:").and_then(|ml| {
                let (m, l) = ml.split_once(',')?;
                Some((m.trim().parse().ok()?, l.trim().parse().ok()?))
            });
            let (m, l) = parsed.ok_or_else(|| fail(EXIT_INPUT, format!("unknown strategy {s}")))?;
            Ok(forest_cover(inst, m, l)?)
        }
    }
}

fn pretty(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}

fn execute(cmd: Command, out: &mut dyn Write) -> Result<i32, Failure> {
    let io = |e: std::io::Error| fail(EXIT_INPUT, e);
    match cmd {
        Command::Solve { file, method } => {
            let inst = load(&file)?;
            let x = match method {
                SolveMethod::Exact => brute_force_opt(&inst)?,
                SolveMethod::Bnb => branch_and_bound_opt(&inst)?,
                SolveMethod::Auto => integer_optimum(&inst)?,
            };
            writeln!(out, "{}", x.objective).map_err(io)?;
            writeln!(out, "{}", pretty(&assignment_to_json(&x))).map_err(io)?;
        }
        Command::Bound { file, lp, budget } => {
            let inst = load(&file)?;
            let value = lp_optimum(&inst, lp.choice(budget))?;
            writeln!(out, "{}", format_rational(&value)).map_err(io)?;
        }
        Command::Gap { file, lp, budget } => {
            let inst = load(&file)?;
            let r = measure_gap(&inst, lp.choice(budget))?;
            writeln!(out, "{} {} {}", format_rational(&r.lp), r.ip, format_rational(&r.gap)).map_err(io)?;
        }
        Command::Cover { file, strategy } => {
            let inst = load(&file)?;
            let plan = plan_for(&inst, &strategy)?;
            writeln!(out, "{}", pretty(&plan.to_json(&inst))).map_err(io)?;
            writeln!(out, "ratio {}", format_rational(&plan.ratio())).map_err(io)?;
        }
        Command::Approx { file, strategy } => {
            let inst = load(&file)?;
            let plan = plan_for(&inst, &strategy)?;
            let res = approximate(&inst, &plan)?;
            let methods: Vec<String> = res.methods.iter().map(|m| format!("{m:?}")).collect();
            let doc = json!({
                "assignment": assignment_to_json(&res.assignment),
                "certificate": {
                    "m": plan.m(),
                    "l": plan.l,
                    "ratio": format_rational(&res.ratio),
                    "best_part": res.best_part,
                    "part_objectives": res.part_objectives,
                    "methods": methods,
                },
            });
            writeln!(out, "{}", pretty(&doc)).map_err(io)?;
        }
        Command::Alpha { k, k_prime } => {
            writeln!(out, "{}", format_rational(&alpha(k, k_prime)?)).map_err(io)?;
        }
        Command::Gen { generator: Generator::ThreeDM { file, weighted, split_claws } } => {
            let tdm = ThreeDMInstance::parse(&read(&file)?).map_err(|e| fail(EXIT_INPUT, e))?;
            let inst = if weighted { gen_weighted(&tdm) } else { gen_unweighted(&tdm, split_claws) }
                .map_err(|e| fail(EXIT_INPUT, e))?;
            write!(out, "{}", serialize_instance(&inst)).map_err(io)?;
        }
        Command::Gen { generator: Generator::Random3DM { n, seed } } => {
            if n < 2 {
                return Err(fail(EXIT_INPUT, "a 2-regular instance needs at least two elements per coordinate"));
            }
            write!(out, "{}", ThreeDMInstance::random_two_regular(n, seed)).map_err(io)?;
        }
        Command::Check { file, solution } => {
            let inst = load(&file)?;
            let text = read(&solution)?;
            let x = parse_assignment(&text, &inst).map_err(|e| fail(EXIT_INPUT, format!("{}: {e}", solution.display())))?;
            let found = violations(&inst, &x.to_vector(&inst).expect("parsed against this instance"));
            if found.is_empty() {
                writeln!(out, "feasible objective {}", x.objective).map_err(io)?;
            } else {
                writeln!(out, "infeasible: {} violation(s)", found.len()).map_err(io)?;
                for v in &found {
                    writeln!(out, "{v}").map_err(io)?;
                }
                return Ok(EXIT_INFEASIBLE);
            }
        }
    }
    Ok(EXIT_OK)
}

/// Runs the command line `args` (including the program name).
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { write!(err, "{text}") } else { write!(out, "{text}") };
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(Failure(code, msg)) => {
            let _ = writeln!(err, "error: {msg}");
            code
        }
    }
}

//! Command-line front end. [`run`] holds the whole program so tests can
//! drive it in-process; `main` only wires up the standard streams.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use semiop::bounds::{bound, BoundMethod, BoundReport};
use semiop::harness::{run_all, run_check_id, RankMode, RunOptions};
use semiop::io::{parse_matrix, parse_polynomial, MatrixFile};
use semiop::{Error, Matrix, SemiContext};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_NOT_PSD: i32 = 3;
pub const EXIT_DIMENSION: i32 = 4;
pub const EXIT_UNKNOWN_CHECK: i32 = 5;

#[derive(Parser, Debug)]
#[command(name = "semiop", version, about = "A-weighted operator quantities and block-matrix checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// A-numerical radius, with two independent cross-checks.
    Radius {
        #[command(flatten)]
        input: OpInput,
        /// Bracket width of the final theta search.
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        /// Random vectors for the sampling lower bound.
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// A-adjoint of the operator, as a matrix file.
    Adjoint {
        #[command(flatten)]
        input: OpInput,
    },
    /// A-seminorm of the operator.
    Seminorm {
        #[command(flatten)]
        input: OpInput,
    },
    /// A-spectral radius estimate.
    Spectral {
        #[command(flatten)]
        input: OpInput,
    },
    /// Run one catalog check, or all of them.
    Verify {
        /// Check id, or `all`.
        #[arg(long)]
        check: String,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Force the block dimension.
        #[arg(long)]
        dim: Option<usize>,
        /// Force the block count.
        #[arg(long)]
        blocks: Option<usize>,
        /// Force the weight's rank class.
        #[arg(long, value_enum)]
        rank: Option<RankArg>,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Eigenvalue bounds for a monic matrix polynomial.
    Polybound {
        #[arg(long)]
        poly: PathBuf,
        #[arg(long, value_enum, default_value_t = MethodArg::Both)]
        method: MethodArg,
        /// Also estimate the companion matrix's spectral radius and compare.
        #[arg(long)]
        rho_check: bool,
    },
}

#[derive(Args, Debug)]
struct OpInput {
    /// Weight matrix file.
    #[arg(long, conflicts_with = "identity", required_unless_present = "identity")]
    weight: Option<PathBuf>,
    /// Use the identity weight.
    #[arg(long)]
    identity: bool,
    /// Operator matrix file.
    #[arg(long)]
    op: PathBuf,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum RankArg {
    Full,
    Deficient,
}

#[derive(Clone, Copy, Debug, PartialEq, ValueEnum)]
enum MethodArg {
    Thm53,
    Thm54,
    Both,
}

/// A failure carrying its exit code.
struct Fail(i32, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(exit_code(&e), e.to_string())
    }
}

/// Exit status for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NotPsd { .. } | Error::NotHermitian { .. } => EXIT_NOT_PSD,
        Error::DimensionMismatch { .. } | Error::NotAdmissible { .. } => EXIT_DIMENSION,
        Error::UnknownCheck(_) => EXIT_UNKNOWN_CHECK,
        Error::Parse(_)
        | Error::NonFinite { .. }
        | Error::HypothesisViolation { .. }
        | Error::DegreeTooSmall(_)
        | Error::NegativeNorm(_)
        | Error::BadRank { .. }
        | Error::EmptyList
        | Error::CenterConflict => EXIT_PARSE,
        Error::NoConvergence { .. } => EXIT_CHECK_FAILED,
    }
}

/// Parses `args` (program name first) and runs the command. Returns the
/// process exit status.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            // --help and --version also arrive here
            if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                return EXIT_PARSE;
            }
            let _ = write!(out, "{}", e.render());
            return EXIT_OK;
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(Fail(code, msg)) => {
            let _ = writeln!(err, "error: {msg}");
            code
        }
    }
}

fn read(path: &Path) -> Result<String, Fail> {
    fs::read_to_string(path).map_err(|e| Fail(EXIT_PARSE, format!("{}: {e}", path.display())))
}

fn load(input: &OpInput) -> Result<(SemiContext<f64>, Matrix<f64>), Fail> {
    let op = parse_matrix(&read(&input.op)?)?;
    let ctx = match &input.weight {
        Some(path) => SemiContext::new(parse_matrix(&read(path)?)?)?,
        None => SemiContext::identity(op.rows()),
    };
    if op.shape() != (ctx.dim(), ctx.dim()) {
        return Err(Error::DimensionMismatch {
            expected: format!("{0}x{0}", ctx.dim()),
            found: format!("{}x{}", op.rows(), op.cols()),
        }
        .into());
    }
    Ok((ctx, op))
}

fn emit(out: &mut dyn Write, value: &impl Serialize) -> Result<(), Fail> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Fail(EXIT_CHECK_FAILED, e.to_string()))?;
    writeln!(out, "{text}").map_err(|e| Fail(EXIT_CHECK_FAILED, e.to_string()))
}

fn pairs(v: &[semiop::C<f64>]) -> Vec<[f64; 2]> {
    v.iter().map(|z| [z.re, z.im]).collect()
}

fn dispatch(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Fail> {
    match cmd {
        Command::Radius {
            input,
            tol,
            samples,
            seed,
        } => {
            let (ctx, op) = load(&input)?;
            let r = ctx.a_numerical_radius(&op, tol)?;
            // the Zamani form needs T^#; w_A itself does not
            let zamani = if ctx.admits_a_adjoint(&op) {
                Some(ctx.a_numerical_radius_zamani(&op, tol)?)
            } else {
                None
            };
            let sampled = ctx.a_numerical_radius_sampled(&op, samples, seed)?;
            emit(
                out,
                &json!({
                    "value": r.value,
                    "theta_star": r.theta_star,
                    "witness": pairs(&r.witness),
                    "cross_checks": { "zamani": zamani, "sampled_lower": sampled },
                }),
            )?;
        }
        Command::Adjoint { input } => {
            let (ctx, op) = load(&input)?;
            if !ctx.admits_a_adjoint(&op) {
                return Err(Error::NotAdmissible {
                    defect: ctx.admissibility_defect(&op)?,
                }
                .into());
            }
            emit(out, &MatrixFile::from_matrix(&ctx.a_adjoint(&op)?))?;
        }
        Command::Seminorm { input } => {
            let (ctx, op) = load(&input)?;
            emit(out, &json!({ "value": ctx.a_seminorm(&op)? }))?;
        }
        Command::Spectral { input } => {
            let (ctx, op) = load(&input)?;
            emit(out, &json!({ "value": ctx.a_spectral_radius(&op)? }))?;
        }
        Command::Verify {
            check,
            trials,
            seed,
            dim,
            blocks,
            rank,
            out: path,
        } => {
            let opts = RunOptions {
                trials,
                seed,
                dim,
                blocks,
                rank: rank.map(|r| match r {
                    RankArg::Full => RankMode::Full,
                    RankArg::Deficient => RankMode::Deficient,
                }),
                ..RunOptions::default()
            };
            let reports = if check == "all" {
                let (reports, skipped) = run_all(&opts);
                for id in skipped {
                    let _ = writeln!(err, "skipped {id}: hypotheses exclude the forced parameters");
                }
                reports
            } else {
                vec![run_check_id(&check, &opts)?]
            };
            for r in &reports {
                let _ = writeln!(
                    err,
                    "{} {} max_violation={:e}",
                    if r.pass { "PASS" } else { "FAIL" },
                    r.id,
                    r.max_violation
                );
            }
            match path {
                Some(p) => {
                    let text = serde_json::to_string_pretty(&reports).map_err(|e| Fail(EXIT_CHECK_FAILED, e.to_string()))?;
                    fs::write(&p, text + "\n").map_err(|e| Fail(EXIT_CHECK_FAILED, format!("{}: {e}", p.display())))?;
                }
                None => emit(out, &reports)?,
            }
            if !reports.iter().all(|r| r.pass) {
                return Ok(EXIT_CHECK_FAILED);
            }
        }
        Command::Polybound { poly, method, rho_check } => {
            let p = parse_polynomial(&read(&poly)?)?;
            let methods: &[BoundMethod] = match method {
                MethodArg::Thm53 => &[BoundMethod::Thm53],
                MethodArg::Thm54 => &[BoundMethod::Thm54],
                MethodArg::Both => &[BoundMethod::Thm53, BoundMethod::Thm54],
            };
            let mut reports: Vec<BoundReport> = Vec::new();
            for &m in methods {
                let r = bound(&p, m)?;
                reports.push(if rho_check { r.with_rho_check(&p) } else { r });
            }
            if method == MethodArg::Both {
                emit(out, &reports)?;
            } else {
                emit(out, &reports[0])?;
            }
            if reports.iter().any(|r| r.rho_within_bound == Some(false)) {
                return Ok(EXIT_CHECK_FAILED);
            }
        }
    }
    Ok(EXIT_OK)
}

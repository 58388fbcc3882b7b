//! Seeded randomized verification of A-numerical radius identities and
//! bounds for block operator matrices.
//!
//! Every check draws independent trials. Trial `k` of a run with seed `s`
//! uses its own generator seeded with `s + k`, so reports do not depend on
//! how trials are scheduled across threads.

mod catalog;
pub mod gen;

use std::collections::HashMap;
use std::time::{Duration, Instant};

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::semi::SemiContext;
use crate::structured::BlockMatrix;

pub use catalog::{catalog, find_check, printed_cross_pairs, CrossPair};
pub use gen::{random_admissible, random_psd};

/// Default relative tolerance for equality checks.
pub const TOL_EQ: f64 = 1e-6;
/// Default absolute slack for upper-bound checks.
pub const TOL_INEQ: f64 = 1e-8;
/// Relative residual allowed in structural identities.
pub const TOL_STRUCT: f64 = 1e-10;
/// Environment variable capping the worker count; `0` runs serially.
pub const THREADS_ENV: &str = "SEMIOP_THREADS";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckKind {
    /// `|lhs - rhs| <= tol_eq * max(1, |rhs|)`
    Equality,
    /// `lhs <= rhs + tol_ineq`
    UpperBound,
    /// Residual `lhs` of an exact identity, at most [`TOL_STRUCT`].
    Structural,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RankMode {
    Full,
    Deficient,
}

/// (lhs, rhs) pairs produced by one trial.
pub(crate) type Pairs = Result<Vec<(f64, f64)>>;

/// One catalog entry.
#[derive(Clone, Copy)]
pub struct CheckSpec {
    pub id: &'static str,
    pub kind: CheckKind,
    /// The relation being checked, in words.
    pub statement: &'static str,
    /// Admissible block dimensions `d`.
    pub dims: &'static [usize],
    /// Admissible block counts `n`.
    pub blocks: &'static [usize],
    /// Whether singular weights are allowed.
    pub singular_ok: bool,
    pub(crate) run: fn(&mut Trial) -> Pairs,
}

impl std::fmt::Debug for CheckSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CheckSpec")
            .field("id", &self.id)
            .field("kind", &self.kind)
            .field("dims", &self.dims)
            .field("blocks", &self.blocks)
            .finish()
    }
}

/// Knobs for [`run_check`].
#[derive(Clone, Debug)]
pub struct RunOptions {
    pub trials: usize,
    pub seed: u64,
    pub tol_eq: f64,
    pub tol_ineq: f64,
    /// Forces the block dimension.
    pub dim: Option<usize>,
    /// Forces the block count.
    pub blocks: Option<usize>,
    /// Forces the weight's rank class; otherwise trials alternate, even
    /// trials full rank.
    pub rank: Option<RankMode>,
    /// Worker threads; `Some(0)` is serial, `None` uses [`THREADS_ENV`].
    pub threads: Option<usize>,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            trials: 100,
            seed: 0,
            tol_eq: TOL_EQ,
            tol_ineq: TOL_INEQ,
            dim: None,
            blocks: None,
            rank: None,
            threads: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    pub trial: usize,
    pub lhs: f64,
    pub rhs: f64,
    pub violation: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub id: String,
    pub seed: u64,
    pub trials: usize,
    /// Worst violation over all trials: relative gap for equalities,
    /// `lhs - rhs` for bounds (negative when every trial had room to spare),
    /// residual for structural identities.
    pub max_violation: f64,
    pub failures: Vec<Failure>,
    pub pass: bool,
    #[serde(skip)]
    pub elapsed: Duration,
}

/// Per-trial state handed to a check.
pub struct Trial {
    pub index: usize,
    pub d: usize,
    pub n: usize,
    pub rng: ChaCha8Rng,
    pub ctx: SemiContext<f64>,
    inflated: HashMap<usize, SemiContext<f64>>,
}

impl Trial {
    pub fn new(index: usize, seed: u64, d: usize, n: usize, rank: usize) -> Result<Self> {
        let mut rng = gen::rng_from_seed(seed);
        let ctx = SemiContext::new(gen::random_psd_with(d, rank, &mut rng)?)?;
        Ok(Trial {
            index,
            d,
            n,
            rng,
            ctx,
            inflated: HashMap::new(),
        })
    }

    /// A fresh admissible block.
    pub fn op(&mut self) -> Matrix<f64> {
        gen::random_admissible_with(&self.ctx, &mut self.rng)
    }

    pub fn ops(&mut self, k: usize) -> Vec<Matrix<f64>> {
        (0..k).map(|_| self.op()).collect()
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.rng.random_range(lo..hi)
    }

    /// `w_A`
    pub fn w(&self, t: &Matrix<f64>) -> Result<f64> {
        self.ctx.w(t)
    }

    /// `||.||_A`
    pub fn norm(&self, t: &Matrix<f64>) -> Result<f64> {
        self.ctx.a_seminorm(t)
    }

    /// `w_AA` of a block matrix under `diag(A, ..., A)`.
    pub fn wb(&mut self, m: &BlockMatrix<f64>) -> Result<f64> {
        let ctx = &self.ctx;
        let big = self.inflated.entry(m.n()).or_insert_with(|| ctx.inflate(m.n()));
        big.w(&m.flatten())
    }

    /// `w_AA([[a, b], [c, e]])`
    pub fn w2(&mut self, a: &Matrix<f64>, b: &Matrix<f64>, c: &Matrix<f64>, e: &Matrix<f64>) -> Result<f64> {
        let parts = [a, b, c, e];
        let m = BlockMatrix::from_fn(2, self.d, |i, j| parts[2 * i + j].clone())?;
        self.wb(&m)
    }

    /// `w_AA([[O, b], [c, O]])`
    pub fn w_off(&mut self, b: &Matrix<f64>, c: &Matrix<f64>) -> Result<f64> {
        let z = Matrix::zeros(self.d, self.d);
        self.w2(&z, b, c, &z)
    }

    pub fn zero(&self) -> Matrix<f64> {
        Matrix::zeros(self.d, self.d)
    }
}

/// Worker count from [`THREADS_ENV`]; `None` when unset or unparsable.
pub fn threads_from_env() -> Option<usize> {
    std::env::var(THREADS_ENV).ok()?.trim().parse().ok()
}

fn resolve(spec: &CheckSpec, opts: &RunOptions) -> Result<()> {
    let bad = |reason: String| {
        Err(Error::HypothesisViolation {
            id: spec.id.to_string(),
            reason,
        })
    };
    if let Some(d) = opts.dim {
        // a single admissible dimension marks a fixed instance
        let pinned = spec.dims.len() == 1 && spec.dims[0] != d;
        if d == 0 || pinned {
            return bad(format!("block dimension {d} not in {:?}", spec.dims));
        }
    }
    if let Some(n) = opts.blocks {
        if !spec.blocks.contains(&n) {
            return bad(format!("block count {n} not in {:?}", spec.blocks));
        }
    }
    if opts.rank == Some(RankMode::Deficient) && !spec.singular_ok {
        return bad("needs a full-rank weight".into());
    }
    Ok(())
}

fn run_trial(spec: &CheckSpec, opts: &RunOptions, k: usize) -> Pairs {
    let seed = opts.seed.wrapping_add(k as u64);
    let mut pick = gen::rng_from_seed(seed ^ 0x05ee_d0f7_a1a1);
    let d = opts.dim.unwrap_or_else(|| spec.dims[pick.random_range(0..spec.dims.len())]);
    let n = opts.blocks.unwrap_or_else(|| spec.blocks[pick.random_range(0..spec.blocks.len())]);
    let mode = opts.rank.unwrap_or(if k.is_multiple_of(2) || !spec.singular_ok {
        RankMode::Full
    } else {
        RankMode::Deficient
    });
    let rank = match mode {
        RankMode::Full => d,
        RankMode::Deficient if d == 1 => 0,
        RankMode::Deficient => pick.random_range(1..d),
    };
    let mut trial = Trial::new(k, seed, d, n, rank)?;
    (spec.run)(&mut trial)
}

fn score(kind: CheckKind, lhs: f64, rhs: f64, opts: &RunOptions) -> (f64, bool) {
    match kind {
        CheckKind::Equality => {
            let v = (lhs - rhs).abs() / rhs.abs().max(1.0);
            (v, v <= opts.tol_eq)
        }
        CheckKind::UpperBound => {
            let v = lhs - rhs;
            (v, v <= opts.tol_ineq)
        }
        CheckKind::Structural => (lhs, lhs <= TOL_STRUCT),
    }
}

/// Runs `f` on a pool of `threads` workers, or on the global pool when the
/// count is unset. Callers handle the serial case themselves.
fn with_threads<R: Send>(threads: Option<usize>, f: impl FnOnce() -> R + Send) -> R {
    match threads.or_else(threads_from_env) {
        Some(k) if k > 0 => rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build()
            .expect("thread pool")
            .install(f),
        _ => f(),
    }
}

fn serial(threads: Option<usize>) -> bool {
    threads.or_else(threads_from_env) == Some(0)
}

/// Executes `opts.trials` instances of `spec`.
pub fn run_check(spec: &CheckSpec, opts: &RunOptions) -> Result<CheckReport> {
    resolve(spec, opts)?;
    let start = Instant::now();
    let outcomes: Vec<_> = if serial(opts.threads) {
        (0..opts.trials).map(|k| run_trial(spec, opts, k)).collect()
    } else {
        with_threads(opts.threads, || {
            (0..opts.trials)
                .into_par_iter()
                .map(|k| run_trial(spec, opts, k))
                .collect()
        })
    };
    let mut max_violation = f64::NEG_INFINITY;
    let mut failures = Vec::new();
    for (k, out) in outcomes.into_iter().enumerate() {
        let pairs = match out {
            Ok(p) => p,
            Err(_) => vec![(f64::NAN, f64::NAN)],
        };
        let mut worst: Option<Failure> = None;
        for (lhs, rhs) in pairs {
            let (v, ok) = score(spec.kind, lhs, rhs, opts);
            let (v, ok) = if v.is_nan() { (f64::INFINITY, false) } else { (v, ok) };
            max_violation = max_violation.max(v);
            if !ok && worst.as_ref().is_none_or(|w| v > w.violation) {
                worst = Some(Failure {
                    trial: k,
                    lhs,
                    rhs,
                    violation: v,
                });
            }
        }
        failures.extend(worst);
    }
    if opts.trials == 0 {
        max_violation = 0.0;
    }
    Ok(CheckReport {
        id: spec.id.to_string(),
        seed: opts.seed,
        trials: opts.trials,
        max_violation,
        pass: failures.is_empty(),
        failures,
        elapsed: start.elapsed(),
    })
}

/// Looks up `id` and runs it.
pub fn run_check_id(id: &str, opts: &RunOptions) -> Result<CheckReport> {
    let spec = find_check(id).ok_or_else(|| Error::UnknownCheck(id.to_string()))?;
    run_check(spec, opts)
}

/// Runs the whole catalog in catalog order, skipping checks whose hypotheses
/// exclude the forced dimension, block count or rank. Skipped ids are
/// returned alongside the reports.
pub fn run_all(opts: &RunOptions) -> (Vec<CheckReport>, Vec<String>) {
    let mut reports = Vec::new();
    let mut skipped = Vec::new();
    for spec in catalog() {
        match run_check(spec, opts) {
            Ok(r) => reports.push(r),
            Err(_) => skipped.push(spec.id.to_string()),
        }
    }
    (reports, skipped)
}

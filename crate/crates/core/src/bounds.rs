//! Eigenvalue bounds for monic matrix polynomials, and the closed-form
//! constants for the Foguel and little-Hankel operators. The weight is the
//! identity throughout.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{dim_mismatch, Error, Result};
use crate::harness::gen::{gaussian_matrix, rng_from_seed};
use crate::linalg::{numerical_radius, numerical_radius_upper, op_norm, spectral_radius_est, Matrix};
use crate::structured::{companion, shift_matrix, BlockMatrix};

const RADIUS_TOL: f64 = 1e-12;
/// Squaring steps for the advisory spectral radius estimate.
pub const RHO_STEPS: u32 = 40;
/// Slack allowed between the spectral radius estimate and a bound.
pub const RHO_SLACK: f64 = 1e-6;

/// `P(z) = I z^n + S_n z^{n-1} + ... + S_2 z + S_1`, stored as `S_1..S_n`.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixPolynomial {
    coeffs: Vec<Matrix<f64>>,
}

impl MatrixPolynomial {
    pub fn new(coeffs: Vec<Matrix<f64>>) -> Result<Self> {
        if coeffs.len() < 2 {
            return Err(Error::DegreeTooSmall(coeffs.len()));
        }
        let d = coeffs[0].rows();
        for c in &coeffs {
            if c.shape() != (d, d) {
                return Err(dim_mismatch(format!("{d}x{d}"), format!("{}x{}", c.rows(), c.cols())));
            }
        }
        Ok(Self { coeffs })
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len()
    }

    pub fn dim(&self) -> usize {
        self.coeffs[0].rows()
    }

    /// `S_1..S_n`.
    pub fn coeffs(&self) -> &[Matrix<f64>] {
        &self.coeffs
    }

    /// `S_k`, 1-based.
    pub fn s(&self, k: usize) -> &Matrix<f64> {
        &self.coeffs[k - 1]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundMethod {
    Thm53,
    Thm54,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub method: BoundMethod,
    pub bound: f64,
    pub components: BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rho_check: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rho_within_bound: Option<bool>,
}

impl BoundReport {
    /// Attach the spectral radius estimate of the companion matrix.
    pub fn with_rho_check(mut self, p: &MatrixPolynomial) -> Self {
        let rho = spectral_radius_est(&companion(p).flatten(), RHO_STEPS);
        self.rho_check = Some(rho);
        self.rho_within_bound = Some(rho <= self.bound + RHO_SLACK);
        self
    }
}

fn w(m: &Matrix<f64>) -> Result<f64> {
    Ok(numerical_radius(m, RADIUS_TOL)?.value)
}

/// `(w(S_n) + sqrt(w(S_n)^2 + 4 w([[O, S_{n-1}], [I, O]])^2 + sum_{k<=n-2} ||S_k||^2)) / 2 + cos(pi/n)`
pub fn bound_thm53(p: &MatrixPolynomial) -> Result<BoundReport> {
    let n = p.degree();
    let d = p.dim();
    let wn = w(p.s(n))?;
    let z = Matrix::zeros(d, d);
    let pair = BlockMatrix::from_fn(2, d, |i, j| match (i, j) {
        (0, 1) => p.s(n - 1).clone(),
        (1, 0) => Matrix::identity(d),
        _ => z.clone(),
    })?;
    let block = w(&pair.flatten())?;
    let norms: f64 = (1..n - 1).map(|k| op_norm(p.s(k)).powi(2)).sum();
    let cosine = (PI / n as f64).cos();
    let bound = (wn + (wn * wn + 4.0 * block * block + norms).sqrt()) / 2.0 + cosine;
    Ok(report(
        BoundMethod::Thm53,
        bound,
        [("w_sn", wn), ("block_radius", block), ("norm_sq_sum", norms), ("cosine", cosine)],
    ))
}

/// `(w(S_n) + sqrt(w(S_n)^2 + sum_{k<=n-1} ||S_k||^2)) / 2 + cos(pi/(n+1))`
pub fn bound_thm54(p: &MatrixPolynomial) -> Result<BoundReport> {
    let n = p.degree();
    let wn = w(p.s(n))?;
    let norms: f64 = (1..n).map(|k| op_norm(p.s(k)).powi(2)).sum();
    let cosine = (PI / (n + 1) as f64).cos();
    let bound = (wn + (wn * wn + norms).sqrt()) / 2.0 + cosine;
    Ok(report(BoundMethod::Thm54, bound, [("w_sn", wn), ("norm_sq_sum", norms), ("cosine", cosine)]))
}

pub fn bound(p: &MatrixPolynomial, method: BoundMethod) -> Result<BoundReport> {
    match method {
        BoundMethod::Thm53 => bound_thm53(p),
        BoundMethod::Thm54 => bound_thm54(p),
    }
}

fn report<const K: usize>(method: BoundMethod, bound: f64, parts: [(&str, f64); K]) -> BoundReport {
    BoundReport {
        method,
        bound,
        components: parts.into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
        rho_check: None,
        rho_within_bound: None,
    }
}

fn nonnegative(x: f64) -> Result<()> {
    if x >= 0.0 {
        Ok(())
    } else {
        Err(Error::NegativeNorm(x))
    }
}

/// `3/2 + sqrt(1 + x^2) / 2`, the numerical radius bound for the Foguel
/// operator whose Hankel block has norm `x`.
pub fn foguel_bound(hankel_norm: f64) -> Result<f64> {
    nonnegative(hankel_norm)?;
    Ok(1.5 + 0.5 * (1.0 + hankel_norm * hankel_norm).sqrt())
}

/// Norm bound `||g||_inf = pi` for the Hankel operator in the Foguel example.
pub fn hankel_symbol_bound() -> f64 {
    PI
}

/// `(1 + sqrt n) / 2 * phi_sup`
pub fn little_hankel_bound(phi_sup: f64, n: usize) -> Result<f64> {
    nonnegative(phi_sup)?;
    if n == 0 {
        return Err(dim_mismatch("at least one block", 0));
    }
    Ok((1.0 + (n as f64).sqrt()) / 2.0 * phi_sup)
}

/// Outcome of a finite-section desk check. `worst_margin` is the smallest
/// `bound - radius` seen; it is negative iff there was a violation.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DeskReport {
    pub samples: usize,
    pub violations: usize,
    pub worst_margin: f64,
}

impl DeskReport {
    fn new() -> Self {
        Self {
            samples: 0,
            violations: 0,
            worst_margin: f64::INFINITY,
        }
    }

    fn record(&mut self, radius: f64, bound: f64) {
        self.samples += 1;
        let margin = bound - radius;
        if margin.is_nan() || margin < 0.0 {
            self.violations += 1;
        }
        self.worst_margin = self.worst_margin.min(margin);
    }
}

/// Grid size for the certified upper radius in the Foguel check.
const FOGUEL_GRID: usize = 64;

/// `w([[S*, X], [O, S]]) <= foguel_bound(||X||)` for the `n x n` shift `S`
/// and random `X` with `||X|| <= pi`. The radius is overestimated, so a
/// pass is conclusive.
pub fn foguel_desk_check(n: usize, samples: usize, seed: u64) -> Result<DeskReport> {
    let mut rng = rng_from_seed(seed);
    let s = shift_matrix::<f64>(n);
    let st = s.adjoint();
    let z = Matrix::zeros(n, n);
    let mut out = DeskReport::new();
    for _ in 0..samples {
        let g = gaussian_matrix::<f64>(n, n, &mut rng);
        let target = PI * rand::Rng::random_range(&mut rng, 0.0..=1.0);
        let x = g.scale_real(target / op_norm(&g));
        let m = BlockMatrix::from_fn(2, n, |i, j| match (i, j) {
            (0, 0) => st.clone(),
            (0, 1) => x.clone(),
            (1, 1) => s.clone(),
            _ => z.clone(),
        })?;
        let upper = numerical_radius_upper(&m.flatten(), FOGUEL_GRID)?;
        out.record(upper, foguel_bound(op_norm(&x))?);
    }
    Ok(out)
}

/// `w` of the `n`-block matrix with `B` across the first block row and zeros
/// elsewhere, against `little_hankel_bound(||B||, n)`.
pub fn little_hankel_desk_check(n: usize, d: usize, samples: usize, seed: u64) -> Result<DeskReport> {
    let mut rng = rng_from_seed(seed);
    let z = Matrix::zeros(d, d);
    let mut out = DeskReport::new();
    for _ in 0..samples {
        let b = gaussian_matrix::<f64>(d, d, &mut rng);
        let m = BlockMatrix::from_fn(n, d, |i, _| if i == 0 { b.clone() } else { z.clone() })?;
        out.record(w(&m.flatten())?, little_hankel_bound(op_norm(&b), n)?);
    }
    Ok(out)
}

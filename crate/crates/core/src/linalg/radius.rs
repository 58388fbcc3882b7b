//! Classical numerical radius and spectral radius estimates.

use serde::Serialize;

use crate::error::{dim_mismatch, Result};
use crate::linalg::eig::hermitian_eigvals_unchecked;
use crate::linalg::optimize::golden_max;
use crate::linalg::{hermitian_eig_auto, lambda_max_hermitian, op_norm, Matrix};
use crate::scalar::{cplx, Real, C};

/// Doublings used by [`spectral_radius_est`] when no count is given.
pub const DEFAULT_SQUARINGS: u32 = 40;

/// How a [`RadiusResult`] was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RadiusMethod {
    /// Classical radius of the reduced matrix.
    Reduction,
    /// Direct sweep of `lambda_max(Re(e^{i theta} M))`.
    ThetaSweep,
    /// Best value over random unit vectors; a lower bound only.
    Sampling,
}

#[derive(Clone, Debug)]
pub struct RadiusResult<T: Real> {
    pub value: T,
    pub theta_star: T,
    pub witness: Vec<C<T>>,
    pub method: RadiusMethod,
    pub achieved_tol: T,
}

/// Knobs for the theta sweep.
#[derive(Clone, Copy, Debug)]
pub struct RadiusOptions<T: Real> {
    /// Uniform grid points on `[0, 2 pi)`.
    pub grid: usize,
    /// Final golden-section bracket width.
    pub theta_tol: T,
}

impl<T: Real> Default for RadiusOptions<T> {
    fn default() -> Self {
        RadiusOptions {
            grid: 720,
            theta_tol: T::lit(1e-10),
        }
    }
}

/// `w(M) = max_theta lambda_max((e^{i theta} M + e^{-i theta} M*) / 2)`.
///
/// `tol` is the golden-section bracket width in `theta`; the value error
/// is bounded by `tol * ||M||` plus eigensolver accuracy.
pub fn numerical_radius<T: Real>(m: &Matrix<T>, tol: T) -> Result<RadiusResult<T>> {
    numerical_radius_with(
        m,
        &RadiusOptions {
            theta_tol: tol,
            ..RadiusOptions::default()
        },
    )
}

pub fn numerical_radius_with<T: Real>(m: &Matrix<T>, opts: &RadiusOptions<T>) -> Result<RadiusResult<T>> {
    if !m.is_square() {
        return Err(dim_mismatch("square", format!("{}x{}", m.rows(), m.cols())));
    }
    let n = m.rows();
    let tau = T::TAU();
    let scale = m.frobenius_norm();
    if n == 0 || scale == T::zero() {
        let mut witness = vec![C::new(T::zero(), T::zero()); n];
        if n > 0 {
            witness[0] = C::new(T::one(), T::zero());
        }
        return Ok(RadiusResult {
            value: T::zero(),
            theta_star: T::zero(),
            witness,
            method: RadiusMethod::ThetaSweep,
            achieved_tol: T::zero(),
        });
    }
    if n == 1 {
        let z = m[(0, 0)];
        let theta = normalize_angle(-z.arg());
        return Ok(RadiusResult {
            value: z.norm(),
            theta_star: theta,
            witness: vec![C::new(T::one(), T::zero())],
            method: RadiusMethod::ThetaSweep,
            achieved_tol: T::zero(),
        });
    }
    let pencil = Pencil::new(m);
    let width = opts.theta_tol.max(T::epsilon() * T::lit(64.0) * tau);
    // lambda_max at theta + pi is -lambda_min at theta, so one solve covers
    // two grid points
    let half = opts.grid.max(4).div_ceil(2);
    let step = T::PI() / T::from_usize(half).unwrap();
    let mut best = (T::neg_infinity(), T::zero());
    for k in 0..half {
        let theta = step * T::from_usize(k).unwrap();
        let vals = hermitian_eigvals_unchecked(&pencil.at(theta))?;
        let hi = *vals.last().unwrap();
        let lo = -vals[0];
        if hi > best.0 {
            best = (hi, theta);
        }
        if lo > best.0 {
            best = (lo, theta + T::PI());
        }
    }
    let (grid_value, center) = best;
    let (theta, value) = golden_max(
        &mut |t| lambda_max_hermitian(&pencil.at(t)),
        center - step,
        center + step,
        width,
    )?;
    let theta = normalize_angle(if value >= grid_value { theta } else { center });
    let eig = hermitian_eig_auto(&pencil.at(theta))?;
    let top = eig.dim() - 1;
    let witness = eig.vectors.column(top);
    let value = eig.values[top].max(T::zero());
    Ok(RadiusResult {
        value,
        theta_star: theta,
        witness,
        method: RadiusMethod::ThetaSweep,
        achieved_tol: width * scale + T::epsilon() * T::lit(100.0) * scale,
    })
}

/// Certified upper bound `w(M) <= max_k f(theta_k) / cos(h / 2)` from a
/// uniform grid of spacing `h` with no refinement, where
/// `f(theta) = lambda_max(Re(e^{i theta} M))`. Every point of the numerical
/// range is within `h / 2` in angle of some grid direction.
///
/// `grid` counts points on `[0, 2 pi)` and is rounded up to an even number
/// of at least 8; each eigenvalue solve covers two opposite points.
pub fn numerical_radius_upper<T: Real>(m: &Matrix<T>, grid: usize) -> Result<T> {
    if !m.is_square() {
        return Err(dim_mismatch("square", format!("{}x{}", m.rows(), m.cols())));
    }
    match m.rows() {
        0 => return Ok(T::zero()),
        1 => return Ok(m[(0, 0)].norm()),
        _ => {}
    }
    let pencil = Pencil::new(m);
    let half = grid.max(8).div_ceil(2);
    let step = T::PI() / T::from_usize(half).unwrap();
    let mut best = T::zero();
    for k in 0..half {
        let vals = hermitian_eigvals_unchecked(&pencil.at(step * T::from_usize(k).unwrap()))?;
        best = best.max(*vals.last().unwrap()).max(-vals[0]);
    }
    // slack for the eigensolver's own backward error
    let slack = T::epsilon() * T::lit(100.0) * m.frobenius_norm();
    Ok(best / (step * T::lit(0.5)).cos() + slack)
}

fn normalize_angle<T: Real>(t: T) -> T {
    let tau = T::TAU();
    let r = t % tau;
    if r < T::zero() {
        r + tau
    } else {
        r
    }
}

/// `Re(e^{i theta} M) = cos(theta) H + sin(theta) K` with `H = (M + M*)/2`
/// and `K = i (M - M*) / 2`.
struct Pencil<T: Real> {
    h: Matrix<T>,
    k: Matrix<T>,
}

impl<T: Real> Pencil<T> {
    fn new(m: &Matrix<T>) -> Self {
        let ma = m.adjoint();
        let half = T::lit(0.5);
        let h = (m + &ma).scale_real(half);
        let k = (m - &ma).scale(cplx(T::zero(), half));
        Pencil { h, k }
    }

    fn at(&self, theta: T) -> Matrix<T> {
        let (s, c) = theta.sin_cos();
        let n = self.h.rows();
        let mut out = Matrix::from_fn(n, n, |i, j| self.h[(i, j)] * c + self.k[(i, j)] * s);
        for i in 0..n {
            out[(i, i)].im = T::zero();
        }
        out
    }
}

/// Upper estimate of the spectral radius, `||M^(2^k)||^(1/2^k)` by repeated
/// squaring with per-step Frobenius normalisation.
pub fn spectral_radius_est<T: Real>(m: &Matrix<T>, steps: u32) -> T {
    if m.rows() == 0 || !m.is_square() {
        return T::zero();
    }
    let mut b = m.clone();
    // log of the running estimate, as sum of ln(f_j) / 2^j
    let mut acc = T::zero();
    let mut weight = T::one();
    for _ in 0..steps {
        let f = b.frobenius_norm();
        if f == T::zero() {
            return T::zero();
        }
        acc += f.ln() * weight;
        let bn = b.scale_real(T::one() / f);
        b = &bn * &bn;
        weight *= T::lit(0.5);
    }
    let top = op_norm(&b);
    if top == T::zero() {
        return T::zero();
    }
    (acc + top.ln() * weight).exp()
}

/// Power-iteration estimate of the spectral radius, used as an independent
/// cross-check of [`spectral_radius_est`]. Returns the geometric mean growth
/// over the last `iters / 2` steps from a fixed start vector.
pub fn spectral_radius_power<T: Real>(m: &Matrix<T>, iters: usize) -> T {
    let n = m.rows();
    if n == 0 || !m.is_square() {
        return T::zero();
    }
    let mut x: Vec<C<T>> = (0..n)
        .map(|i| cplx(T::one(), T::from_usize(i + 1).unwrap().sqrt().recip()))
        .collect();
    let iters = iters.max(2);
    let burn = iters / 2;
    let mut log_growth = T::zero();
    for step in 0..iters {
        let nx = crate::linalg::vec_norm(&x);
        if nx == T::zero() {
            return T::zero();
        }
        for z in x.iter_mut() {
            *z /= nx;
        }
        x = m.matvec(&x).expect("square");
        if step >= burn {
            let g = crate::linalg::vec_norm(&x);
            if g == T::zero() {
                return T::zero();
            }
            log_growth += g.ln();
        }
    }
    (log_growth / T::from_usize(iters - burn).unwrap()).exp()
}

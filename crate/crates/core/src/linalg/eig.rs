//! Hermitian eigensolvers.
//!
//! The primary solver is cyclic Jacobi with complex rotations. A Householder
//! tridiagonalisation followed by implicit QL is kept alongside it for
//! matrices beyond the Jacobi working range and as an independent route in
//! tests.

use num_traits::{One, Zero};

use crate::error::{dim_mismatch, Error, Result};
use crate::linalg::Matrix;
use crate::scalar::{real, Real, C};

/// Sweep limit for cyclic Jacobi.
pub const MAX_SWEEPS: usize = 100;

/// Above this order `numerical_radius` and friends switch to the
/// tridiagonal solver.
pub const JACOBI_MAX_DIM: usize = 64;

/// Eigenpairs of a Hermitian matrix, values ascending.
#[derive(Clone, Debug)]
pub struct EigDecomp<T: Real> {
    pub values: Vec<T>,
    /// Columns are orthonormal eigenvectors, in the order of `values`.
    pub vectors: Matrix<T>,
}

impl<T: Real> EigDecomp<T> {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn max_value(&self) -> T {
        self.values.last().copied().unwrap_or_else(T::zero)
    }

    pub fn min_value(&self) -> T {
        self.values.first().copied().unwrap_or_else(T::zero)
    }

    /// `V diag(f(lambda)) V*`
    pub fn reconstruct_with(&self, f: impl Fn(T) -> T) -> Matrix<T> {
        let n = self.dim();
        let v = &self.vectors;
        let weights: Vec<T> = self.values.iter().map(|&l| f(l)).collect();
        Matrix::from_fn(n, n, |i, j| {
            let mut acc = C::zero();
            for (k, &w) in weights.iter().enumerate() {
                if w != T::zero() {
                    acc += v[(i, k)] * v[(j, k)].conj() * w;
                }
            }
            acc
        })
    }
}

/// Default relative off-diagonal threshold (1e-13 in `f64`).
pub fn default_eig_tol<T: Real>() -> T {
    T::tol_at_least(1e-13, 450.0)
}

/// Accepted asymmetry `||M - M*||_max <= h * ||M||_max` for Hermitian input.
pub fn hermitian_input_tol<T: Real>() -> T {
    T::tol_at_least(1e-10, 100.0)
}

/// Validates near-Hermitian input and returns `(M + M*) / 2`.
pub fn symmetrize_checked<T: Real>(m: &Matrix<T>) -> Result<Matrix<T>> {
    if !m.is_square() {
        return Err(dim_mismatch("square", format!("{}x{}", m.rows(), m.cols())));
    }
    let asym = m.max_diff(&m.adjoint());
    let scale = m.max_abs();
    if asym > hermitian_input_tol::<T>() * scale {
        return Err(Error::NotHermitian {
            asymmetry: asym.to_f64_lossy(),
        });
    }
    Ok(m.hermitian_part())
}

/// Eigendecomposition of a Hermitian matrix by cyclic Jacobi.
///
/// `tol` is the relative off-diagonal Frobenius mass at which sweeping
/// stops.
pub fn hermitian_eig<T: Real>(m: &Matrix<T>, tol: T) -> Result<EigDecomp<T>> {
    let mut a = symmetrize_checked(m)?;
    let n = a.rows();
    let mut v = Matrix::identity(n);
    jacobi_in_place(&mut a, &mut [], Some(&mut v), tol)?;
    Ok(sorted(
        (0..n).map(|i| a[(i, i)].re).collect(),
        v,
    ))
}

fn sorted<T: Real>(values: Vec<T>, vectors: Matrix<T>) -> EigDecomp<T> {
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| values[i].partial_cmp(&values[j]).expect("finite eigenvalues"));
    let sorted_values = order.iter().map(|&k| values[k]).collect();
    let sorted_vectors = Matrix::from_fn(vectors.rows(), n, |i, j| vectors[(i, order[j])]);
    EigDecomp {
        values: sorted_values,
        vectors: sorted_vectors,
    }
}

fn off_diagonal_mass<T: Real>(a: &Matrix<T>) -> T {
    let n = a.rows();
    let mut s = T::zero();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Diagonalises the Hermitian matrix `a` in place.
///
/// Every rotation `G` is also applied as `X <- G* X G` to each entry of
/// `companions` and as `V <- V G` to `vectors`. Keeping companions rotated
/// along lets a family of nearby matrices be diagonalised from a warm start.
pub(crate) fn jacobi_in_place<T: Real>(
    a: &mut Matrix<T>,
    companions: &mut [&mut Matrix<T>],
    mut vectors: Option<&mut Matrix<T>>,
    tol: T,
) -> Result<()> {
    let n = a.rows();
    if n < 2 {
        return Ok(());
    }
    let norm = a.frobenius_norm();
    if norm == T::zero() {
        return Ok(());
    }
    let target = tol * norm;
    // rotations smaller than this cannot move the off-diagonal mass
    let skip = target * T::lit(1e-3) / T::from_usize(n).unwrap();
    for _sweep in 0..MAX_SWEEPS {
        if off_diagonal_mass(a) <= target {
            return Ok(());
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                let b = a[(p, q)];
                let r = b.norm();
                if r <= skip {
                    continue;
                }
                let u = b / r;
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let theta = (aqq - app) / (r + r);
                let t = if theta == T::zero() {
                    T::one()
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt())
                };
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;
                let rot = Rotation { p, q, c, s, u };
                rot.apply_similarity(a);
                a[(p, q)] = C::zero();
                a[(q, p)] = C::zero();
                a[(p, p)] = real(app - t * r);
                a[(q, q)] = real(aqq + t * r);
                for m in companions.iter_mut() {
                    rot.apply_similarity(m);
                }
                if let Some(v) = vectors.as_deref_mut() {
                    rot.apply_right(v);
                }
            }
        }
    }
    if off_diagonal_mass(a) <= target {
        Ok(())
    } else {
        Err(Error::NoConvergence {
            routine: "hermitian_eig",
            iterations: MAX_SWEEPS,
        })
    }
}

/// `G = D R` with `D = diag(1, conj(u))` on (p, q) and `R` the real rotation
/// `[[c, s], [-s, c]]`.
struct Rotation<T: Real> {
    p: usize,
    q: usize,
    c: T,
    s: T,
    u: C<T>,
}

impl<T: Real> Rotation<T> {
    /// `X <- X G`
    fn apply_right(&self, x: &mut Matrix<T>) {
        let (p, q, c, s) = (self.p, self.q, self.c, self.s);
        let ub = self.u.conj();
        for k in 0..x.rows() {
            let xp = x[(k, p)];
            let xq = x[(k, q)] * ub;
            x[(k, p)] = xp * c - xq * s;
            x[(k, q)] = xp * s + xq * c;
        }
    }

    /// `X <- G* X`
    fn apply_left_adjoint(&self, x: &mut Matrix<T>) {
        let (p, q, c, s) = (self.p, self.q, self.c, self.s);
        let u = self.u;
        for k in 0..x.cols() {
            let xp = x[(p, k)];
            let xq = x[(q, k)] * u;
            x[(p, k)] = xp * c - xq * s;
            x[(q, k)] = xp * s + xq * c;
        }
    }

    fn apply_similarity(&self, x: &mut Matrix<T>) {
        self.apply_right(x);
        self.apply_left_adjoint(x);
    }
}

/// Eigendecomposition through Householder tridiagonalisation and implicit QL.
pub fn hermitian_eig_tridiagonal<T: Real>(m: &Matrix<T>) -> Result<EigDecomp<T>> {
    let a = symmetrize_checked(m)?;
    let n = a.rows();
    let (d, e, q) = tridiagonalize(a, true);
    let mut q = q.expect("requested");
    let (values, z) = tridiagonal_ql(d, e, true)?;
    let z = z.expect("requested");
    // vectors = Q * Z with Z real
    let mut vectors = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let mut acc = C::zero();
            for k in 0..n {
                acc += q[(i, k)] * z[k * n + j];
            }
            vectors[(i, j)] = acc;
        }
    }
    q = vectors;
    Ok(sorted(values, q))
}

/// Eigenvalues only, ascending, via the tridiagonal route.
pub fn hermitian_eigvals_tridiagonal<T: Real>(m: &Matrix<T>) -> Result<Vec<T>> {
    let a = symmetrize_checked(m)?;
    hermitian_eigvals_unchecked(&a)
}

/// Eigenvalues of a matrix already known to be Hermitian; only the lower
/// triangle is read.
pub(crate) fn hermitian_eigvals_unchecked<T: Real>(a: &Matrix<T>) -> Result<Vec<T>> {
    let (d, e) = tridiagonal_values(a);
    let (mut values, _) = tridiagonal_ql(d, e, false)?;
    values.sort_by(|x, y| x.partial_cmp(y).expect("finite eigenvalues"));
    Ok(values)
}

/// Householder reduction without accumulating `Q`, on a flat copy of the
/// lower triangle. This is the hot loop of the theta sweep.
#[allow(clippy::needless_range_loop)]
fn tridiagonal_values<T: Real>(m: &Matrix<T>) -> (Vec<T>, Vec<T>) {
    let n = m.rows();
    let mut a: Vec<C<T>> = m.as_slice().to_vec();
    let mut d = vec![T::zero(); n];
    let mut e = vec![T::zero(); n];
    let mut v = vec![C::<T>::zero(); n];
    let mut w = vec![C::<T>::zero(); n];
    let two = T::lit(2.0);
    for k in 0..n.saturating_sub(2) {
        let off = k + 1;
        let xnorm = (off..n).fold(T::zero(), |s, i| s + a[i * n + k].norm_sqr()).sqrt();
        d[k] = a[k * n + k].re;
        if xnorm == T::zero() {
            e[k] = T::zero();
            continue;
        }
        let x0 = a[off * n + k];
        let phase = if x0.norm() == T::zero() { C::one() } else { x0 / x0.norm() };
        let alpha = -phase * xnorm;
        for i in off..n {
            v[i] = a[i * n + k];
        }
        v[off] -= alpha;
        let vnorm = (off..n).fold(T::zero(), |s, i| s + v[i].norm_sqr()).sqrt();
        e[k] = xnorm;
        if vnorm == T::zero() {
            continue;
        }
        let inv = vnorm.recip();
        for vi in v[off..n].iter_mut() {
            *vi *= inv;
        }
        // p = 2 A22 v from the lower triangle
        for i in off..n {
            w[i] = C::zero();
        }
        for i in off..n {
            let row = i * n;
            let mut acc = v[i] * a[row + i].re;
            for j in off..i {
                let aij = a[row + j];
                acc += aij * v[j];
                w[j] += aij.conj() * v[i];
            }
            w[i] += acc;
        }
        let mut kappa = C::zero();
        for i in off..n {
            w[i] *= two;
            kappa += v[i].conj() * w[i];
        }
        for i in off..n {
            w[i] -= v[i] * kappa;
        }
        for i in off..n {
            let row = i * n;
            let (vi, wi) = (v[i], w[i]);
            for j in off..=i {
                a[row + j] -= vi * w[j].conj() + wi * v[j].conj();
            }
        }
    }
    if n >= 2 {
        d[n - 2] = a[(n - 2) * n + n - 2].re;
        e[n - 2] = a[(n - 1) * n + n - 2].norm();
    }
    if n >= 1 {
        d[n - 1] = a[(n - 1) * n + n - 1].re;
    }
    (d, e)
}

/// Reduces Hermitian `a` to real symmetric tridiagonal form `(d, e)` with
/// `e[k]` coupling `k` and `k + 1`. When `want_q`, also returns the unitary
/// `Q` with `a = Q T Q*` for the real tridiagonal `T`.
fn tridiagonalize<T: Real>(mut a: Matrix<T>, want_q: bool) -> (Vec<T>, Vec<T>, Option<Matrix<T>>) {
    let n = a.rows();
    let mut reflectors: Vec<(usize, Vec<C<T>>)> = Vec::new();
    let mut sub: Vec<C<T>> = vec![C::zero(); n];
    for k in 0..n.saturating_sub(2) {
        let len = n - k - 1;
        let x: Vec<C<T>> = (0..len).map(|i| a[(k + 1 + i, k)]).collect();
        let xnorm = x.iter().fold(T::zero(), |s, z| s + z.norm_sqr()).sqrt();
        if xnorm == T::zero() {
            sub[k] = C::zero();
            continue;
        }
        let phase = if x[0].norm() == T::zero() {
            C::one()
        } else {
            x[0] / x[0].norm()
        };
        let alpha = -phase * xnorm;
        let mut v = x.clone();
        v[0] -= alpha;
        let vnorm = v.iter().fold(T::zero(), |s, z| s + z.norm_sqr()).sqrt();
        if vnorm == T::zero() {
            sub[k] = x[0];
            continue;
        }
        for z in v.iter_mut() {
            *z /= vnorm;
        }
        // trailing block A22 <- H A22 H with H = I - 2 v v*
        let off = k + 1;
        let mut p = vec![C::zero(); len];
        for i in 0..len {
            let mut acc = C::zero();
            for j in 0..len {
                acc += a[(off + i, off + j)] * v[j];
            }
            p[i] = acc * T::lit(2.0);
        }
        let kappa: C<T> = v.iter().zip(&p).map(|(vi, pi)| vi.conj() * pi).sum();
        let w: Vec<C<T>> = p
            .iter()
            .zip(&v)
            .map(|(&pi, &vi)| pi - vi * kappa)
            .collect();
        for i in 0..len {
            for j in 0..len {
                let upd = v[i] * w[j].conj() + w[i] * v[j].conj();
                a[(off + i, off + j)] -= upd;
            }
        }
        sub[k] = alpha;
        for i in 0..len {
            a[(off + i, k)] = C::zero();
            a[(k, off + i)] = C::zero();
        }
        reflectors.push((k, v));
    }
    if n >= 2 {
        sub[n - 2] = a[(n - 1, n - 2)];
    }
    let d: Vec<T> = (0..n).map(|i| a[(i, i)].re).collect();
    // phases making the off-diagonal real and nonnegative
    let mut phases = vec![C::<T>::one(); n];
    let mut e = vec![T::zero(); n];
    for k in 0..n.saturating_sub(1) {
        let mag = sub[k].norm();
        e[k] = mag;
        phases[k + 1] = if mag == T::zero() {
            phases[k]
        } else {
            phases[k] * (sub[k] / mag)
        };
    }
    let q = want_q.then(|| {
        // Q = H_0 H_1 ... applied to D
        let mut q = Matrix::from_fn(n, n, |i, j| if i == j { phases[i] } else { C::zero() });
        for (k, v) in reflectors.iter().rev() {
            let off = k + 1;
            let len = v.len();
            for col in 0..n {
                let mut dot = C::zero();
                for i in 0..len {
                    dot += v[i].conj() * q[(off + i, col)];
                }
                if dot == C::zero() {
                    continue;
                }
                let dot2 = dot * T::lit(2.0);
                for i in 0..len {
                    let vi = v[i];
                    q[(off + i, col)] -= vi * dot2;
                }
            }
        }
        q
    });
    (d, e, q)
}

/// Implicit QL with Wilkinson-style shifts on a real symmetric tridiagonal
/// matrix. Returns eigenvalues (unsorted) and, optionally, the row-major
/// `n x n` eigenvector matrix of the tridiagonal.
fn tridiagonal_ql<T: Real>(mut d: Vec<T>, mut e: Vec<T>, want_z: bool) -> Result<(Vec<T>, Option<Vec<T>>)> {
    let n = d.len();
    let mut z = want_z.then(|| {
        let mut z = vec![T::zero(); n * n];
        for i in 0..n {
            z[i * n + i] = T::one();
        }
        z
    });
    if n == 0 {
        return Ok((d, z));
    }
    const MAX_ITER: usize = 60;
    let two = T::lit(2.0);
    // absolute deflation floor; without it clusters at zero can stall
    let anorm = (0..n).fold(T::zero(), |s, i| s.max(d[i].abs() + e[i].abs()));
    let floor = T::epsilon() * anorm;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= T::epsilon() * dd || e[m].abs() <= floor {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > MAX_ITER {
                return Err(Error::NoConvergence {
                    routine: "tridiagonal_ql",
                    iterations: MAX_ITER,
                });
            }
            let mut g = (d[l + 1] - d[l]) / (two * e[l]);
            let mut r = g.hypot(T::one());
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (T::one(), T::one(), T::zero());
            let mut deflated = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == T::zero() {
                    d[i + 1] -= p;
                    e[m] = T::zero();
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + two * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                if let Some(z) = z.as_mut() {
                    for k in 0..n {
                        let fz = z[k * n + i + 1];
                        z[k * n + i + 1] = s * z[k * n + i] + c * fz;
                        z[k * n + i] = c * z[k * n + i] - s * fz;
                    }
                }
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = T::zero();
        }
    }
    Ok((d, z))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cplx;

    fn residual(m: &Matrix<f64>, eig: &EigDecomp<f64>) -> f64 {
        let rec = eig.reconstruct_with(|l| l);
        (&rec - m).frobenius_norm() / m.frobenius_norm().max(1.0)
    }

    #[test]
    fn diagonal_input() {
        let m = Matrix::<f64>::diag_real(&[1.0, 2.0, 3.0]);
        let eig = hermitian_eig(&m, default_eig_tol()).unwrap();
        assert_eq!(eig.values, vec![1.0, 2.0, 3.0]);
        assert!(eig.vectors.max_diff(&Matrix::identity(3)) < 1e-15);
    }

    #[test]
    fn rank_one_weight() {
        // char. polynomial x^2 - 5x
        let m = Matrix::<f64>::from_real_rows(&[&[4.0, 2.0], &[2.0, 1.0]]);
        let eig = hermitian_eig(&m, default_eig_tol()).unwrap();
        assert!((eig.values[0] - 0.0).abs() < 1e-14);
        assert!((eig.values[1] - 5.0).abs() < 1e-14);
        assert!(residual(&m, &eig) < 1e-14);
    }

    #[test]
    fn pauli_y() {
        let m = Matrix::<f64>::from_vec(
            2,
            2,
            vec![C::zero(), cplx(0.0, -1.0), cplx(0.0, 1.0), C::zero()],
        )
        .unwrap();
        let eig = hermitian_eig(&m, default_eig_tol()).unwrap();
        assert!((eig.values[0] + 1.0).abs() < 1e-14);
        assert!((eig.values[1] - 1.0).abs() < 1e-14);
        let vv = &eig.vectors.adjoint() * &eig.vectors;
        assert!(vv.max_diff(&Matrix::identity(2)) < 1e-14);
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = Matrix::<f64>::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
        assert!(matches!(
            hermitian_eig(&m, 1e-13),
            Err(Error::NotHermitian { .. })
        ));
        let rect = Matrix::<f64>::zeros(2, 3);
        assert!(matches!(
            hermitian_eig(&rect, 1e-13),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn tiny_asymmetry_is_absorbed() {
        let mut m = Matrix::<f64>::from_real_rows(&[&[2.0, 1.0], &[1.0, 3.0]]);
        m[(0, 1)] += cplx(1e-13, 0.0);
        assert!(hermitian_eig(&m, 1e-13).is_ok());
    }

    #[test]
    #[allow(clippy::needless_range_loop)]
    fn tridiagonal_route_agrees_with_jacobi() {
        let n = 9;
        let m = Matrix::<f64>::from_fn(n, n, |i, j| {
            let x = ((i * 7 + j * 3) % 11) as f64 - 5.0;
            let y = ((i * 5 + j * 2) % 7) as f64 - 3.0;
            if i == j {
                cplx(x, 0.0)
            } else if i < j {
                cplx(x, y)
            } else {
                let xj = ((j * 7 + i * 3) % 11) as f64 - 5.0;
                let yj = ((j * 5 + i * 2) % 7) as f64 - 3.0;
                cplx(xj, -yj)
            }
        });
        let jac = hermitian_eig(&m, default_eig_tol()).unwrap();
        let tri = hermitian_eig_tridiagonal(&m).unwrap();
        let vals = hermitian_eigvals_tridiagonal(&m).unwrap();
        for k in 0..n {
            assert!((jac.values[k] - tri.values[k]).abs() < 1e-11);
            assert!((vals[k] - tri.values[k]).abs() < 1e-11);
        }
        assert!(residual(&m, &tri) < 1e-12);
        let vv = &tri.vectors.adjoint() * &tri.vectors;
        assert!(vv.max_diff(&Matrix::identity(n)) < 1e-12);
    }

    #[test]
    fn single_precision_instance() {
        let m = Matrix::<f32>::from_real_rows(&[&[4.0, 2.0], &[2.0, 1.0]]);
        let eig = hermitian_eig(&m, default_eig_tol()).unwrap();
        assert!((eig.values[1] - 5.0).abs() < 1e-5);
    }
}

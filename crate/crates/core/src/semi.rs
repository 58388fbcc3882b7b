//! Operators on `C^d` equipped with the semi-inner product `<x, y>_A = <Ax, y>`.
//!
//! Every A-quantity is computed through the reduction
//! `T~ = A^{1/2} T (A^{1/2})^+`, which carries `<Tx, x>_A` to `<T~y, y>` and
//! `||T||_A` to `||T~||`. The reduction is exact for operators that map
//! `N(A)` into itself; for anything else the values describe the compression
//! to `R(A)`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{dim_mismatch, Error, Result};
use crate::linalg::optimize::maximize_periodic;
use crate::linalg::{
    hermitian_eig_auto, inner, numerical_radius, op_norm, psd_eig, spectral_radius_est, EigDecomp,
    Matrix, RadiusMethod, RadiusResult, DEFAULT_SQUARINGS,
};
use crate::scalar::{cis, cplx, Real, C};

/// Relative eigenvalue threshold below which the weight is treated as
/// singular, `1e4 * d * eps`.
///
/// Weights assembled as `Q diag(lambda) Q*` carry rounding-level eigenvalues
/// around `d * eps * lambda_max` where the exact ones vanish, so the bare
/// `d * eps` convention misclassifies them about half the time.
pub fn default_context_rank_tol<T: Real>(d: usize) -> T {
    T::epsilon() * T::lit(1e4) * T::from_usize(d.max(1)).unwrap()
}

/// A positive semidefinite weight with everything derived from it.
#[derive(Clone, Debug)]
pub struct SemiContext<T: Real> {
    a: Matrix<T>,
    eig: EigDecomp<T>,
    pinv_a: Matrix<T>,
    sqrt_a: Matrix<T>,
    pinv_sqrt_a: Matrix<T>,
    proj_r: Matrix<T>,
    rank: usize,
    rank_tol: T,
}

impl<T: Real> SemiContext<T> {
    pub fn new(a: Matrix<T>) -> Result<Self> {
        let tol = default_context_rank_tol(a.rows());
        Self::with_rank_tol(a, tol)
    }

    /// `rank_tol` is relative to the largest eigenvalue of `a`.
    pub fn with_rank_tol(a: Matrix<T>, rank_tol: T) -> Result<Self> {
        if !a.is_square() {
            return Err(dim_mismatch("square weight", format!("{}x{}", a.rows(), a.cols())));
        }
        let eig = psd_eig(&a)?;
        Ok(Self::from_parts(a.hermitian_part(), eig, rank_tol))
    }

    pub fn identity(d: usize) -> Self {
        let eig = EigDecomp {
            values: vec![T::one(); d],
            vectors: Matrix::identity(d),
        };
        Self::from_parts(Matrix::identity(d), eig, default_context_rank_tol(d))
    }

    fn from_parts(a: Matrix<T>, mut eig: EigDecomp<T>, rank_tol: T) -> Self {
        let cut = rank_tol * eig.max_value();
        for v in eig.values.iter_mut() {
            if *v <= cut {
                *v = T::zero();
            }
        }
        let rank = eig.values.iter().filter(|&&v| v > T::zero()).count();
        let on_range = |f: fn(T) -> T| eig.reconstruct_with(|l| if l > T::zero() { f(l) } else { T::zero() });
        let pinv_a = on_range(|l| l.recip());
        let sqrt_a = on_range(|l| l.sqrt());
        let pinv_sqrt_a = on_range(|l| l.sqrt().recip());
        let proj_r = on_range(|_| T::one());
        SemiContext {
            a,
            eig,
            pinv_a,
            sqrt_a,
            pinv_sqrt_a,
            proj_r,
            rank,
            rank_tol,
        }
    }

    /// The weight `diag(A, ..., A)` on the `n`-fold direct sum, built from
    /// this context's decomposition rather than a fresh one.
    pub fn inflate(&self, n: usize) -> Self {
        let d = self.dim();
        let big = |m: &Matrix<T>| {
            let mut out = Matrix::zeros(n * d, n * d);
            for b in 0..n {
                out.set_submatrix(b * d, b * d, m);
            }
            out
        };
        // eigenvalues stay ascending if every copy of lambda_k is listed
        // before lambda_{k+1}
        let mut values = Vec::with_capacity(n * d);
        let mut vectors = Matrix::zeros(n * d, n * d);
        for k in 0..d {
            for b in 0..n {
                let col = values.len();
                values.push(self.eig.values[k]);
                for i in 0..d {
                    vectors[(b * d + i, col)] = self.eig.vectors[(i, k)];
                }
            }
        }
        SemiContext {
            a: big(&self.a),
            eig: EigDecomp { values, vectors },
            pinv_a: big(&self.pinv_a),
            sqrt_a: big(&self.sqrt_a),
            pinv_sqrt_a: big(&self.pinv_sqrt_a),
            proj_r: big(&self.proj_r),
            rank: self.rank * n,
            rank_tol: self.rank_tol,
        }
    }

    pub fn dim(&self) -> usize {
        self.a.rows()
    }

    pub fn weight(&self) -> &Matrix<T> {
        &self.a
    }

    /// Decomposition of the weight with sub-threshold eigenvalues zeroed.
    pub fn eig(&self) -> &EigDecomp<T> {
        &self.eig
    }

    /// `A^+`
    pub fn pinv(&self) -> &Matrix<T> {
        &self.pinv_a
    }

    /// `A^{1/2}`
    pub fn sqrt(&self) -> &Matrix<T> {
        &self.sqrt_a
    }

    /// `(A^{1/2})^+`
    pub fn pinv_sqrt(&self) -> &Matrix<T> {
        &self.pinv_sqrt_a
    }

    /// Orthogonal projector `A A^+` onto `R(A)`.
    pub fn range_projection(&self) -> &Matrix<T> {
        &self.proj_r
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn rank_tol(&self) -> T {
        self.rank_tol
    }

    pub fn is_full_rank(&self) -> bool {
        self.rank == self.dim()
    }

    fn check_vec(&self, x: &[C<T>]) -> Result<()> {
        if x.len() != self.dim() {
            return Err(dim_mismatch(format!("vector of length {}", self.dim()), x.len().to_string()));
        }
        Ok(())
    }

    fn check_op(&self, t: &Matrix<T>) -> Result<()> {
        let d = self.dim();
        if t.shape() != (d, d) {
            return Err(dim_mismatch(format!("{d}x{d}"), format!("{}x{}", t.rows(), t.cols())));
        }
        Ok(())
    }

    /// `<x, y>_A = y* A x`
    pub fn a_inner(&self, x: &[C<T>], y: &[C<T>]) -> Result<C<T>> {
        self.check_vec(x)?;
        self.check_vec(y)?;
        Ok(inner(&self.a.matvec(x)?, y))
    }

    /// `||x||_A`
    pub fn a_vec_seminorm(&self, x: &[C<T>]) -> Result<T> {
        Ok(self.a_inner(x, x)?.re.max(T::zero()).sqrt())
    }

    /// `A^+ T* A`. Evaluated whether or not `T` admits an A-adjoint; see
    /// [`Self::admits_a_adjoint`].
    pub fn a_adjoint(&self, t: &Matrix<T>) -> Result<Matrix<T>> {
        self.check_op(t)?;
        Ok(&(&self.pinv_a * &t.adjoint()) * &self.a)
    }

    /// `||(I - P) T* A||_F / ||T* A||_F`, zero when `T* A` vanishes.
    pub fn admissibility_defect(&self, t: &Matrix<T>) -> Result<T> {
        self.check_op(t)?;
        let ta = &t.adjoint() * &self.a;
        let scale = ta.frobenius_norm();
        if scale == T::zero() {
            return Ok(T::zero());
        }
        let outside = &ta - &(&self.proj_r * &ta);
        Ok(outside.frobenius_norm() / scale)
    }

    /// Whether `R(T* A) ⊆ R(A)`, i.e. `AX = T* A` is solvable.
    pub fn admits_a_adjoint(&self, t: &Matrix<T>) -> bool {
        self.admissibility_defect(t)
            .map(|d| d <= self.admissibility_tol())
            .unwrap_or(false)
    }

    fn admissibility_tol(&self) -> T {
        self.rank_tol.max(T::epsilon().sqrt() * T::lit(1e-2))
    }

    fn require_admissible(&self, t: &Matrix<T>) -> Result<()> {
        let defect = self.admissibility_defect(t)?;
        if defect > self.admissibility_tol() {
            return Err(Error::NotAdmissible {
                defect: defect.to_f64_lossy(),
            });
        }
        Ok(())
    }

    /// `A^{1/2} T (A^{1/2})^+`
    pub fn reduce(&self, t: &Matrix<T>) -> Result<Matrix<T>> {
        self.check_op(t)?;
        Ok(&(&self.sqrt_a * t) * &self.pinv_sqrt_a)
    }

    /// `||T||_A`
    pub fn a_seminorm(&self, t: &Matrix<T>) -> Result<T> {
        Ok(op_norm(&self.reduce(t)?))
    }

    /// `w_A(T)` as the classical radius of the reduced matrix. The witness
    /// is returned in original coordinates, inside `R(A)` and scaled to unit
    /// A-seminorm.
    pub fn a_numerical_radius(&self, t: &Matrix<T>, tol: T) -> Result<RadiusResult<T>> {
        let red = self.reduce(t)?;
        let mut res = numerical_radius(&red, tol)?;
        res.method = RadiusMethod::Reduction;
        let mut x = self.pinv_sqrt_a.matvec(&res.witness)?;
        let nx = self.a_vec_seminorm(&x)?;
        if nx > T::zero() {
            for z in x.iter_mut() {
                *z /= nx;
            }
        }
        res.witness = x;
        Ok(res)
    }

    /// Convenience wrapper returning only the value of `w_A(T)`.
    pub fn w(&self, t: &Matrix<T>) -> Result<T> {
        Ok(self.a_numerical_radius(t, T::lit(1e-10))?.value)
    }

    /// `sup_theta ||Re_A(e^{i theta} T)||_A`, evaluated through explicit
    /// A-adjoints and A-seminorms.
    pub fn a_numerical_radius_zamani(&self, t: &Matrix<T>, tol: T) -> Result<T> {
        self.require_admissible(t)?;
        if self.rank == 0 || t.is_zero() {
            return Ok(T::zero());
        }
        let sharp = self.a_adjoint(t)?;
        let half = T::lit(0.5);
        // the objective has period pi
        let (_, value) = maximize_periodic(
            |theta: T| {
                let z = cis(theta);
                let re = (&t.scale(z) + &sharp.scale(z.conj())).scale_real(half);
                self.a_seminorm(&re)
            },
            T::PI(),
            360,
            tol,
        )?;
        Ok(value)
    }

    /// Best `|<Tx, x>_A| / ||x||_A^2` over `samples` Gaussian vectors; a lower
    /// bound for `w_A(T)` that never touches the reduction.
    pub fn a_numerical_radius_sampled(&self, t: &Matrix<T>, samples: usize, seed: u64) -> Result<T> {
        self.check_op(t)?;
        let d = self.dim();
        let at = &self.a * t;
        let floor = T::epsilon() * T::lit(1e3) * self.eig.max_value();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut best = T::zero();
        let mut x = vec![C::new(T::zero(), T::zero()); d];
        for _ in 0..samples {
            for z in x.iter_mut() {
                let re: f64 = StandardNormal.sample(&mut rng);
                let im: f64 = StandardNormal.sample(&mut rng);
                *z = cplx(T::lit(re), T::lit(im));
            }
            // uniform directions on the A-unit sphere
            let x = self.pinv_sqrt_a.matvec(&x)?;
            let nx = inner(&self.a.matvec(&x)?, &x).re;
            if nx <= floor * inner(&x, &x).re {
                continue;
            }
            let q = inner(&at.matvec(&x)?, &x).norm() / nx;
            if q > best {
                best = q;
            }
        }
        Ok(best)
    }

    /// `r_A(T)` as the repeated-squaring estimate on the reduced matrix.
    pub fn a_spectral_radius(&self, t: &Matrix<T>) -> Result<T> {
        Ok(spectral_radius_est(&self.reduce(t)?, DEFAULT_SQUARINGS))
    }

    /// `(T + T^#) / 2`
    pub fn re_a(&self, t: &Matrix<T>) -> Result<Matrix<T>> {
        self.require_admissible(t)?;
        Ok((t + &self.a_adjoint(t)?).scale_real(T::lit(0.5)))
    }

    /// `(T - T^#) / 2i`
    pub fn im_a(&self, t: &Matrix<T>) -> Result<Matrix<T>> {
        self.require_admissible(t)?;
        Ok((t - &self.a_adjoint(t)?).scale(cplx(T::zero(), -T::lit(0.5))))
    }

    fn weighted_scale(&self, m: &Matrix<T>) -> T {
        m.frobenius_norm().max(T::one())
    }

    /// `AT` Hermitian within `tol` (relative to `max(1, ||AT||_F)`).
    pub fn is_a_selfadjoint(&self, t: &Matrix<T>, tol: T) -> bool {
        if self.check_op(t).is_err() {
            return false;
        }
        let at = &self.a * t;
        (&at - &at.adjoint()).frobenius_norm() <= tol * self.weighted_scale(&at)
    }

    /// `AT` Hermitian with no eigenvalue below `-tol * max(1, ||AT||_F)`.
    pub fn is_a_positive(&self, t: &Matrix<T>, tol: T) -> bool {
        if !self.is_a_selfadjoint(t, tol) {
            return false;
        }
        let at = (&self.a * t).hermitian_part();
        match hermitian_eig_auto(&at) {
            Ok(eig) => eig.min_value() >= -tol * self.weighted_scale(&at),
            Err(_) => false,
        }
    }

    /// `U* A U = A` and `U#* A U# = A` within `tol`.
    pub fn is_a_unitary(&self, u: &Matrix<T>, tol: T) -> bool {
        if self.check_op(u).is_err() {
            return false;
        }
        let Ok(sharp) = self.a_adjoint(u) else {
            return false;
        };
        let scale = self.weighted_scale(&self.a);
        let keeps = |m: &Matrix<T>| (&(&m.adjoint() * &self.a) * m).max_diff(&self.a) <= tol * scale;
        keeps(u) && keeps(&sharp)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a42() -> SemiContext<f64> {
        SemiContext::new(Matrix::from_real_rows(&[&[4.0, 2.0], &[2.0, 1.0]])).unwrap()
    }

    fn t2142() -> Matrix<f64> {
        Matrix::from_real_rows(&[&[2.0, 1.0], &[4.0, 2.0]])
    }

    #[test]
    fn adjoint_of_worked_example() {
        let ctx = a42();
        let sharp = ctx.a_adjoint(&t2142()).unwrap();
        let want = Matrix::from_real_rows(&[&[3.2, 1.6], &[1.6, 0.8]]);
        assert!(sharp.max_diff(&want) < 1e-12);
        assert!(ctx.admits_a_adjoint(&t2142()));
        assert!(ctx.is_a_selfadjoint(&t2142(), 1e-10));
        assert_eq!(ctx.rank(), 1);
    }

    #[test]
    fn inner_products() {
        let ctx = a42();
        let e1 = vec![cplx(1.0, 0.0), cplx(0.0, 0.0)];
        let e2 = vec![cplx(0.0, 0.0), cplx(1.0, 0.0)];
        assert_eq!(ctx.a_inner(&e1, &e2).unwrap(), cplx(2.0, 0.0));
        let null = vec![cplx(1.0, 0.0), cplx(-2.0, 0.0)];
        assert!(ctx.a_inner(&null, &null).unwrap().norm() < 1e-12);
        assert!(ctx.a_inner(&e1, &[cplx(1.0, 0.0)]).is_err());
    }

    #[test]
    fn range_criterion_rejects_leaking_operator() {
        let ctx = SemiContext::new(Matrix::diag_real(&[1.0, 0.0])).unwrap();
        // T* A = 0 here, so the range condition holds trivially
        let lower = Matrix::from_real_rows(&[&[0.0, 0.0], &[1.0, 0.0]]);
        assert!(ctx.admits_a_adjoint(&lower));
        assert!(ctx.a_adjoint(&lower).unwrap().is_zero());
        // T* A = e2 e1*, whose range leaves R(A)
        let upper = Matrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
        assert!(!ctx.admits_a_adjoint(&upper));
        assert!(matches!(ctx.re_a(&upper), Err(Error::NotAdmissible { .. })));
        assert!(ctx.admits_a_adjoint(&Matrix::zeros(2, 2)));
    }

    #[test]
    fn reduction_examples() {
        let ctx = SemiContext::new(Matrix::<f64>::diag_real(&[4.0, 1.0])).unwrap();
        let t = Matrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
        let red = ctx.reduce(&t).unwrap();
        assert!(red.max_diff(&Matrix::from_real_rows(&[&[0.0, 2.0], &[0.0, 0.0]])) < 1e-14);
        assert!((ctx.w(&t).unwrap() - 1.0).abs() < 1e-10);
        let a = a42();
        let p = a.reduce(&Matrix::identity(2)).unwrap();
        assert!(p.max_diff(a.range_projection()) < 1e-14);
    }

    #[test]
    fn witness_has_unit_seminorm() {
        let ctx = a42();
        let t = Matrix::from_real_rows(&[&[1.0, -1.0], &[0.5, 2.0]]);
        let r = ctx.a_numerical_radius(&t, 1e-10).unwrap();
        assert!((ctx.a_vec_seminorm(&r.witness).unwrap() - 1.0).abs() < 1e-10);
        let tx = t.matvec(&r.witness).unwrap();
        let q = ctx.a_inner(&tx, &r.witness).unwrap().norm();
        assert!(q >= r.value - 1e-9);
    }

    #[test]
    fn zero_weight_gives_zero() {
        let ctx = SemiContext::new(Matrix::<f64>::zeros(2, 2)).unwrap();
        let t = t2142();
        assert_eq!(ctx.rank(), 0);
        assert_eq!(ctx.a_seminorm(&t).unwrap(), 0.0);
        assert_eq!(ctx.w(&t).unwrap(), 0.0);
        assert_eq!(ctx.a_numerical_radius_zamani(&t, 1e-10).unwrap(), 0.0);
        assert_eq!(ctx.a_spectral_radius(&t).unwrap(), 0.0);
    }

    #[test]
    fn inflated_context_matches_direct_construction() {
        let ctx = a42();
        let big = ctx.inflate(3);
        let direct = SemiContext::new(big.weight().clone()).unwrap();
        assert_eq!(big.rank(), 3);
        assert!(big.pinv().max_diff(direct.pinv()) < 1e-12);
        assert!(big.sqrt().max_diff(direct.sqrt()) < 1e-12);
        for w in big.eig().values.windows(2) {
            assert!(w[0] <= w[1]);
        }
    }
}

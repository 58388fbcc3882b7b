//! Seeded random instances.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, default_eig_tol, Matrix};
use crate::scalar::{cplx, real, Real, C};
use crate::semi::SemiContext;

/// The generator every seeded routine in the crate uses.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian<T: Real>(rng: &mut impl Rng) -> C<T> {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    cplx(T::lit(re), T::lit(im)).scale(T::lit(0.5f64.sqrt()))
}

/// `r x c` matrix of i.i.d. standard complex Gaussians.
pub fn gaussian_matrix<T: Real>(r: usize, c: usize, rng: &mut impl Rng) -> Matrix<T> {
    Matrix::from_fn(r, c, |_, _| gaussian(rng))
}

/// Haar-ish unitary: eigenvectors of a random Hermitian matrix.
pub fn random_unitary<T: Real>(d: usize, rng: &mut impl Rng) -> Matrix<T> {
    let g = gaussian_matrix::<T>(d, d, rng).hermitian_part();
    hermitian_eig(&g, default_eig_tol())
        .expect("Jacobi converges on a random Hermitian matrix")
        .vectors
}

/// Hermitian PSD with `rank` eigenvalues drawn from `[0.1, 2]` and the rest
/// zero.
pub fn random_psd_with<T: Real>(d: usize, rank: usize, rng: &mut impl Rng) -> Result<Matrix<T>> {
    if rank > d {
        return Err(Error::BadRank { rank, dim: d });
    }
    let q = random_unitary::<T>(d, rng);
    let mut lambda = vec![T::zero(); d];
    for l in lambda.iter_mut().take(rank) {
        *l = T::lit(rng.random_range(0.1..=2.0));
    }
    let m = &(&q * &Matrix::diag_real(&lambda)) * &q.adjoint();
    Ok(m.hermitian_part())
}

pub fn random_psd<T: Real>(d: usize, rank: usize, seed: u64) -> Result<Matrix<T>> {
    random_psd_with(d, rank, &mut rng_from_seed(seed))
}

/// A random operator admitting an A-adjoint: `A^+ Z A` for Gaussian `Z`, or
/// `Z` itself when `A` is invertible.
pub fn random_admissible_with<T: Real>(ctx: &SemiContext<T>, rng: &mut impl Rng) -> Matrix<T> {
    let d = ctx.dim();
    let z = gaussian_matrix(d, d, rng);
    if ctx.is_full_rank() {
        z
    } else {
        &(ctx.pinv() * &z) * ctx.weight()
    }
}

pub fn random_admissible<T: Real>(ctx: &SemiContext<T>, seed: u64) -> Matrix<T> {
    random_admissible_with(ctx, &mut rng_from_seed(seed))
}

/// Admissible `T` with `T^2 = 0`: `u v* A` with `u` in `R(A)` and
/// `v* A u = 0`. Zero when the range of `A` is too small to fit one.
pub fn random_square_zero<T: Real>(ctx: &SemiContext<T>, rng: &mut impl Rng) -> Matrix<T> {
    let d = ctx.dim();
    let col = |rng: &mut _| gaussian_matrix::<T>(d, 1, rng);
    let u = ctx.range_projection() * &col(rng);
    let au = ctx.weight() * &u;
    let mut v = col(rng);
    let nau = au.frobenius_norm();
    if nau == T::zero() {
        return Matrix::zeros(d, d);
    }
    // project v off A u so that v* A u = 0
    let coef = (&au.adjoint() * &v)[(0, 0)] / real(nau * nau);
    v = &v - &au.scale(coef);
    &(&u * &v.adjoint()) * ctx.weight()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::pinv;

    #[test]
    fn psd_rank_and_spectrum() {
        for (d, rank) in [(3, 3), (3, 1), (2, 0), (4, 2)] {
            let a: Matrix<f64> = random_psd(d, rank, 11).unwrap();
            let ctx = SemiContext::new(a).unwrap();
            assert_eq!(ctx.rank(), rank);
            assert!(ctx.eig().values.iter().all(|&l| l == 0.0 || (0.1 - 1e-12..=2.0 + 1e-12).contains(&l)));
        }
        assert_eq!(random_psd::<f64>(2, 3, 0).unwrap_err(), Error::BadRank { rank: 3, dim: 2 });
    }

    #[test]
    fn rank_one_pinv_penrose() {
        let a: Matrix<f64> = random_psd(2, 1, 5).unwrap();
        let p = pinv(&a, 1e-12).unwrap();
        assert!((&(&a * &p) * &a).max_diff(&a) < 1e-12);
        assert!((&(&p * &a) * &p).max_diff(&p) < 1e-12);
    }

    #[test]
    fn admissible_on_singular_weights() {
        for seed in 0..100 {
            let ctx = SemiContext::new(random_psd::<f64>(3, 1 + (seed as usize % 2), seed).unwrap()).unwrap();
            assert!(ctx.admits_a_adjoint(&random_admissible(&ctx, seed + 1000)));
        }
    }

    #[test]
    fn square_zero_is_square_zero() {
        let mut rng = rng_from_seed(3);
        let ctx = SemiContext::new(random_psd::<f64>(3, 2, 9).unwrap()).unwrap();
        let t = random_square_zero(&ctx, &mut rng);
        assert!(!t.is_zero());
        assert!((&t * &t).max_abs() < 1e-12);
        assert!(ctx.admits_a_adjoint(&t));
    }
}

//! Dense complex linear algebra at desk scale.

mod eig;
mod matrix;
pub mod optimize;
mod radius;

pub use eig::{
    default_eig_tol, hermitian_eig, hermitian_eig_tridiagonal, hermitian_eigvals_tridiagonal,
    hermitian_input_tol, symmetrize_checked, EigDecomp, JACOBI_MAX_DIM, MAX_SWEEPS,
};
pub use matrix::{inner, vec_norm, Matrix};
pub use radius::{
    numerical_radius, numerical_radius_upper, numerical_radius_with, spectral_radius_est, spectral_radius_power,
    RadiusMethod, RadiusOptions, RadiusResult, DEFAULT_SQUARINGS,
};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// `d * eps`, the conventional relative numerical-rank threshold.
pub fn default_rank_tol<T: Real>(d: usize) -> T {
    T::epsilon() * T::from_usize(d.max(1)).unwrap()
}

/// Eigendecomposition of a Hermitian matrix by whichever solver suits its
/// order.
pub fn hermitian_eig_auto<T: Real>(m: &Matrix<T>) -> Result<EigDecomp<T>> {
    if m.rows() > JACOBI_MAX_DIM {
        hermitian_eig_tridiagonal(m)
    } else {
        hermitian_eig(m, default_eig_tol())
    }
}

/// Largest eigenvalue of a Hermitian matrix (already symmetrised by the
/// caller). Closed forms for orders 1 and 2.
pub(crate) fn lambda_max_hermitian<T: Real>(h: &Matrix<T>) -> Result<T> {
    match h.rows() {
        0 => Ok(T::zero()),
        1 => Ok(h[(0, 0)].re),
        2 => {
            let a = h[(0, 0)].re;
            let d = h[(1, 1)].re;
            let half = T::lit(0.5);
            let mid = (a + d) * half;
            let gap = (a - d) * half;
            Ok(mid + (gap * gap + h[(0, 1)].norm_sqr()).sqrt())
        }
        _ => Ok(*eig::hermitian_eigvals_unchecked(h)?.last().unwrap()),
    }
}

/// Eigenvalues of a Hermitian PSD matrix with the negligible negative ones
/// clamped to zero.
pub(crate) fn psd_eig<T: Real>(m: &Matrix<T>) -> Result<EigDecomp<T>> {
    let mut eig = hermitian_eig_auto(m)?;
    let scale = eig
        .values
        .iter()
        .fold(T::zero(), |s, v| s.max(v.abs()));
    let floor = T::epsilon().sqrt() * scale;
    let lo = eig.min_value();
    if lo < -floor {
        return Err(Error::NotPsd {
            eigenvalue: lo.to_f64_lossy(),
        });
    }
    for v in eig.values.iter_mut() {
        if *v < T::zero() {
            *v = T::zero();
        }
    }
    Ok(eig)
}

/// Moore-Penrose inverse of a Hermitian PSD matrix. Eigenvalues at or below
/// `rank_tol * lambda_max` are treated as zero.
pub fn pinv<T: Real>(m: &Matrix<T>, rank_tol: T) -> Result<Matrix<T>> {
    let eig = psd_eig(m)?;
    let cut = rank_tol * eig.max_value();
    Ok(eig.reconstruct_with(|l| if l > cut { T::one() / l } else { T::zero() }))
}

/// Principal square root of a Hermitian PSD matrix.
pub fn psd_sqrt<T: Real>(m: &Matrix<T>) -> Result<Matrix<T>> {
    let eig = psd_eig(m)?;
    Ok(eig.reconstruct_with(|l| l.sqrt()))
}

/// Spectral norm `sqrt(lambda_max(M* M))`.
pub fn op_norm<T: Real>(m: &Matrix<T>) -> T {
    if m.rows() == 0 || m.cols() == 0 {
        return T::zero();
    }
    let gram = if m.rows() >= m.cols() {
        &m.adjoint() * m
    } else {
        m * &m.adjoint()
    };
    let top = lambda_max_hermitian(&gram.hermitian_part())
        .expect("eigensolver converges on a finite Gram matrix");
    top.max(T::zero()).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a42() -> Matrix<f64> {
        Matrix::from_real_rows(&[&[4.0, 2.0], &[2.0, 1.0]])
    }

    #[test]
    fn pinv_of_rank_one_weight() {
        let a = a42();
        let p = pinv(&a, default_rank_tol(2)).unwrap();
        assert!(p.max_diff(&a.scale_real(1.0 / 25.0)) < 1e-14);
    }

    #[test]
    fn pinv_trivial_cases() {
        let i = Matrix::<f64>::identity(3);
        assert!(pinv(&i, 1e-15).unwrap().max_diff(&i) < 1e-15);
        let z = Matrix::<f64>::zeros(3, 3);
        assert!(pinv(&z, 1e-15).unwrap().is_zero());
    }

    #[test]
    fn rejects_indefinite() {
        let m = Matrix::<f64>::diag_real(&[1.0, -1.0]);
        assert!(matches!(pinv(&m, 1e-15), Err(Error::NotPsd { .. })));
        assert!(matches!(psd_sqrt(&m), Err(Error::NotPsd { .. })));
    }

    #[test]
    fn sqrt_examples() {
        let r = psd_sqrt(&Matrix::<f64>::diag_real(&[4.0, 9.0])).unwrap();
        assert!(r.max_diff(&Matrix::diag_real(&[2.0, 3.0])) < 1e-14);
        let a = a42();
        let r = psd_sqrt(&a).unwrap();
        assert!(r.max_diff(&a.scale_real(1.0 / 5f64.sqrt())) < 1e-14);
    }

    #[test]
    fn norm_examples() {
        assert_eq!(op_norm(&Matrix::<f64>::zeros(2, 3)), 0.0);
        let m = Matrix::<f64>::from_real_rows(&[&[2.0, 1.0, 1.0], &[1.0, 2.0, 1.0], &[1.0, 1.0, 2.0]]);
        assert!((op_norm(&m) - 4.0).abs() < 1e-12);
        let m = Matrix::<f64>::from_real_rows(&[&[4.0, 1.0, 1.0], &[1.0, 4.0, 1.0], &[1.0, 1.0, 4.0]]);
        assert!((op_norm(&m) - 6.0).abs() < 1e-12);
        let r = Matrix::<f64>::from_real_rows(&[&[3.0, 4.0]]);
        assert!((op_norm(&r) - 5.0).abs() < 1e-14);
    }
}

//! JSON file formats shared by the CLI and tests.

use serde::{Deserialize, Serialize};

use crate::bounds::MatrixPolynomial;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::cplx;

/// Dense complex matrix, row-major `[re, im]` pairs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixFile {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<[f64; 2]>,
}

impl MatrixFile {
    pub fn from_matrix(m: &Matrix<f64>) -> Self {
        Self {
            rows: m.rows(),
            cols: m.cols(),
            data: m.as_slice().iter().map(|z| [z.re, z.im]).collect(),
        }
    }

    pub fn to_matrix(&self) -> Result<Matrix<f64>> {
        if self.data.len() != self.rows * self.cols {
            return Err(Error::Parse(format!(
                "{}x{} matrix needs {} entries, found {}",
                self.rows,
                self.cols,
                self.rows * self.cols,
                self.data.len()
            )));
        }
        if let Some(k) = self.data.iter().position(|[re, im]| !re.is_finite() || !im.is_finite()) {
            return Err(Error::NonFinite {
                row: k / self.cols,
                col: k % self.cols,
            });
        }
        Matrix::from_vec(self.rows, self.cols, self.data.iter().map(|&[re, im]| cplx(re, im)).collect())
    }
}

/// Monic matrix polynomial, coefficients `S_1` first.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolyFile {
    pub degree: usize,
    pub dim: usize,
    pub coeffs: Vec<MatrixFile>,
}

impl PolyFile {
    pub fn from_polynomial(p: &MatrixPolynomial) -> Self {
        Self {
            degree: p.degree(),
            dim: p.dim(),
            coeffs: p.coeffs().iter().map(MatrixFile::from_matrix).collect(),
        }
    }

    pub fn to_polynomial(&self) -> Result<MatrixPolynomial> {
        if self.coeffs.len() != self.degree {
            return Err(Error::Parse(format!("degree {} but {} coefficients", self.degree, self.coeffs.len())));
        }
        let coeffs = self.coeffs.iter().map(MatrixFile::to_matrix).collect::<Result<Vec<_>>>()?;
        if let Some(c) = coeffs.iter().find(|c| c.shape() != (self.dim, self.dim)) {
            return Err(crate::error::dim_mismatch(
                format!("{0}x{0}", self.dim),
                format!("{}x{}", c.rows(), c.cols()),
            ));
        }
        MatrixPolynomial::new(coeffs)
    }
}

pub fn parse_matrix(json: &str) -> Result<Matrix<f64>> {
    serde_json::from_str::<MatrixFile>(json)
        .map_err(|e| Error::Parse(e.to_string()))?
        .to_matrix()
}

pub fn parse_polynomial(json: &str) -> Result<MatrixPolynomial> {
    serde_json::from_str::<PolyFile>(json)
        .map_err(|e| Error::Parse(e.to_string()))?
        .to_polynomial()
}

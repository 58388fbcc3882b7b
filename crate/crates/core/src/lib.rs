//! Operator quantities on `C^d` with a positive semidefinite weight `A`:
//! A-adjoints, A-seminorms, A-numerical and A-spectral radii, structured
//! block operator matrices, a randomized catalog of radius identities and
//! bounds, and eigenvalue bounds for monic matrix polynomials.

pub mod bounds;
pub mod error;
pub mod harness;
pub mod io;
pub mod linalg;
pub mod scalar;
pub mod semi;
pub mod structured;

pub use error::{Error, Result};
pub use linalg::Matrix;
pub use scalar::{Real, C};
pub use semi::SemiContext;
pub use structured::BlockMatrix;

/// Double-precision complex matrix.
pub type CMatrix = Matrix<f64>;
/// Single-precision complex matrix.
pub type CMatrix32 = Matrix<f32>;
pub type SemiContext64 = SemiContext<f64>;
pub type SemiContext32 = SemiContext<f32>;

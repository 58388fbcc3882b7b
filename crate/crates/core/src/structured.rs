//! Block operator matrices: circulant families, cross-diagonal matrices and
//! the unitaries that permute or diagonalise them.
//!
//! Block indices are 0-based throughout. Where a constructor mirrors a
//! printed layout, its doc comment states the layout in 0-based terms.

use crate::bounds::MatrixPolynomial;
use crate::error::{dim_mismatch, Error, Result};
use crate::linalg::Matrix;
use crate::scalar::{cis, cplx, real, Real, C};
use crate::semi::SemiContext;

/// An `n x n` grid of `d x d` blocks.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockMatrix<T: Real> {
    n: usize,
    d: usize,
    blocks: Vec<Matrix<T>>,
}

impl<T: Real> BlockMatrix<T> {
    pub fn zeros(n: usize, d: usize) -> Self {
        BlockMatrix {
            n,
            d,
            blocks: vec![Matrix::zeros(d, d); n * n],
        }
    }

    pub fn identity(n: usize, d: usize) -> Self {
        let mut m = Self::zeros(n, d);
        for i in 0..n {
            m.blocks[i * n + i] = Matrix::identity(d);
        }
        m
    }

    /// Block `(i, j)` is `f(i, j)`; every block must be `d x d`.
    pub fn from_fn(n: usize, d: usize, mut f: impl FnMut(usize, usize) -> Matrix<T>) -> Result<Self> {
        let mut blocks = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let b = f(i, j);
                b.check_square(d)?;
                blocks.push(b);
            }
        }
        Ok(BlockMatrix { n, d, blocks })
    }

    /// A block matrix whose `(i, j)` block is `coef(i, j) * I_d`.
    pub fn scalar_pattern(n: usize, d: usize, coef: impl Fn(usize, usize) -> C<T>) -> Self {
        let id = Matrix::identity(d);
        BlockMatrix {
            n,
            d,
            blocks: (0..n * n).map(|k| id.scale(coef(k / n, k % n))).collect(),
        }
    }

    /// Splits an `(nd) x (nd)` matrix into `d x d` blocks.
    pub fn partition(m: &Matrix<T>, d: usize) -> Result<Self> {
        if d == 0 || !m.is_square() || !m.rows().is_multiple_of(d) {
            return Err(dim_mismatch(
                format!("square matrix with order divisible by {d}"),
                format!("{}x{}", m.rows(), m.cols()),
            ));
        }
        let n = m.rows() / d;
        Self::from_fn(n, d, |i, j| m.submatrix(i * d, j * d, d, d))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn block(&self, i: usize, j: usize) -> &Matrix<T> {
        &self.blocks[i * self.n + j]
    }

    pub fn set_block(&mut self, i: usize, j: usize, b: Matrix<T>) -> Result<()> {
        b.check_square(self.d)?;
        self.blocks[i * self.n + j] = b;
        Ok(())
    }

    pub fn flatten(&self) -> Matrix<T> {
        let (n, d) = (self.n, self.d);
        let mut out = Matrix::zeros(n * d, n * d);
        for i in 0..n {
            for j in 0..n {
                out.set_submatrix(i * d, j * d, self.block(i, j));
            }
        }
        out
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if (self.n, self.d) != (rhs.n, rhs.d) {
            return Err(dim_mismatch(
                format!("{}x{} grid of {}x{} blocks", self.n, self.n, self.d, self.d),
                format!("{}x{} grid of {}x{} blocks", rhs.n, rhs.n, rhs.d, rhs.d),
            ));
        }
        Self::partition(&(&self.flatten() * &rhs.flatten()), self.d)
    }

    /// Largest block-wise entry difference.
    pub fn max_diff(&self, other: &Self) -> T {
        self.blocks
            .iter()
            .zip(&other.blocks)
            .fold(T::zero(), |m, (a, b)| m.max(a.max_diff(b)))
    }

    /// Blocks `(i, j)` with `keep(i, j)` false, as the largest entry magnitude.
    pub fn max_outside(&self, keep: impl Fn(usize, usize) -> bool) -> T {
        let mut worst = T::zero();
        for i in 0..self.n {
            for j in 0..self.n {
                if !keep(i, j) {
                    worst = worst.max(self.block(i, j).max_abs());
                }
            }
        }
        worst
    }

    /// Block-transpose of per-block A-adjoints: block `(i, j)` of the result
    /// is `blocks[j][i]^#`. Fails unless every block admits an A-adjoint.
    pub fn a_adjoint(&self, ctx: &SemiContext<T>) -> Result<Self> {
        self.check_weight(ctx)?;
        for b in &self.blocks {
            if !ctx.admits_a_adjoint(b) {
                return Err(Error::NotAdmissible {
                    defect: ctx.admissibility_defect(b)?.to_f64_lossy(),
                });
            }
        }
        Self::from_fn(self.n, self.d, |i, j| ctx.a_adjoint(self.block(j, i)).expect("shape checked"))
    }

    /// `w_AA` under the inflated weight `diag(A, ..., A)`.
    pub fn a_numerical_radius(&self, ctx: &SemiContext<T>) -> Result<T> {
        self.check_weight(ctx)?;
        ctx.inflate(self.n).w(&self.flatten())
    }

    /// Whether `U U^# = U^# U = diag(P, ..., P)` under the inflated weight,
    /// `P` the range projection of `A`.
    pub fn is_a_unitary(&self, ctx: &SemiContext<T>, tol: T) -> Result<bool> {
        self.check_weight(ctx)?;
        let big = ctx.inflate(self.n);
        let u = self.flatten();
        let sharp = big.a_adjoint(&u)?;
        let p = big.range_projection();
        Ok((&u * &sharp).max_diff(p) <= tol && (&sharp * &u).max_diff(p) <= tol)
    }

    fn check_weight(&self, ctx: &SemiContext<T>) -> Result<()> {
        if ctx.dim() != self.d {
            return Err(dim_mismatch(format!("weight of order {}", self.d), ctx.dim()));
        }
        Ok(())
    }
}

fn block_dim<T: Real>(ts: &[Matrix<T>]) -> Result<usize> {
    let first = ts.first().ok_or(Error::EmptyList)?;
    let d = first.rows();
    for t in ts {
        t.check_square(d)?;
    }
    Ok(d)
}

/// Row `r` is the list rotated left by `r`; an entry that wrapped past the
/// end is multiplied by `wrap`.
fn left_rotations<T: Real>(ts: &[Matrix<T>], wrap: C<T>) -> Result<BlockMatrix<T>> {
    let d = block_dim(ts)?;
    let n = ts.len();
    BlockMatrix::from_fn(n, d, |r, c| {
        let k = r + c;
        if k < n {
            ts[k].clone()
        } else {
            ts[k - n].scale(wrap)
        }
    })
}

/// Row `r` is the list rotated right by `r`; an entry that wrapped past the
/// end is multiplied by `wrap`.
fn right_rotations<T: Real>(ts: &[Matrix<T>], wrap: C<T>) -> Result<BlockMatrix<T>> {
    let d = block_dim(ts)?;
    let n = ts.len();
    BlockMatrix::from_fn(n, d, |r, c| {
        if c >= r {
            ts[c - r].clone()
        } else {
            ts[n + c - r].scale(wrap)
        }
    })
}

/// Block circulant with first row `(T_1, ..., T_n)`; each row is the previous
/// one shifted right.
pub fn circ<T: Real>(ts: &[Matrix<T>]) -> Result<BlockMatrix<T>> {
    right_rotations(ts, real(T::one()))
}

/// Skew circulant: `circ` with every block strictly below the main diagonal
/// negated.
pub fn scirc<T: Real>(ts: &[Matrix<T>]) -> Result<BlockMatrix<T>> {
    right_rotations(ts, real(-T::one()))
}

/// Left circulant: block `(r, c)` is `T_{r+c}` with indices taken mod `n`.
pub fn lcirc<T: Real>(ts: &[Matrix<T>]) -> Result<BlockMatrix<T>> {
    left_rotations(ts, real(T::one()))
}

/// Skew left circulant: `lcirc` with every block strictly below the
/// anti-diagonal (`r + c > n - 1`) negated.
pub fn slcirc<T: Real>(ts: &[Matrix<T>]) -> Result<BlockMatrix<T>> {
    left_rotations(ts, real(-T::one()))
}

/// Imaginary left circulant: `lcirc` with the wrapped blocks multiplied by `i`.
pub fn lcirc_i<T: Real>(ts: &[Matrix<T>]) -> Result<BlockMatrix<T>> {
    left_rotations(ts, cplx(T::zero(), T::one()))
}

/// Imaginary skew left circulant: wrapped blocks multiplied by `-i`.
pub fn slcirc_i<T: Real>(ts: &[Matrix<T>]) -> Result<BlockMatrix<T>> {
    left_rotations(ts, cplx(T::zero(), -T::one()))
}

/// `T_k` at `(k, k)`, everything else zero.
pub fn block_diag<T: Real>(ts: &[Matrix<T>]) -> Result<BlockMatrix<T>> {
    let d = block_dim(ts)?;
    BlockMatrix::from_fn(ts.len(), d, |i, j| if i == j { ts[i].clone() } else { Matrix::zeros(d, d) })
}

/// `T_k` at `(k, n-1-k)`, everything else zero.
pub fn block_offdiag<T: Real>(ts: &[Matrix<T>]) -> Result<BlockMatrix<T>> {
    let d = block_dim(ts)?;
    let n = ts.len();
    BlockMatrix::from_fn(n, d, |i, j| if i + j + 1 == n { ts[i].clone() } else { Matrix::zeros(d, d) })
}

/// The exchange matrix `J = offdiag(I, ..., I)`.
pub fn exchange_j<T: Real>(n: usize, d: usize) -> BlockMatrix<T> {
    BlockMatrix::scalar_pattern(n, d, |i, j| if i + j + 1 == n { real(T::one()) } else { real(T::zero()) })
}

/// Cross-diagonal matrix: `T_k` at `(k, k)` and `S_k` at `(k, n-1-k)`.
/// For odd `n` the two lists share the centre cell and must agree there.
pub fn cross_diag<T: Real>(ts: &[Matrix<T>], ss: &[Matrix<T>]) -> Result<BlockMatrix<T>> {
    if ts.len() != ss.len() {
        return Err(dim_mismatch(format!("{} anti-diagonal blocks", ts.len()), ss.len()));
    }
    let d = block_dim(ts)?;
    if block_dim(ss)? != d {
        return Err(dim_mismatch(format!("{d}x{d} blocks"), ss[0].rows()));
    }
    let n = ts.len();
    if n % 2 == 1 {
        let c = n / 2;
        let gap = ts[c].max_diff(&ss[c]);
        let scale = ts[c].max_abs().max(T::one());
        if gap > T::epsilon() * T::lit(16.0) * scale {
            return Err(Error::CenterConflict);
        }
    }
    Ok(cross_with_center(ts, ss, None))
}

/// Cross-diagonal layout with an explicit centre block for odd `n`. The
/// default centre is `T_c`.
pub(crate) fn cross_with_center<T: Real>(
    ts: &[Matrix<T>],
    ss: &[Matrix<T>],
    center: Option<&Matrix<T>>,
) -> BlockMatrix<T> {
    let n = ts.len();
    let d = ts[0].rows();
    BlockMatrix::from_fn(n, d, |i, j| {
        if i == j && i + j + 1 == n {
            center.unwrap_or(&ts[i]).clone()
        } else if i == j {
            ts[i].clone()
        } else if i + j + 1 == n {
            ss[i].clone()
        } else {
            Matrix::zeros(d, d)
        }
    })
    .expect("blocks checked by caller")
}

/// Block `(j, k)` is `omega^{jk} I / sqrt(n)` with `omega = e^{2 pi i / n}`.
pub fn dft_unitary<T: Real>(n: usize, d: usize) -> BlockMatrix<T> {
    let nn = T::from_usize(n.max(1)).unwrap();
    let step = T::TAU() / nn;
    let norm = nn.sqrt().recip();
    BlockMatrix::scalar_pattern(n, d, |j, k| cis(step * T::from_usize((j * k) % n.max(1)).unwrap()) * norm)
}

/// Block `(j, k)` is `(sigma omega^j)^{j+k} I / sqrt(n)`, `sigma = e^{i pi / n}`.
/// Row `j` is a unit-modulus multiple of the powers of the `j`-th root of
/// `z^n = -1`, so the rows are orthonormal.
pub fn skew_dft_unitary<T: Real>(n: usize, d: usize) -> BlockMatrix<T> {
    let nn = T::from_usize(n.max(1)).unwrap();
    let norm = nn.sqrt().recip();
    BlockMatrix::scalar_pattern(n, d, |j, k| {
        // arg of sigma omega^j is (2j + 1) pi / n; reduce the product mod 2n
        let e = ((2 * j + 1) * (j + k)) % (2 * n.max(1));
        cis(T::PI() * T::from_usize(e).unwrap() / nn) * norm
    })
}

/// The pairing permutation of cross-diagonal matrices, 1-based:
/// for even `n`, `pi(i) = i` for even `i` and `n - i` for odd `i`;
/// for odd `n` the same rule applies below the centre and is mirrored from
/// the centre on.
pub fn cross_permutation(n: usize) -> Vec<usize> {
    (1..=n)
        .map(|i| {
            let stay = if n.is_multiple_of(2) || 2 * i < n + 1 { i % 2 == 0 } else { i % 2 == 1 };
            if stay {
                i
            } else {
                n - i
            }
        })
        .collect()
}

/// Permutation unitary `U` with `(U* M U)_{ij} = M_{pi(i) pi(j)}` for the
/// pairing permutation. It brings a cross-diagonal matrix to block-diagonal
/// form with 2x2 blocks on the pairs `{k, n-1-k}` (plus the lone centre for
/// odd `n`).
pub fn cross_permutation_unitary<T: Real>(n: usize, d: usize) -> BlockMatrix<T> {
    let pi = cross_permutation(n);
    BlockMatrix::scalar_pattern(n, d, |r, c| if pi[c] == r + 1 { real(T::one()) } else { real(T::zero()) })
}

/// `(1/sqrt 2) [[s I, .., I], [.., sqrt 2 I, ..], [I, .., s I]]` with `s = i`
/// (or `-i` when `conjugate`): identity in the interior, the corner 2x2
/// rotation on the first and last blocks. For `n = 1` the single block is
/// `I`.
pub fn corner_rotation_unitary<T: Real>(n: usize, d: usize, conjugate: bool) -> BlockMatrix<T> {
    let h = T::lit(0.5).sqrt();
    let s = if conjugate { -T::one() } else { T::one() };
    BlockMatrix::scalar_pattern(n, d, |r, c| {
        let last = n - 1;
        if n == 1 {
            real(T::one())
        } else if (r == 0 || r == last) && (c == 0 || c == last) {
            if r == c {
                cplx(T::zero(), s * h)
            } else {
                real(h)
            }
        } else if r == c {
            real(T::one())
        } else {
            real(T::zero())
        }
    })
}

/// Scalar `n x n` shift with ones on the subdiagonal.
pub fn shift_matrix<T: Real>(n: usize) -> Matrix<T> {
    Matrix::from_fn(n, n, |i, j| if i == j + 1 { real(T::one()) } else { real(T::zero()) })
}

/// Frobenius companion matrix: first block row `(-S_n, ..., -S_1)` and
/// identity blocks on the subdiagonal.
pub fn companion(p: &MatrixPolynomial) -> BlockMatrix<f64> {
    let (n, d) = (p.degree(), p.dim());
    let mut m = BlockMatrix::zeros(n, d);
    for j in 0..n {
        m.blocks[j] = -p.s(n - j);
    }
    for i in 1..n {
        m.blocks[i * n + i - 1] = Matrix::identity(d);
    }
    m
}

//! Complex matrix storage shared by operators and superoperators.
//!
//! [`Matrix`] is either a dense `faer` matrix or a [`CsrMatrix`]. Binary
//! operations on two sparse operands stay sparse; anything involving a dense
//! operand produces a dense result.

mod solve;
mod sparse;

pub use solve::{condition_estimate_one, LinearSolver};
pub use sparse::CsrMatrix;

use faer::{c64, Mat};

use crate::error::{MeqError, Result};

pub(crate) const ZERO: c64 = c64 { re: 0.0, im: 0.0 };
pub(crate) const ONE: c64 = c64 { re: 1.0, im: 0.0 };
pub(crate) const I: c64 = c64 { re: 0.0, im: 1.0 };

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Storage {
    Dense,
    Sparse,
}

impl Storage {
    /// Dense below or at `threshold`, sparse above it.
    pub fn for_dimension(dim: usize, threshold: usize) -> Storage {
        if dim > threshold {
            Storage::Sparse
        } else {
            Storage::Dense
        }
    }
}

#[derive(Clone, Debug)]
pub enum Matrix {
    Dense(Mat<c64>),
    Sparse(CsrMatrix),
}

impl From<Mat<c64>> for Matrix {
    fn from(m: Mat<c64>) -> Self {
        Matrix::Dense(m)
    }
}

impl From<CsrMatrix> for Matrix {
    fn from(m: CsrMatrix) -> Self {
        Matrix::Sparse(m)
    }
}

impl Matrix {
    pub fn zeros(nrows: usize, ncols: usize, storage: Storage) -> Self {
        match storage {
            Storage::Dense => Matrix::Dense(Mat::zeros(nrows, ncols)),
            Storage::Sparse => Matrix::Sparse(CsrMatrix::zeros(nrows, ncols)),
        }
    }

    pub fn identity(n: usize, storage: Storage) -> Self {
        match storage {
            Storage::Dense => Matrix::Dense(Mat::identity(n, n)),
            Storage::Sparse => Matrix::Sparse(CsrMatrix::identity(n)),
        }
    }

    /// Dense matrix from row-major nested rows.
    pub fn from_rows(rows: &[Vec<c64>]) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(MeqError::Shape("rows of unequal length".into()));
        }
        Ok(Matrix::Dense(Mat::from_fn(nrows, ncols, |i, j| rows[i][j])))
    }

    pub fn nrows(&self) -> usize {
        match self {
            Matrix::Dense(m) => m.nrows(),
            Matrix::Sparse(m) => m.nrows(),
        }
    }

    pub fn ncols(&self) -> usize {
        match self {
            Matrix::Dense(m) => m.ncols(),
            Matrix::Sparse(m) => m.ncols(),
        }
    }

    pub fn is_square(&self) -> bool {
        self.nrows() == self.ncols()
    }

    pub fn storage(&self) -> Storage {
        match self {
            Matrix::Dense(_) => Storage::Dense,
            Matrix::Sparse(_) => Storage::Sparse,
        }
    }

    pub fn get(&self, i: usize, j: usize) -> c64 {
        match self {
            Matrix::Dense(m) => m[(i, j)],
            Matrix::Sparse(m) => m.get(i, j),
        }
    }

    pub fn to_dense(&self) -> Mat<c64> {
        match self {
            Matrix::Dense(m) => m.clone(),
            Matrix::Sparse(m) => m.to_dense(),
        }
    }

    pub fn to_csr(&self) -> CsrMatrix {
        match self {
            Matrix::Dense(m) => CsrMatrix::from_dense(m),
            Matrix::Sparse(m) => m.clone(),
        }
    }

    pub fn with_storage(&self, storage: Storage) -> Matrix {
        match storage {
            Storage::Dense => Matrix::Dense(self.to_dense()),
            Storage::Sparse => Matrix::Sparse(self.to_csr()),
        }
    }

    /// Column-major copy of all entries.
    pub fn to_col_major(&self) -> Vec<c64> {
        let (r, c) = (self.nrows(), self.ncols());
        let mut out = vec![ZERO; r * c];
        match self {
            Matrix::Dense(m) => {
                for j in 0..c {
                    for i in 0..r {
                        out[i + j * r] = m[(i, j)];
                    }
                }
            }
            Matrix::Sparse(m) => {
                for (i, j, v) in m.iter() {
                    out[i + j * r] = v;
                }
            }
        }
        out
    }

    pub fn from_col_major(nrows: usize, ncols: usize, data: &[c64]) -> Result<Self> {
        if data.len() != nrows * ncols {
            return Err(MeqError::Shape(format!("{} entries cannot fill a {nrows}x{ncols} matrix", data.len())));
        }
        Ok(Matrix::Dense(Mat::from_fn(nrows, ncols, |i, j| data[i + j * nrows])))
    }

    fn check_same_shape(&self, other: &Matrix, what: &str) -> Result<()> {
        if self.nrows() != other.nrows() || self.ncols() != other.ncols() {
            return Err(MeqError::Shape(format!(
                "cannot {what} {}x{} and {}x{}",
                self.nrows(),
                self.ncols(),
                other.nrows(),
                other.ncols()
            )));
        }
        Ok(())
    }

    /// `alpha * self + beta * other`.
    pub fn axpby(&self, alpha: c64, other: &Matrix, beta: c64) -> Result<Matrix> {
        self.check_same_shape(other, "add")?;
        Ok(match (self, other) {
            (Matrix::Sparse(a), Matrix::Sparse(b)) => Matrix::Sparse(a.axpby(alpha, b, beta)?),
            _ => {
                let (a, b) = (self.to_dense(), other.to_dense());
                Matrix::Dense(Mat::from_fn(a.nrows(), a.ncols(), |i, j| alpha * a[(i, j)] + beta * b[(i, j)]))
            }
        })
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        self.axpby(ONE, other, ONE)
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        self.axpby(ONE, other, -ONE)
    }

    pub fn scale(&self, s: c64) -> Matrix {
        match self {
            Matrix::Dense(m) => Matrix::Dense(Mat::from_fn(m.nrows(), m.ncols(), |i, j| s * m[(i, j)])),
            Matrix::Sparse(m) => Matrix::Sparse(m.scale(s)),
        }
    }

    pub fn matmul(&self, other: &Matrix) -> Result<Matrix> {
        if self.ncols() != other.nrows() {
            return Err(MeqError::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.nrows(),
                self.ncols(),
                other.nrows(),
                other.ncols()
            )));
        }
        Ok(match (self, other) {
            (Matrix::Sparse(a), Matrix::Sparse(b)) => Matrix::Sparse(a.matmul(b)?),
            (Matrix::Dense(a), Matrix::Dense(b)) => Matrix::Dense(a * b),
            _ => Matrix::Dense(&self.to_dense() * &other.to_dense()),
        })
    }

    pub fn transpose(&self) -> Matrix {
        match self {
            Matrix::Dense(m) => Matrix::Dense(m.transpose().to_owned()),
            Matrix::Sparse(m) => Matrix::Sparse(m.transpose()),
        }
    }

    pub fn conj(&self) -> Matrix {
        match self {
            Matrix::Dense(m) => Matrix::Dense(m.conjugate().to_owned()),
            Matrix::Sparse(m) => Matrix::Sparse(m.conj()),
        }
    }

    pub fn adjoint(&self) -> Matrix {
        match self {
            Matrix::Dense(m) => Matrix::Dense(m.adjoint().to_owned()),
            Matrix::Sparse(m) => Matrix::Sparse(m.adjoint()),
        }
    }

    /// Standard Kronecker product `self ⊗ other` (block `(i, j)` equals
    /// `self[i, j] * other`).
    pub fn kron(&self, other: &Matrix) -> Matrix {
        match (self, other) {
            (Matrix::Sparse(a), Matrix::Sparse(b)) => Matrix::Sparse(a.kron(b)),
            _ => {
                let (a, b) = (self.to_dense(), other.to_dense());
                let (br, bc) = (b.nrows(), b.ncols());
                Matrix::Dense(Mat::from_fn(a.nrows() * br, a.ncols() * bc, |r, c| {
                    a[(r / br, c / bc)] * b[(r % br, c % bc)]
                }))
            }
        }
    }

    pub fn matvec(&self, x: &[c64], y: &mut [c64]) {
        match self {
            Matrix::Sparse(m) => m.matvec(x, y),
            Matrix::Dense(m) => {
                assert_eq!(x.len(), m.ncols());
                assert_eq!(y.len(), m.nrows());
                y.iter_mut().for_each(|v| *v = ZERO);
                for j in 0..m.ncols() {
                    let xj = x[j];
                    if xj == ZERO {
                        continue;
                    }
                    let col = m.col(j);
                    for (i, yi) in y.iter_mut().enumerate() {
                        *yi += col[i] * xj;
                    }
                }
            }
        }
    }

    pub fn apply(&self, x: &[c64]) -> Vec<c64> {
        let mut y = vec![ZERO; self.nrows()];
        self.matvec(x, &mut y);
        y
    }

    /// Row vector product `x^T A`.
    pub fn vecmat(&self, x: &[c64]) -> Vec<c64> {
        let mut y = vec![ZERO; self.ncols()];
        match self {
            Matrix::Sparse(m) => m.vecmat(x, &mut y),
            Matrix::Dense(m) => {
                for (j, yj) in y.iter_mut().enumerate() {
                    let col = m.col(j);
                    *yj = (0..m.nrows()).map(|i| x[i] * col[i]).sum();
                }
            }
        }
        y
    }

    pub fn trace(&self) -> c64 {
        match self {
            Matrix::Dense(m) => (0..m.nrows().min(m.ncols())).map(|i| m[(i, i)]).sum(),
            Matrix::Sparse(m) => m.trace(),
        }
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        match self {
            Matrix::Sparse(m) => m.norm_inf(),
            Matrix::Dense(m) => {
                (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| m[(i, j)].norm()).sum::<f64>()).fold(0.0, f64::max)
            }
        }
    }

    /// Maximum absolute column sum.
    pub fn norm_one(&self) -> f64 {
        match self {
            Matrix::Sparse(m) => m.norm_one(),
            Matrix::Dense(m) => {
                (0..m.ncols()).map(|j| (0..m.nrows()).map(|i| m[(i, j)].norm()).sum::<f64>()).fold(0.0, f64::max)
            }
        }
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        match self {
            Matrix::Sparse(m) => m.max_abs(),
            Matrix::Dense(m) => {
                let mut best = 0.0f64;
                for j in 0..m.ncols() {
                    for i in 0..m.nrows() {
                        best = best.max(m[(i, j)].norm());
                    }
                }
                best
            }
        }
    }

    /// Largest entrywise difference modulus; shapes must agree.
    pub fn max_abs_diff(&self, other: &Matrix) -> Result<f64> {
        Ok(self.sub(other)?.max_abs())
    }

    /// `max |A - A^H|`.
    pub fn hermiticity_defect(&self) -> f64 {
        self.sub(&self.adjoint()).map(|d| d.max_abs()).unwrap_or(f64::INFINITY)
    }

    pub fn is_finite(&self) -> bool {
        match self {
            Matrix::Sparse(m) => m.iter().all(|(_, _, v)| v.re.is_finite() && v.im.is_finite()),
            Matrix::Dense(m) => {
                (0..m.ncols()).all(|j| (0..m.nrows()).all(|i| m[(i, j)].re.is_finite() && m[(i, j)].im.is_finite()))
            }
        }
    }
}

pub(crate) fn norm2(x: &[c64]) -> f64 {
    x.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
}

/// `sum conj(x_i) y_i`.
pub(crate) fn dot(x: &[c64], y: &[c64]) -> c64 {
    x.iter().zip(y).map(|(a, b)| a.conj() * b).sum()
}

pub(crate) fn norm_inf_vec(x: &[c64]) -> f64 {
    x.iter().map(|v| v.norm()).fold(0.0, f64::max)
}

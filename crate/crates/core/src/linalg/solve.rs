//! Direct factorizations behind a single interface, plus a 1-norm condition
//! estimator that only needs solves.

use faer::c64;
use faer::linalg::solvers::{PartialPivLu, Solve};
use faer::mat::MatMut;
use faer::sparse::linalg::solvers::Lu;

use super::{CsrMatrix, Matrix, ZERO};
use crate::error::{MeqError, Result};

/// LU factorization of a square matrix, dense or sparse.
pub enum LinearSolver {
    Dense(PartialPivLu<c64>),
    Sparse(Lu<usize, c64>),
}

impl LinearSolver {
    pub fn factor(m: &Matrix) -> Result<Self> {
        if !m.is_square() {
            return Err(MeqError::Shape(format!("cannot factor a {}x{} matrix", m.nrows(), m.ncols())));
        }
        match m {
            Matrix::Dense(d) => Ok(LinearSolver::Dense(d.partial_piv_lu())),
            Matrix::Sparse(s) => Self::factor_sparse(s),
        }
    }

    pub fn factor_sparse(s: &CsrMatrix) -> Result<Self> {
        let csc = s.to_faer_csc()?;
        let lu = csc.sp_lu().map_err(|e| MeqError::Degeneracy(format!("sparse LU factorization failed: {e}")))?;
        Ok(LinearSolver::Sparse(lu))
    }

    /// Overwrites `b` with `A^{-1} b`.
    pub fn solve_in_place(&self, b: &mut [c64]) {
        let n = b.len();
        let rhs = MatMut::from_column_major_slice_mut(b, n, 1);
        match self {
            LinearSolver::Dense(lu) => lu.solve_in_place(rhs),
            LinearSolver::Sparse(lu) => lu.solve_in_place(rhs),
        }
    }

    /// Overwrites `b` with `A^{-H} b`.
    pub fn solve_adjoint_in_place(&self, b: &mut [c64]) {
        let n = b.len();
        let rhs = MatMut::from_column_major_slice_mut(b, n, 1);
        match self {
            LinearSolver::Dense(lu) => lu.solve_adjoint_in_place(rhs),
            LinearSolver::Sparse(lu) => lu.solve_adjoint_in_place(rhs),
        }
    }
}

fn norm1(x: &[c64]) -> f64 {
    x.iter().map(|v| v.norm()).sum()
}

/// Estimates `||A^{-1}||_1` from solves with `A` and `A^H` (Hager's method
/// with Higham's alternating-sign safeguard). Returns infinity if a solve
/// produces non-finite values.
pub fn condition_estimate_one(solver: &LinearSolver, n: usize) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let finite = |x: &[c64]| x.iter().all(|v| v.re.is_finite() && v.im.is_finite());
    let mut x = vec![c64::new(1.0 / n as f64, 0.0); n];
    let mut est = 0.0;
    for iter in 0..5 {
        let mut y = x.clone();
        solver.solve_in_place(&mut y);
        if !finite(&y) {
            return f64::INFINITY;
        }
        let ny = norm1(&y);
        if iter > 0 && ny <= est {
            break;
        }
        est = ny;
        let mut z: Vec<c64> =
            y.iter().map(|v| if v.norm() > 0.0 { v / v.norm() } else { c64::new(1.0, 0.0) }).collect();
        solver.solve_adjoint_in_place(&mut z);
        if !finite(&z) {
            return f64::INFINITY;
        }
        let (jmax, zmax) =
            z.iter().enumerate().map(|(j, v)| (j, v.norm())).fold((0, -1.0), |a, b| if b.1 > a.1 { b } else { a });
        let ztx: f64 = z.iter().zip(&x).map(|(a, b)| (a.conj() * b).re).sum();
        if iter > 0 && zmax <= ztx {
            break;
        }
        x.iter_mut().for_each(|v| *v = ZERO);
        x[jmax] = c64::new(1.0, 0.0);
    }
    let mut alt: Vec<c64> = (0..n)
        .map(|i| {
            let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
            let frac = if n > 1 { i as f64 / (n - 1) as f64 } else { 0.0 };
            c64::new(sign * (1.0 + frac), 0.0)
        })
        .collect();
    solver.solve_in_place(&mut alt);
    if !finite(&alt) {
        return f64::INFINITY;
    }
    est.max(2.0 * norm1(&alt) / (3.0 * n as f64))
}

//! Steady states and leading Liouvillian spectra.
//!
//! Three independent routes to `L vec(rho) = 0`:
//!
//! * [`steady_dense`]: full eigendecomposition, leading eigenvector.
//! * [`steady_sparse`]: shift-invert Arnoldi on `(L - s I)^{-1}` with a small
//!   positive `s`, which makes the zero eigenvalue dominant.
//! * [`steady_linsolve`]: row `l + (l-1) d` of `L` is replaced by
//!   `gamma vec(I)^T`, turning the null-space problem into a regular solve
//!   whose solution has unit trace.
//!
//! Every result goes through the same pipeline: divide by the trace (which
//! fixes the arbitrary eigenvector phase), take the Hermitian part,
//! renormalize.

mod arnoldi;

use faer::{c64, Mat};

use crate::error::{MeqError, Result};
use crate::hilbert::Operator;
use crate::linalg::{condition_estimate_one, norm2, norm_inf_vec, CsrMatrix, LinearSolver, Matrix, Storage, ONE, ZERO};
use crate::superspace::SuperOperator;

use arnoldi::{compare_largest_real, dense_eigen, iram, rank, ArnoldiOptions, Which};

/// Largest superspace dimension accepted by [`steady_dense`].
pub const DENSE_GUARD: usize = 10_000;
/// Default threshold on `Re(lambda_1)` below which the steady state counts as unique.
pub const DEFAULT_GAP_TOL: f64 = 1e-8;
/// Row-replaced systems with a larger 1-norm condition estimate are rejected.
pub const CONDITION_LIMIT: f64 = 1e14;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SteadyMethod {
    DenseEig,
    SparseEig,
    Linsolve,
}

impl SteadyMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            SteadyMethod::DenseEig => "dense-eig",
            SteadyMethod::SparseEig => "sparse-eig",
            SteadyMethod::Linsolve => "linsolve",
        }
    }
}

#[derive(Clone, Debug)]
pub struct SteadyStateResult {
    pub rho: Operator,
    /// `max |L vec(rho)|`.
    pub residual: f64,
    pub method: SteadyMethod,
    pub trace_before_normalization: c64,
    /// Eigenvalue of the returned eigenvector (eigen-methods only).
    pub eigenvalue: Option<c64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumResult {
    /// Sorted by descending real part; ties by descending imaginary part.
    pub eigenvalues: Vec<c64>,
    pub count_requested: usize,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GapReport {
    pub lambda0: c64,
    /// `None` when the superspace is one-dimensional.
    pub lambda1: Option<c64>,
    pub unique: bool,
}

impl GapReport {
    fn new(lambda0: c64, lambda1: Option<c64>, gap_tol: f64) -> Self {
        let unique = lambda0.re.abs() < gap_tol && lambda1.is_none_or(|l| l.re < -gap_tol);
        GapReport { lambda0, lambda1, unique }
    }
}

fn degeneracy(lambda1: c64) -> MeqError {
    MeqError::Degeneracy(format!(
        "second eigenvalue {:.3e}{:+.3e}i has no spectral gap; the steady state is not unique",
        lambda1.re, lambda1.im
    ))
}

/// Trace-normalizes, Hermitizes and renormalizes a vectorized state.
fn finalize(l: &SuperOperator, v: &[c64], method: SteadyMethod, eigenvalue: Option<c64>) -> Result<SteadyStateResult> {
    let d = l.dim();
    let raw = Matrix::from_col_major(d, d, v)?;
    let trace = raw.trace();
    if !(trace.norm() > 1e-12 * norm_inf_vec(v)) || !trace.re.is_finite() {
        return Err(MeqError::Numerical(format!(
            "steady-state candidate has vanishing trace ({:.3e}); it is not a density matrix",
            trace.norm()
        )));
    }
    let scaled = raw.scale(ONE / trace);
    let herm = scaled.axpby(c64::new(0.5, 0.0), &scaled.adjoint(), c64::new(0.5, 0.0))?;
    let tr = herm.trace().re;
    let rho = Operator::new(
        l.layout().clone(),
        herm.scale(c64::new(1.0 / tr, 0.0)).with_storage(l.layout().default_storage()),
    )?;
    let residual = norm_inf_vec(&l.matrix().apply(&rho.matrix().to_col_major()));
    if !residual.is_finite() {
        return Err(MeqError::Numerical("non-finite steady state".into()));
    }
    Ok(SteadyStateResult { rho, residual, method, trace_before_normalization: trace, eigenvalue })
}

/// All eigenvalues of a dense superoperator, ranked, with unit eigenvectors.
fn full_eigen(l: &SuperOperator) -> Result<(Vec<c64>, Mat<c64>)> {
    let n = l.super_dim();
    if n > DENSE_GUARD {
        return Err(MeqError::Capacity(format!(
            "dense diagonalization of a {n}x{n} Liouvillian exceeds the {DENSE_GUARD} limit; use the sparse or linear-solve method"
        )));
    }
    let (values, vectors) = dense_eigen(&l.matrix().to_dense())?;
    let order = rank(&values, Which::LargestReal);
    let sorted_values = order.iter().map(|&i| values[i]).collect();
    let sorted_vectors = Mat::from_fn(n, n, |r, c| vectors[(r, order[c])]);
    Ok((sorted_values, sorted_vectors))
}

fn dense_from_eigen(l: &SuperOperator, values: &[c64], vectors: &Mat<c64>, gap_tol: f64) -> Result<SteadyStateResult> {
    if let Some(&l1) = values.get(1) {
        if l1.re >= -gap_tol {
            return Err(degeneracy(l1));
        }
    }
    let v: Vec<c64> = (0..vectors.nrows()).map(|i| vectors[(i, 0)]).collect();
    finalize(l, &v, SteadyMethod::DenseEig, Some(values[0]))
}

/// Steady state from the full eigendecomposition of `L`.
pub fn steady_dense(l: &SuperOperator) -> Result<SteadyStateResult> {
    let (values, vectors) = full_eigen(l)?;
    dense_from_eigen(l, &values, &vectors, DEFAULT_GAP_TOL)
}

/// [`steady_dense`] and the top `k` eigenvalues from one diagonalization.
pub fn steady_dense_with_spectrum(l: &SuperOperator, k: usize) -> Result<(SteadyStateResult, SpectrumResult)> {
    check_k(l, k)?;
    let (values, vectors) = full_eigen(l)?;
    let spectrum = SpectrumResult { eigenvalues: values[..k].to_vec(), count_requested: k };
    Ok((dense_from_eigen(l, &values, &vectors, DEFAULT_GAP_TOL)?, spectrum))
}

/// Shift-invert machinery shared by [`steady_sparse`] and [`check_uniqueness`].
struct ShiftInvert {
    csr: CsrMatrix,
    shift: f64,
    solver: LinearSolver,
}

impl ShiftInvert {
    fn new(l: &SuperOperator) -> Result<Self> {
        let csr = l.matrix().to_csr();
        let shift = 1e-6 * csr.norm_inf().max(1.0);
        let n = csr.nrows();
        let shifted = csr.axpby(ONE, &CsrMatrix::identity(n), c64::new(-shift, 0.0))?;
        let solver = LinearSolver::factor_sparse(&shifted)?;
        Ok(ShiftInvert { csr, shift, solver })
    }

    fn run(&self, locked: &[Vec<c64>]) -> Result<(c64, Vec<c64>)> {
        let n = self.csr.nrows();
        let op = |x: &[c64], y: &mut [c64]| {
            y.copy_from_slice(x);
            self.solver.solve_in_place(y);
        };
        let pairs = iram(op, n, 1, Which::LargestMagnitude, &ArnoldiOptions::for_dimension(n), locked)?;
        let mu = pairs.values[0];
        if mu.norm() == 0.0 || !mu.re.is_finite() {
            return Err(MeqError::Numerical("shift-invert iteration produced a zero Ritz value".into()));
        }
        Ok((c64::new(self.shift, 0.0) + ONE / mu, pairs.vectors.into_iter().next().expect("one pair")))
    }

    /// Leading eigenpair (Rayleigh quotient on `L`) and the next eigenvalue.
    fn leading_two(&self) -> Result<(c64, Vec<c64>, Option<c64>)> {
        let (_, v0) = self.run(&[])?;
        let mut lv = vec![ZERO; v0.len()];
        self.csr.matvec(&v0, &mut lv);
        let lambda0 = crate::linalg::dot(&v0, &lv) / c64::new(norm2(&v0).powi(2), 0.0);
        let lambda1 = if self.csr.nrows() > 1 { Some(self.run(std::slice::from_ref(&v0))?.0) } else { None };
        Ok((lambda0, v0, lambda1))
    }
}

/// Steady state by shift-invert Arnoldi targeting the zero eigenvalue.
pub fn steady_sparse(l: &SuperOperator) -> Result<SteadyStateResult> {
    let si = ShiftInvert::new(l)?;
    let (lambda0, v0, lambda1) = si.leading_two()?;
    if let Some(l1) = lambda1 {
        if l1.re >= -DEFAULT_GAP_TOL {
            return Err(degeneracy(l1));
        }
    }
    finalize(l, &v0, SteadyMethod::SparseEig, Some(lambda0))
}

/// Steady state from `L_0 vec(rho) = gamma e_s`, where `L_0` is `L` with row
/// `s = l + (l-1) d` replaced by `gamma vec(I)^T` (1-based `l`).
pub fn steady_linsolve(l: &SuperOperator, row: usize, gamma: f64) -> Result<SteadyStateResult> {
    let d = l.dim();
    if row == 0 || row > d {
        return Err(MeqError::Argument(format!("row level {row} out of range 1..={d}")));
    }
    if !(gamma.is_finite() && gamma > 0.0) {
        return Err(MeqError::Argument(format!("gamma must be positive and finite, got {gamma}")));
    }
    let n = d * d;
    let s = (row - 1) + (row - 1) * d;
    let mut trace_row = vec![ZERO; n];
    for k in 0..d {
        trace_row[k + k * d] = c64::new(gamma, 0.0);
    }
    let replaced = match l.matrix() {
        Matrix::Sparse(m) => Matrix::Sparse(m.with_row(s, &trace_row)),
        Matrix::Dense(m) => {
            let mut m = m.clone();
            for (j, v) in trace_row.iter().enumerate() {
                m[(s, j)] = *v;
            }
            Matrix::Dense(m)
        }
    };
    let solver = LinearSolver::factor(&replaced)
        .map_err(|e| MeqError::Degeneracy(format!("row-replaced Liouvillian is singular: {e}")))?;
    let cond = replaced.norm_one() * condition_estimate_one(&solver, n);
    if !(cond.is_finite() && cond <= CONDITION_LIMIT) {
        return Err(MeqError::Degeneracy(format!(
            "row-replaced Liouvillian is singular or ill-conditioned (condition estimate {cond:.3e}); the steady state is not unique"
        )));
    }
    let mut x = vec![ZERO; n];
    x[s] = c64::new(gamma, 0.0);
    solver.solve_in_place(&mut x);
    if x.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
        return Err(MeqError::Degeneracy("linear solve produced non-finite values".into()));
    }
    finalize(l, &x, SteadyMethod::Linsolve, None)
}

fn check_k(l: &SuperOperator, k: usize) -> Result<()> {
    let n = l.super_dim();
    if k == 0 || k > n {
        return Err(MeqError::Argument(format!("k = {k} out of range 1..={n}")));
    }
    Ok(())
}

/// The `k` eigenvalues of largest real part. Dense storage diagonalizes
/// fully; sparse storage uses restarted Arnoldi on `L` itself.
pub fn spectrum(l: &SuperOperator, k: usize) -> Result<SpectrumResult> {
    check_k(l, k)?;
    let n = l.super_dim();
    let eigenvalues = match l.storage() {
        Storage::Dense => full_eigen(l)?.0[..k].to_vec(),
        Storage::Sparse => {
            let csr = l.matrix().to_csr();
            let nev = (k + 2).min(n);
            let opts = ArnoldiOptions { ncv: 40.max(2 * nev + 1).min(n), ..ArnoldiOptions::for_dimension(n) };
            let op = |x: &[c64], y: &mut [c64]| csr.matvec(x, y);
            let mut values = iram(op, n, nev, Which::LargestReal, &opts, &[])?.values;
            values.sort_by(compare_largest_real);
            values.truncate(k);
            values
        }
    };
    Ok(SpectrumResult { eigenvalues, count_requested: k })
}

/// The two eigenvalues of largest real part and whether they certify a
/// unique steady state: `|Re l0| < gap_tol` and `Re l1 < -gap_tol`.
pub fn check_uniqueness(l: &SuperOperator, gap_tol: f64) -> Result<GapReport> {
    match l.storage() {
        Storage::Dense => {
            let (values, _) = full_eigen(l)?;
            Ok(GapReport::new(values[0], values.get(1).copied(), gap_tol))
        }
        Storage::Sparse => {
            let (lambda0, _, lambda1) = ShiftInvert::new(l)?.leading_two()?;
            Ok(GapReport::new(lambda0, lambda1, gap_tol))
        }
    }
}

//! Expectation values, populations and logarithmic negativity.

use faer::{c64, Side};

use crate::error::{MeqError, Result};
use crate::hilbert::{partial_transpose, Operator};
use crate::linalg::{Matrix, ZERO};

/// Imaginary parts of partial-transpose eigenvalues above this are an error.
pub const IMAGINARY_TOL: f64 = 1e-10;

/// `tr(O rho) = sum_ij O_ij rho_ji`.
pub fn expectation(observable: &Operator, rho: &Operator) -> Result<c64> {
    observable.check_layout(rho)?;
    let r = rho.matrix();
    Ok(match observable.matrix() {
        Matrix::Sparse(o) => o.iter().map(|(i, j, v)| v * r.get(j, i)).sum(),
        Matrix::Dense(o) => {
            let r = r.to_dense();
            let n = o.nrows();
            let mut acc = ZERO;
            for i in 0..n {
                for j in 0..n {
                    acc += o[(i, j)] * r[(j, i)];
                }
            }
            acc
        }
    })
}

/// Named expectation values with their imaginary parts kept for inspection.
#[derive(Clone, Debug, PartialEq)]
pub struct PopulationReport {
    pub labels: Vec<String>,
    pub values: Vec<f64>,
    pub imaginary_residuals: Vec<f64>,
}

impl PopulationReport {
    pub fn new<S: AsRef<str>>(rho: &Operator, observables: &[(S, Operator)]) -> Result<Self> {
        let mut report = PopulationReport { labels: vec![], values: vec![], imaginary_residuals: vec![] };
        for (label, op) in observables {
            let e = expectation(op, rho)?;
            report.labels.push(label.as_ref().to_string());
            report.values.push(e.re);
            report.imaginary_residuals.push(e.im);
        }
        Ok(report)
    }

    pub fn max_imaginary_residual(&self) -> f64 {
        self.imaginary_residuals.iter().map(|x| x.abs()).fold(0.0, f64::max)
    }

    pub fn get(&self, label: &str) -> Option<f64> {
        self.labels.iter().position(|l| l == label).map(|i| self.values[i])
    }
}

/// Photon number in the undisplaced frame for a mode displaced by `alpha`:
/// `|alpha|^2 + tr(a^H a rho) + 2 Re(conj(alpha) tr(a rho))`.
pub fn displaced_mode_population(rho: &Operator, mode_annihilation: &Operator, alpha: c64) -> Result<f64> {
    let number = mode_annihilation.adjoint().matmul(mode_annihilation)?;
    let n = expectation(&number, rho)?;
    let a = expectation(mode_annihilation, rho)?;
    Ok(alpha.norm_sqr() + n.re + 2.0 * (alpha.conj() * a).re)
}

/// Real spectrum of a (numerically) Hermitian operator, ascending.
pub fn hermitian_eigenvalues(op: &Operator) -> Result<Vec<f64>> {
    let herm = op.hermitian_part().matrix().to_dense();
    let values = herm
        .self_adjoint_eigenvalues(Side::Lower)
        .map_err(|e| MeqError::Numerical(format!("Hermitian eigensolver failed: {e:?}")))?;
    Ok(values)
}

/// Eigenvalues of the partial transpose over `transposed`, computed with a
/// general eigensolver; fails if any imaginary part exceeds [`IMAGINARY_TOL`].
pub fn partial_transpose_spectrum(rho: &Operator, transposed: &[&str]) -> Result<Vec<f64>> {
    let pt = partial_transpose(rho, transposed)?.matrix().to_dense();
    let values = pt.eigenvalues().map_err(|e| MeqError::Numerical(format!("eigensolver failed: {e:?}")))?;
    let mut out = Vec::with_capacity(values.len());
    for v in values {
        if v.im.abs() > IMAGINARY_TOL {
            return Err(MeqError::Numerical(format!(
                "partial transpose has eigenvalue {:e}{:+e}i; the state is not Hermitian",
                v.re, v.im
            )));
        }
        out.push(v.re);
    }
    out.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    Ok(out)
}

/// `ln(1 + sum(|l| - l))` over the partial-transpose eigenvalues `l`.
pub fn log_negativity(rho: &Operator, transposed: &[&str]) -> Result<f64> {
    let spectrum = partial_transpose_spectrum(rho, transposed)?;
    let s: f64 = spectrum.iter().map(|l| l.abs() - l).sum();
    Ok(s.ln_1p())
}

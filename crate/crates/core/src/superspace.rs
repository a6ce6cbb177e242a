//! Operators as vectors, superoperators as matrices.
//!
//! Vectorization stacks columns: `(vec O)[n + (m-1) d] = O[n, m]` (1-based).
//! Under this convention the map `X -> A X B` is the standard Kronecker
//! product `kron(B^T, A)`, and the Lindblad generator
//!
//! ```text
//! L rho = -i [H, rho] + sum_j G_j (2 J_j rho J_j^H - J_j^H J_j rho - rho J_j^H J_j)
//! ```
//!
//! becomes
//!
//! ```text
//! L = -i kron(I, H) + i kron(H^T, I)
//!     + sum_j G_j (2 kron(conj J_j, J_j) - kron(I, J_j^H J_j) - kron((J_j^H J_j)^T, I))
//! ```

use faer::c64;

use crate::error::{MeqError, Result};
use crate::hilbert::{Operator, SpaceLayout};
use crate::linalg::{CsrMatrix, Matrix, Storage, I, ONE, ZERO};

/// Superoperators with more than this many rows default to sparse storage.
pub const SPARSE_SUPEROPERATOR_THRESHOLD: usize = 4096;

/// Relative tolerance for accepting a Hamiltonian as Hermitian.
pub const HERMITICITY_TOL: f64 = 1e-10;

fn super_storage(layout: &SpaceLayout) -> Storage {
    let d = layout.total_dim();
    Storage::for_dimension(d * d, SPARSE_SUPEROPERATOR_THRESHOLD)
}

/// A column-stacked operator.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorizedOperator {
    layout: SpaceLayout,
    components: Vec<c64>,
}

impl VectorizedOperator {
    pub fn new(layout: SpaceLayout, components: Vec<c64>) -> Result<Self> {
        let d = layout.total_dim();
        if components.len() != d * d {
            return Err(MeqError::Shape(format!(
                "vectorized operator on {layout} needs {} components, got {}",
                d * d,
                components.len()
            )));
        }
        Ok(VectorizedOperator { layout, components })
    }

    pub fn layout(&self) -> &SpaceLayout {
        &self.layout
    }

    pub fn components(&self) -> &[c64] {
        &self.components
    }

    pub fn into_components(self) -> Vec<c64> {
        self.components
    }
}

pub fn vectorize(op: &Operator) -> VectorizedOperator {
    VectorizedOperator { layout: op.layout().clone(), components: op.matrix().to_col_major() }
}

pub fn devectorize(v: &VectorizedOperator) -> Result<Operator> {
    let d = v.layout.total_dim();
    let m = Matrix::from_col_major(d, d, &v.components)?.with_storage(v.layout.default_storage());
    Operator::new(v.layout.clone(), m)
}

/// A `d^2 x d^2` matrix acting on vectorized operators.
#[derive(Clone, Debug)]
pub struct SuperOperator {
    layout: SpaceLayout,
    matrix: Matrix,
}

impl SuperOperator {
    pub fn new(layout: SpaceLayout, matrix: Matrix) -> Result<Self> {
        let d = layout.total_dim();
        if matrix.nrows() != d * d || matrix.ncols() != d * d {
            return Err(MeqError::Shape(format!(
                "superoperator on {layout} must be {0}x{0}, got {1}x{2}",
                d * d,
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        Ok(SuperOperator { layout, matrix })
    }

    pub fn zeros(layout: &SpaceLayout) -> Self {
        let n = layout.total_dim().pow(2);
        SuperOperator { matrix: Matrix::zeros(n, n, super_storage(layout)), layout: layout.clone() }
    }

    pub fn layout(&self) -> &SpaceLayout {
        &self.layout
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> Matrix {
        self.matrix
    }

    /// Hilbert-space dimension `d`.
    pub fn dim(&self) -> usize {
        self.layout.total_dim()
    }

    /// Superspace dimension `d^2`.
    pub fn super_dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn storage(&self) -> Storage {
        self.matrix.storage()
    }

    pub fn with_storage(&self, storage: Storage) -> SuperOperator {
        SuperOperator { layout: self.layout.clone(), matrix: self.matrix.with_storage(storage) }
    }

    pub fn apply(&self, v: &VectorizedOperator) -> Result<VectorizedOperator> {
        if v.layout != self.layout {
            return Err(MeqError::LayoutMismatch(format!("{} vs {}", self.layout, v.layout)));
        }
        Ok(VectorizedOperator { layout: self.layout.clone(), components: self.matrix.apply(&v.components) })
    }

    /// `devectorize(S vec(X))`.
    pub fn act(&self, x: &Operator) -> Result<Operator> {
        devectorize(&self.apply(&vectorize(x))?)
    }

    pub fn add(&self, other: &SuperOperator) -> Result<SuperOperator> {
        if self.layout != other.layout {
            return Err(MeqError::LayoutMismatch(format!("{} vs {}", self.layout, other.layout)));
        }
        Ok(SuperOperator { layout: self.layout.clone(), matrix: self.matrix.add(&other.matrix)? })
    }

    pub fn scale(&self, s: c64) -> SuperOperator {
        SuperOperator { layout: self.layout.clone(), matrix: self.matrix.scale(s) }
    }

    pub fn max_abs_diff(&self, other: &SuperOperator) -> Result<f64> {
        if self.layout != other.layout {
            return Err(MeqError::LayoutMismatch(format!("{} vs {}", self.layout, other.layout)));
        }
        self.matrix.max_abs_diff(&other.matrix)
    }

    pub fn norm_inf(&self) -> f64 {
        self.matrix.norm_inf()
    }
}

/// Hamiltonian plus rate-weighted jump operators, all on one layout.
#[derive(Clone, Debug)]
pub struct LindbladModel {
    hamiltonian: Operator,
    dissipators: Vec<(f64, Operator)>,
}

impl LindbladModel {
    pub fn new(hamiltonian: Operator, dissipators: Vec<(f64, Operator)>) -> Result<Self> {
        if !hamiltonian.is_hermitian(HERMITICITY_TOL) {
            return Err(MeqError::Validation(format!(
                "Hamiltonian is not Hermitian (max |H - H^H| = {:e})",
                hamiltonian.matrix().hermiticity_defect()
            )));
        }
        for (k, (rate, jump)) in dissipators.iter().enumerate() {
            check_rate(*rate)?;
            hamiltonian.check_layout(jump).map_err(|e| match e {
                MeqError::LayoutMismatch(m) => MeqError::LayoutMismatch(format!("dissipator {}: {m}", k + 1)),
                other => other,
            })?;
        }
        Ok(LindbladModel { hamiltonian, dissipators })
    }

    pub fn layout(&self) -> &SpaceLayout {
        self.hamiltonian.layout()
    }

    pub fn dim(&self) -> usize {
        self.layout().total_dim()
    }

    pub fn hamiltonian(&self) -> &Operator {
        &self.hamiltonian
    }

    pub fn dissipators(&self) -> &[(f64, Operator)] {
        &self.dissipators
    }
}

fn check_rate(rate: f64) -> Result<()> {
    if !(rate.is_finite() && rate > 0.0) {
        return Err(MeqError::Validation(format!("dissipation rate must be positive and finite, got {rate}")));
    }
    Ok(())
}

/// Superoperator of `X -> A X B`.
pub fn super_sandwich(a: &Operator, b: &Operator) -> Result<SuperOperator> {
    a.check_layout(b)?;
    let m = b.matrix().to_csr().transpose().kron(&a.matrix().to_csr());
    SuperOperator::new(a.layout().clone(), Matrix::Sparse(m).with_storage(super_storage(a.layout())))
}

fn hamiltonian_csr(h: &CsrMatrix) -> CsrMatrix {
    let id = CsrMatrix::identity(h.nrows());
    let left = id.kron(h);
    let right = h.transpose().kron(&id);
    left.axpby(-I, &right, I).expect("same shape")
}

fn dissipator_csr(j: &CsrMatrix, rate: f64) -> CsrMatrix {
    let id = CsrMatrix::identity(j.nrows());
    let jhj = j.adjoint().matmul(j).expect("square");
    let gain = j.conj().kron(j);
    let loss = id.kron(&jhj).axpby(ONE, &jhj.transpose().kron(&id), ONE).expect("same shape");
    gain.axpby(c64::new(2.0 * rate, 0.0), &loss, c64::new(-rate, 0.0)).expect("same shape")
}

/// `-i [H, .]` in superspace.
pub fn hamiltonian_super(h: &Operator) -> Result<SuperOperator> {
    if !h.is_hermitian(HERMITICITY_TOL) {
        return Err(MeqError::Validation(format!(
            "Hamiltonian is not Hermitian (max |H - H^H| = {:e})",
            h.matrix().hermiticity_defect()
        )));
    }
    let m = hamiltonian_csr(&h.matrix().to_csr());
    SuperOperator::new(h.layout().clone(), Matrix::Sparse(m).with_storage(super_storage(h.layout())))
}

/// `rho -> rate (2 J rho J^H - J^H J rho - rho J^H J)` in superspace.
pub fn dissipator_super(j: &Operator, rate: f64) -> Result<SuperOperator> {
    check_rate(rate)?;
    let m = dissipator_csr(&j.matrix().to_csr(), rate);
    SuperOperator::new(j.layout().clone(), Matrix::Sparse(m).with_storage(super_storage(j.layout())))
}

/// Assembles the Liouvillian of `model`. Storage is sparse when `d^2 > 4096`.
pub fn build_liouvillian(model: &LindbladModel) -> Result<SuperOperator> {
    let mut acc = hamiltonian_csr(&model.hamiltonian.matrix().to_csr());
    for (rate, jump) in &model.dissipators {
        acc = acc.axpby(ONE, &dissipator_csr(&jump.matrix().to_csr(), *rate), ONE)?;
    }
    let layout = model.layout();
    SuperOperator::new(layout.clone(), Matrix::Sparse(acc).with_storage(super_storage(layout)))
}

/// Reference Liouvillian filled entry by entry from
///
/// ```text
/// L[nm; kl] = -i H[n,k] d(m,l) + i H[l,m] d(k,n)
///             + sum_j G_j (2 J[n,k] conj(J[m,l]) - (J^H J)[n,k] d(m,l) - d(k,n) (J^H J)[l,m])
/// ```
///
/// with row `n + m d` and column `k + l d` (0-based). Dense, `O(d^4)`; meant
/// for cross-checking [`build_liouvillian`] on small models.
pub fn liouvillian_oracle(model: &LindbladModel) -> SuperOperator {
    let d = model.dim();
    let h = model.hamiltonian.matrix().to_dense();
    let jumps: Vec<(f64, faer::Mat<c64>, faer::Mat<c64>)> = model
        .dissipators
        .iter()
        .map(|(rate, j)| {
            let j = j.matrix().to_dense();
            let mut jhj = faer::Mat::<c64>::zeros(d, d);
            for a in 0..d {
                for b in 0..d {
                    let mut s = ZERO;
                    for c in 0..d {
                        s += j[(c, a)].conj() * j[(c, b)];
                    }
                    jhj[(a, b)] = s;
                }
            }
            (*rate, j, jhj)
        })
        .collect();
    let delta = |a: usize, b: usize| if a == b { ONE } else { ZERO };
    let mut out = faer::Mat::<c64>::zeros(d * d, d * d);
    for m in 0..d {
        for n in 0..d {
            for l in 0..d {
                for k in 0..d {
                    let mut v = -I * h[(n, k)] * delta(m, l) + I * h[(l, m)] * delta(k, n);
                    for (rate, j, jhj) in &jumps {
                        let g = c64::new(*rate, 0.0);
                        v += g
                            * (c64::new(2.0, 0.0) * j[(n, k)] * j[(m, l)].conj()
                                - jhj[(n, k)] * delta(m, l)
                                - delta(k, n) * jhj[(l, m)]);
                    }
                    out[(n + m * d, k + l * d)] = v;
                }
            }
        }
    }
    SuperOperator { layout: model.layout().clone(), matrix: Matrix::Dense(out) }
}

//! Composite Hilbert spaces.
//!
//! A [`SpaceLayout`] is an ordered list of named subsystems. Basis elements of
//! the full space are ordered so that the first subsystem's index varies
//! fastest:
//!
//! ```text
//! n = n_1 + (n_2 - 1) d_1 + (n_3 - 1) d_1 d_2 + ... + (n_N - 1) d_1 ... d_{N-1}
//! ```
//!
//! which is what a Kronecker product chain taken in *reversed* order,
//! `kron(O_N, ... kron(O_2, O_1))`, produces. All public indices (multi-indices,
//! flat indices, transition levels) are 1-based; storage is 0-based.
//!
//! Partial traces and transposes reshape an operator into its `2N`-index array
//! (row indices `n_1..n_N` followed by column indices `m_1..m_N`, column-major),
//! permute the axes, and reshape back.

use std::collections::BTreeSet;
use std::fmt;

use faer::c64;

use crate::error::{MeqError, Result};
use crate::linalg::{CsrMatrix, Matrix, Storage, ONE, ZERO};

/// Operators on spaces larger than this default to sparse storage.
pub const SPARSE_OPERATOR_THRESHOLD: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subsystem {
    pub name: String,
    pub dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SpaceLayout {
    subsystems: Vec<Subsystem>,
    total_dim: usize,
}

impl SpaceLayout {
    pub fn new<S: Into<String>>(subsystems: impl IntoIterator<Item = (S, usize)>) -> Result<Self> {
        let subsystems: Vec<Subsystem> =
            subsystems.into_iter().map(|(name, dim)| Subsystem { name: name.into(), dim }).collect();
        if subsystems.is_empty() {
            return Err(MeqError::Argument("a layout needs at least one subsystem".into()));
        }
        let mut seen = BTreeSet::new();
        for s in &subsystems {
            if s.name.is_empty() {
                return Err(MeqError::Argument("subsystem names must be nonempty".into()));
            }
            if s.dim == 0 {
                return Err(MeqError::Argument(format!("subsystem `{}` has dimension 0", s.name)));
            }
            if !seen.insert(s.name.as_str()) {
                return Err(MeqError::Argument(format!("duplicate subsystem name `{}`", s.name)));
            }
        }
        let total_dim = subsystems
            .iter()
            .try_fold(1usize, |acc, s| acc.checked_mul(s.dim))
            .ok_or_else(|| MeqError::Capacity("total dimension overflows".into()))?;
        Ok(SpaceLayout { subsystems, total_dim })
    }

    /// Layout with a single subsystem.
    pub fn single(name: &str, dim: usize) -> Result<Self> {
        SpaceLayout::new([(name, dim)])
    }

    pub fn subsystems(&self) -> &[Subsystem] {
        &self.subsystems
    }

    pub fn len(&self) -> usize {
        self.subsystems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subsystems.is_empty()
    }

    pub fn total_dim(&self) -> usize {
        self.total_dim
    }

    pub fn dims(&self) -> Vec<usize> {
        self.subsystems.iter().map(|s| s.dim).collect()
    }

    pub fn names(&self) -> Vec<&str> {
        self.subsystems.iter().map(|s| s.name.as_str()).collect()
    }

    pub fn position(&self, name: &str) -> Result<usize> {
        self.subsystems
            .iter()
            .position(|s| s.name == name)
            .ok_or_else(|| MeqError::Argument(format!("unknown subsystem `{name}`")))
    }

    pub fn dim_of(&self, name: &str) -> Result<usize> {
        Ok(self.subsystems[self.position(name)?].dim)
    }

    pub fn default_storage(&self) -> Storage {
        Storage::for_dimension(self.total_dim, SPARSE_OPERATOR_THRESHOLD)
    }

    fn keep_positions(&self, positions: &[usize]) -> SpaceLayout {
        SpaceLayout::new(positions.iter().map(|&p| (self.subsystems[p].name.clone(), self.subsystems[p].dim)))
            .expect("subset of a valid layout is valid")
    }

    /// Resolves a set of names to sorted, deduplicated positions.
    fn positions_of(&self, names: &[&str]) -> Result<Vec<usize>> {
        let set: BTreeSet<usize> = names.iter().map(|n| self.position(n)).collect::<Result<_>>()?;
        Ok(set.into_iter().collect())
    }
}

impl fmt::Display for SpaceLayout {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.subsystems.iter().map(|s| format!("{}:{}", s.name, s.dim)).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// One 1-based index per subsystem.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiIndex(Vec<usize>);

impl MultiIndex {
    pub fn new(components: Vec<usize>) -> Self {
        MultiIndex(components)
    }

    pub fn components(&self) -> &[usize] {
        &self.0
    }

    fn validate(&self, layout: &SpaceLayout) -> Result<()> {
        if self.0.len() != layout.len() {
            return Err(MeqError::Index(format!(
                "multi-index has {} components but the layout has {} subsystems",
                self.0.len(),
                layout.len()
            )));
        }
        for (&n, s) in self.0.iter().zip(layout.subsystems()) {
            if n == 0 || n > s.dim {
                return Err(MeqError::Index(format!(
                    "index {n} out of range 1..={} for subsystem `{}`",
                    s.dim, s.name
                )));
            }
        }
        Ok(())
    }
}

impl From<Vec<usize>> for MultiIndex {
    fn from(v: Vec<usize>) -> Self {
        MultiIndex(v)
    }
}

impl From<&[usize]> for MultiIndex {
    fn from(v: &[usize]) -> Self {
        MultiIndex(v.to_vec())
    }
}

/// Flat 1-based index of a multi-index.
pub fn index_to_flat(layout: &SpaceLayout, multi: &MultiIndex) -> Result<usize> {
    multi.validate(layout)?;
    let mut flat = 0;
    let mut stride = 1;
    for (&n, s) in multi.0.iter().zip(layout.subsystems()) {
        flat += (n - 1) * stride;
        stride *= s.dim;
    }
    Ok(flat + 1)
}

/// Inverse of [`index_to_flat`].
pub fn flat_to_index(layout: &SpaceLayout, flat: usize) -> Result<MultiIndex> {
    if flat == 0 || flat > layout.total_dim() {
        return Err(MeqError::Index(format!("flat index {flat} out of range 1..={}", layout.total_dim())));
    }
    let mut rest = flat - 1;
    let components = layout
        .subsystems()
        .iter()
        .map(|s| {
            let n = rest % s.dim;
            rest /= s.dim;
            n + 1
        })
        .collect();
    Ok(MultiIndex(components))
}

/// A `d x d` matrix on a composite space.
#[derive(Clone, Debug)]
pub struct Operator {
    layout: SpaceLayout,
    matrix: Matrix,
}

impl Operator {
    pub fn new(layout: SpaceLayout, matrix: Matrix) -> Result<Self> {
        let d = layout.total_dim();
        if matrix.nrows() != d || matrix.ncols() != d {
            return Err(MeqError::Shape(format!(
                "operator on {layout} must be {d}x{d}, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        Ok(Operator { layout, matrix })
    }

    pub fn zeros(layout: &SpaceLayout) -> Self {
        let d = layout.total_dim();
        Operator { matrix: Matrix::zeros(d, d, layout.default_storage()), layout: layout.clone() }
    }

    pub fn identity(layout: &SpaceLayout) -> Self {
        Operator { matrix: Matrix::identity(layout.total_dim(), layout.default_storage()), layout: layout.clone() }
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

    pub fn dim(&self) -> usize {
        self.layout.total_dim()
    }

    pub fn storage(&self) -> Storage {
        self.matrix.storage()
    }

    pub fn with_storage(&self, storage: Storage) -> Operator {
        Operator { layout: self.layout.clone(), matrix: self.matrix.with_storage(storage) }
    }

    /// Matrix element with 0-based flat indices.
    pub fn get(&self, row: usize, col: usize) -> c64 {
        self.matrix.get(row, col)
    }

    /// Matrix element addressed by 1-based multi-indices.
    pub fn element(&self, row: &MultiIndex, col: &MultiIndex) -> Result<c64> {
        let r = index_to_flat(&self.layout, row)?;
        let c = index_to_flat(&self.layout, col)?;
        Ok(self.matrix.get(r - 1, c - 1))
    }

    pub(crate) fn check_layout(&self, other: &Operator) -> Result<()> {
        if self.layout != other.layout {
            return Err(MeqError::LayoutMismatch(format!("{} vs {}", self.layout, other.layout)));
        }
        Ok(())
    }

    pub fn add(&self, other: &Operator) -> Result<Operator> {
        self.check_layout(other)?;
        Ok(Operator { layout: self.layout.clone(), matrix: self.matrix.add(&other.matrix)? })
    }

    pub fn sub(&self, other: &Operator) -> Result<Operator> {
        self.check_layout(other)?;
        Ok(Operator { layout: self.layout.clone(), matrix: self.matrix.sub(&other.matrix)? })
    }

    pub fn matmul(&self, other: &Operator) -> Result<Operator> {
        self.check_layout(other)?;
        Ok(Operator { layout: self.layout.clone(), matrix: self.matrix.matmul(&other.matrix)? })
    }

    pub fn scale(&self, s: c64) -> Operator {
        Operator { layout: self.layout.clone(), matrix: self.matrix.scale(s) }
    }

    pub fn adjoint(&self) -> Operator {
        Operator { layout: self.layout.clone(), matrix: self.matrix.adjoint() }
    }

    pub fn transpose(&self) -> Operator {
        Operator { layout: self.layout.clone(), matrix: self.matrix.transpose() }
    }

    pub fn trace(&self) -> c64 {
        self.matrix.trace()
    }

    /// `(A + A^H) / 2`.
    pub fn hermitian_part(&self) -> Operator {
        let m = self.matrix.axpby(c64::new(0.5, 0.0), &self.matrix.adjoint(), c64::new(0.5, 0.0)).expect("square");
        Operator { layout: self.layout.clone(), matrix: m }
    }

    /// True when `max |A - A^H| <= tol * max |A|`.
    pub fn is_hermitian(&self, rel_tol: f64) -> bool {
        self.matrix.hermiticity_defect() <= rel_tol * self.matrix.max_abs()
    }

    pub fn max_abs_diff(&self, other: &Operator) -> Result<f64> {
        self.check_layout(other)?;
        self.matrix.max_abs_diff(&other.matrix)
    }
}

/// A pure state on a composite space.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    layout: SpaceLayout,
    amplitudes: Vec<c64>,
}

impl StateVector {
    pub fn new(layout: SpaceLayout, amplitudes: Vec<c64>) -> Result<Self> {
        if amplitudes.len() != layout.total_dim() {
            return Err(MeqError::Shape(format!(
                "state on {layout} needs {} amplitudes, got {}",
                layout.total_dim(),
                amplitudes.len()
            )));
        }
        Ok(StateVector { layout, amplitudes })
    }

    pub fn layout(&self) -> &SpaceLayout {
        &self.layout
    }

    pub fn amplitudes(&self) -> &[c64] {
        &self.amplitudes
    }

    /// `|a><a|`.
    pub fn projector(&self) -> Operator {
        let entries: Vec<_> = self
            .amplitudes
            .iter()
            .enumerate()
            .filter(|(_, a)| **a != ZERO)
            .flat_map(|(i, a)| {
                self.amplitudes.iter().enumerate().filter(|(_, b)| **b != ZERO).map(move |(j, b)| (i, j, a * b.conj()))
            })
            .collect();
        let d = self.layout.total_dim();
        let m = CsrMatrix::from_triplets(d, d, &entries).expect("indices in range");
        Operator { layout: self.layout.clone(), matrix: Matrix::Sparse(m).with_storage(self.layout.default_storage()) }
    }
}

/// Unit vector for the basis element labelled by `multi`.
pub fn basis_state(layout: &SpaceLayout, multi: &MultiIndex) -> Result<StateVector> {
    let n = index_to_flat(layout, multi)?;
    let mut amplitudes = vec![ZERO; layout.total_dim()];
    amplitudes[n - 1] = ONE;
    Ok(StateVector { layout: layout.clone(), amplitudes })
}

/// Tensor product of local states, one per subsystem (reversed Kronecker chain).
pub fn product_state(layout: &SpaceLayout, locals: &[Vec<c64>]) -> Result<StateVector> {
    if locals.len() != layout.len() {
        return Err(MeqError::Argument(format!("expected {} local states, got {}", layout.len(), locals.len())));
    }
    let mut amplitudes = vec![ONE];
    for (local, s) in locals.iter().zip(layout.subsystems()) {
        if local.len() != s.dim {
            return Err(MeqError::Shape(format!(
                "local state for `{}` has length {}, expected {}",
                s.name,
                local.len(),
                s.dim
            )));
        }
        amplitudes = local.iter().flat_map(|b| amplitudes.iter().map(move |a| a * b)).collect();
    }
    Ok(StateVector { layout: layout.clone(), amplitudes })
}

/// Truncated bosonic lowering operator on Fock states `|0>..|dim-1>`:
/// `sqrt(1), sqrt(2), ...` on the first superdiagonal.
pub fn annihilation(dim: usize) -> Result<Matrix> {
    if dim == 0 {
        return Err(MeqError::Argument("annihilation operator needs dim >= 1".into()));
    }
    let entries: Vec<_> = (1..dim).map(|n| (n - 1, n, c64::new((n as f64).sqrt(), 0.0))).collect();
    Ok(Matrix::Sparse(CsrMatrix::from_triplets(dim, dim, &entries)?).with_storage(Storage::Dense))
}

/// `|j><k|` on a `dim`-level system, 1-based levels.
pub fn transition(dim: usize, j: usize, k: usize) -> Result<Matrix> {
    for (label, v) in [("j", j), ("k", k)] {
        if v == 0 || v > dim {
            return Err(MeqError::Argument(format!("transition level {label} = {v} out of range 1..={dim}")));
        }
    }
    Ok(Matrix::Sparse(CsrMatrix::from_triplets(dim, dim, &[(j - 1, k - 1, ONE)])?).with_storage(Storage::Dense))
}

/// Full-space operator `O_1 ⊗ O_2 ⊗ ... ⊗ O_N`, built as `kron(O_N, ... kron(O_2, O_1))`.
pub fn tensor_all(layout: &SpaceLayout, locals: &[Matrix]) -> Result<Operator> {
    if locals.len() != layout.len() {
        return Err(MeqError::Argument(format!("expected {} local operators, got {}", layout.len(), locals.len())));
    }
    let mut full: Option<CsrMatrix> = None;
    for (local, s) in locals.iter().zip(layout.subsystems()) {
        if local.nrows() != s.dim || local.ncols() != s.dim {
            return Err(MeqError::Shape(format!(
                "local operator for `{}` is {}x{}, expected {}x{}",
                s.name,
                local.nrows(),
                local.ncols(),
                s.dim,
                s.dim
            )));
        }
        let local = local.to_csr();
        full = Some(match full {
            None => local,
            Some(acc) => local.kron(&acc),
        });
    }
    let matrix = Matrix::Sparse(full.expect("layout is nonempty")).with_storage(layout.default_storage());
    Operator::new(layout.clone(), matrix)
}

/// Embeds a local operator on the named subsystem, identity elsewhere.
pub fn embed(layout: &SpaceLayout, subsystem: &str, local: &Matrix) -> Result<Operator> {
    let pos = layout.position(subsystem)?;
    let locals: Vec<Matrix> = layout
        .subsystems()
        .iter()
        .enumerate()
        .map(|(i, s)| if i == pos { local.clone() } else { Matrix::identity(s.dim, Storage::Sparse) })
        .collect();
    tensor_all(layout, &locals)
}

/// Reorders the axes of a column-major array: output axis `k` is input axis `perm[k]`.
fn permute_axes(data: &[c64], dims: &[usize], perm: &[usize]) -> Vec<c64> {
    debug_assert_eq!(dims.len(), perm.len());
    let mut strides = vec![1usize; dims.len()];
    for k in 1..dims.len() {
        strides[k] = strides[k - 1] * dims[k - 1];
    }
    let out_dims: Vec<usize> = perm.iter().map(|&p| dims[p]).collect();
    let out_strides: Vec<usize> = perm.iter().map(|&p| strides[p]).collect();
    let mut out = Vec::with_capacity(data.len());
    let mut counter = vec![0usize; dims.len()];
    let mut offset = 0usize;
    for _ in 0..data.len() {
        out.push(data[offset]);
        for k in 0..counter.len() {
            counter[k] += 1;
            offset += out_strides[k];
            if counter[k] < out_dims[k] {
                break;
            }
            offset -= out_strides[k] * out_dims[k];
            counter[k] = 0;
        }
    }
    out
}

/// Traces out the named subsystems. The result lives on the remaining
/// subsystems, in their original order.
pub fn partial_trace(op: &Operator, traced: &[&str]) -> Result<Operator> {
    let layout = op.layout();
    let traced = layout.positions_of(traced)?;
    if traced.is_empty() {
        return Err(MeqError::Argument("partial trace needs at least one subsystem".into()));
    }
    if traced.len() == layout.len() {
        return Err(MeqError::Argument("cannot trace out every subsystem; use the full trace".into()));
    }
    let n = layout.len();
    let dims = layout.dims();
    let kept: Vec<usize> = (0..n).filter(|p| !traced.contains(p)).collect();
    let mut perm: Vec<usize> = kept.clone();
    perm.extend(kept.iter().map(|p| p + n));
    perm.extend(traced.iter().copied());
    perm.extend(traced.iter().map(|p| p + n));
    let mut array_dims = dims.clone();
    array_dims.extend(&dims);

    let permuted = permute_axes(&op.matrix().to_col_major(), &array_dims, &perm);
    let dk: usize = kept.iter().map(|&p| dims[p]).product();
    let dt: usize = traced.iter().map(|&p| dims[p]).product();
    let block = dk * dk;
    let mut reduced = vec![ZERO; block];
    for t in 0..dt {
        let col = t + t * dt;
        for (r, v) in reduced.iter_mut().enumerate() {
            *v += permuted[r + col * block];
        }
    }
    let reduced_layout = layout.keep_positions(&kept);
    let matrix = Matrix::from_col_major(dk, dk, &reduced)?.with_storage(reduced_layout.default_storage());
    Operator::new(reduced_layout, matrix)
}

/// Transposes the named subsystems' indices, leaving the rest untouched.
pub fn partial_transpose(op: &Operator, transposed: &[&str]) -> Result<Operator> {
    let layout = op.layout();
    let positions = layout.positions_of(transposed)?;
    if positions.is_empty() {
        return Err(MeqError::Argument("partial transpose needs at least one subsystem".into()));
    }
    let n = layout.len();
    let dims = layout.dims();
    let mut perm: Vec<usize> = (0..2 * n).collect();
    for &p in &positions {
        perm.swap(p, p + n);
    }
    let mut array_dims = dims.clone();
    array_dims.extend(&dims);
    let permuted = permute_axes(&op.matrix().to_col_major(), &array_dims, &perm);
    let d = layout.total_dim();
    let matrix = Matrix::from_col_major(d, d, &permuted)?.with_storage(op.storage());
    Operator::new(layout.clone(), matrix)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn layout(dims: &[usize]) -> SpaceLayout {
        SpaceLayout::new(dims.iter().enumerate().map(|(i, &d)| (format!("s{}", i + 1), d))).unwrap()
    }

    #[test]
    fn flat_index_examples() {
        let l = layout(&[3, 5, 3]);
        assert_eq!(index_to_flat(&l, &vec![1, 1, 1].into()).unwrap(), 1);
        assert_eq!(index_to_flat(&l, &vec![2, 1, 1].into()).unwrap(), 2);
        assert_eq!(index_to_flat(&l, &vec![1, 2, 1].into()).unwrap(), 4);
        assert_eq!(index_to_flat(&l, &vec![3, 5, 3].into()).unwrap(), 45);
        assert_eq!(flat_to_index(&l, 1).unwrap(), vec![1, 1, 1].into());
        assert_eq!(flat_to_index(&l, 4).unwrap(), vec![1, 2, 1].into());
        assert_eq!(flat_to_index(&layout(&[2, 2]), 3).unwrap(), vec![1, 2].into());
    }

    #[test]
    fn index_errors_name_the_subsystem() {
        let l = layout(&[3, 5, 3]);
        let err = index_to_flat(&l, &vec![1, 6, 1].into()).unwrap_err();
        assert!(matches!(err, MeqError::Index(ref m) if m.contains("s2")), "{err}");
        assert!(index_to_flat(&l, &vec![1, 1].into()).is_err());
        assert!(flat_to_index(&l, 0).is_err());
        assert!(flat_to_index(&l, 46).is_err());
    }

    #[test]
    fn layout_validation() {
        assert!(SpaceLayout::new(Vec::<(String, usize)>::new()).is_err());
        assert!(SpaceLayout::new([("a", 2), ("a", 3)]).is_err());
        assert!(SpaceLayout::new([("a", 0)]).is_err());
        assert!(SpaceLayout::new([("", 2)]).is_err());
        assert_eq!(layout(&[3, 5, 3]).total_dim(), 45);
    }

    #[test]
    fn basis_state_examples() {
        let l = layout(&[3]);
        let v = basis_state(&l, &vec![2].into()).unwrap();
        assert_eq!(v.amplitudes(), &[ZERO, ONE, ZERO]);
        let v = basis_state(&layout(&[3, 3]), &vec![1, 2].into()).unwrap();
        assert_eq!(v.amplitudes().iter().position(|a| *a == ONE), Some(3));
    }

    #[test]
    fn primitive_operators() {
        let a = annihilation(2).unwrap();
        assert_eq!(a.to_dense(), Matrix::from_rows(&[vec![ZERO, ONE], vec![ZERO, ZERO]]).unwrap().to_dense());
        let a3 = annihilation(3).unwrap();
        assert_eq!(a3.get(0, 1), ONE);
        assert!((a3.get(1, 2).re - 2f64.sqrt()).abs() < 1e-15);
        assert!(annihilation(0).is_err());
        let s = transition(3, 2, 2).unwrap();
        assert_eq!(s.get(1, 1), ONE);
        assert_eq!(s.trace(), ONE);
        assert!(transition(3, 4, 1).is_err());
        assert!(transition(3, 1, 0).is_err());
    }

    #[test]
    fn permute_axes_matches_transpose() {
        let data: Vec<c64> = (0..6).map(|i| c64::new(i as f64, 0.0)).collect();
        let out = permute_axes(&data, &[2, 3], &[1, 0]);
        let m = Matrix::from_col_major(2, 3, &data).unwrap();
        let t = Matrix::from_col_major(3, 2, &out).unwrap();
        assert_eq!(t.to_dense(), m.transpose().to_dense());
    }

    #[test]
    fn partial_trace_argument_errors() {
        let l = layout(&[2, 3]);
        let op = Operator::identity(&l);
        assert!(partial_trace(&op, &[]).is_err());
        assert!(partial_trace(&op, &["s1", "s2"]).is_err());
        assert!(partial_trace(&op, &["nope"]).is_err());
        assert!(partial_transpose(&op, &["nope"]).is_err());
        assert!(partial_transpose(&op, &[]).is_err());
    }
}

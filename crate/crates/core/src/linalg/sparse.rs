//! Compressed sparse row storage for complex matrices.

use faer::sparse::{SparseColMat, Triplet};
use faer::{c64, Mat};

use crate::error::{MeqError, Result};

const ZERO: c64 = c64 { re: 0.0, im: 0.0 };

/// Complex CSR matrix. Column indices within a row are strictly increasing and
/// no explicit zeros are stored.
#[derive(Clone, Debug, PartialEq)]
pub struct CsrMatrix {
    nrows: usize,
    ncols: usize,
    indptr: Vec<usize>,
    indices: Vec<usize>,
    values: Vec<c64>,
}

impl CsrMatrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        CsrMatrix { nrows, ncols, indptr: vec![0; nrows + 1], indices: Vec::new(), values: Vec::new() }
    }

    pub fn identity(n: usize) -> Self {
        CsrMatrix {
            nrows: n,
            ncols: n,
            indptr: (0..=n).collect(),
            indices: (0..n).collect(),
            values: vec![c64::new(1.0, 0.0); n],
        }
    }

    /// Builds a matrix from (row, col, value) entries; duplicates are summed and
    /// entries that end up exactly zero are dropped.
    pub fn from_triplets(nrows: usize, ncols: usize, entries: &[(usize, usize, c64)]) -> Result<Self> {
        let mut per_row: Vec<Vec<(usize, c64)>> = vec![Vec::new(); nrows];
        for &(r, c, v) in entries {
            if r >= nrows || c >= ncols {
                return Err(MeqError::Index(format!("entry ({r}, {c}) outside a {nrows}x{ncols} matrix")));
            }
            per_row[r].push((c, v));
        }
        let mut indptr = Vec::with_capacity(nrows + 1);
        let mut indices = Vec::new();
        let mut values = Vec::new();
        indptr.push(0);
        for mut row in per_row {
            row.sort_by_key(|&(c, _)| c);
            let mut iter = row.into_iter().peekable();
            while let Some((c, mut v)) = iter.next() {
                while let Some(&(c2, v2)) = iter.peek() {
                    if c2 != c {
                        break;
                    }
                    v += v2;
                    iter.next();
                }
                if v != ZERO {
                    indices.push(c);
                    values.push(v);
                }
            }
            indptr.push(indices.len());
        }
        Ok(CsrMatrix { nrows, ncols, indptr, indices, values })
    }

    pub fn from_dense(m: &Mat<c64>) -> Self {
        let mut indptr = Vec::with_capacity(m.nrows() + 1);
        let mut indices = Vec::new();
        let mut values = Vec::new();
        indptr.push(0);
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                let v = m[(i, j)];
                if v != ZERO {
                    indices.push(j);
                    values.push(v);
                }
            }
            indptr.push(indices.len());
        }
        CsrMatrix { nrows: m.nrows(), ncols: m.ncols(), indptr, indices, values }
    }

    pub fn to_dense(&self) -> Mat<c64> {
        let mut m = Mat::<c64>::zeros(self.nrows, self.ncols);
        for (i, j, v) in self.iter() {
            m[(i, j)] = v;
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, c64)> + '_ {
        let range = self.indptr[i]..self.indptr[i + 1];
        self.indices[range.clone()].iter().copied().zip(self.values[range].iter().copied())
    }

    /// Iterates over stored entries in row-major order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, c64)> + '_ {
        (0..self.nrows).flat_map(move |i| self.row(i).map(move |(j, v)| (i, j, v)))
    }

    pub fn get(&self, i: usize, j: usize) -> c64 {
        let range = self.indptr[i]..self.indptr[i + 1];
        match self.indices[range.clone()].binary_search(&j) {
            Ok(pos) => self.values[range.start + pos],
            Err(_) => ZERO,
        }
    }

    pub fn map_values(&self, f: impl Fn(c64) -> c64) -> Self {
        let mut out = self.clone();
        out.values.iter_mut().for_each(|v| *v = f(*v));
        out.prune()
    }

    fn prune(self) -> Self {
        if self.values.iter().all(|v| *v != ZERO) {
            return self;
        }
        let entries: Vec<_> = self.iter().collect();
        CsrMatrix::from_triplets(self.nrows, self.ncols, &entries).expect("indices already in range")
    }

    pub fn scale(&self, s: c64) -> Self {
        self.map_values(|v| v * s)
    }

    pub fn conj(&self) -> Self {
        self.map_values(|v| v.conj())
    }

    pub fn transpose(&self) -> Self {
        let mut counts = vec![0usize; self.ncols + 1];
        for &j in &self.indices {
            counts[j + 1] += 1;
        }
        for j in 0..self.ncols {
            counts[j + 1] += counts[j];
        }
        let indptr = counts.clone();
        let mut next = counts;
        let mut indices = vec![0; self.nnz()];
        let mut values = vec![ZERO; self.nnz()];
        for (i, j, v) in self.iter() {
            let pos = next[j];
            indices[pos] = i;
            values[pos] = v;
            next[j] += 1;
        }
        CsrMatrix { nrows: self.ncols, ncols: self.nrows, indptr, indices, values }
    }

    pub fn adjoint(&self) -> Self {
        self.transpose().conj()
    }

    /// Returns `alpha * self + beta * other`.
    pub fn axpby(&self, alpha: c64, other: &CsrMatrix, beta: c64) -> Result<Self> {
        if self.nrows != other.nrows || self.ncols != other.ncols {
            return Err(MeqError::Shape(format!(
                "cannot add {}x{} and {}x{}",
                self.nrows, self.ncols, other.nrows, other.ncols
            )));
        }
        let mut indptr = Vec::with_capacity(self.nrows + 1);
        let mut indices = Vec::with_capacity(self.nnz() + other.nnz());
        let mut values = Vec::with_capacity(self.nnz() + other.nnz());
        indptr.push(0);
        for i in 0..self.nrows {
            let mut a = self.row(i).peekable();
            let mut b = other.row(i).peekable();
            loop {
                let (j, v) = match (a.peek(), b.peek()) {
                    (None, None) => break,
                    (Some(&(ja, va)), None) => {
                        a.next();
                        (ja, alpha * va)
                    }
                    (None, Some(&(jb, vb))) => {
                        b.next();
                        (jb, beta * vb)
                    }
                    (Some(&(ja, va)), Some(&(jb, vb))) => {
                        if ja < jb {
                            a.next();
                            (ja, alpha * va)
                        } else if jb < ja {
                            b.next();
                            (jb, beta * vb)
                        } else {
                            a.next();
                            b.next();
                            (ja, alpha * va + beta * vb)
                        }
                    }
                };
                if v != ZERO {
                    indices.push(j);
                    values.push(v);
                }
            }
            indptr.push(indices.len());
        }
        Ok(CsrMatrix { nrows: self.nrows, ncols: self.ncols, indptr, indices, values })
    }

    /// Sparse product (row-wise Gustavson accumulation).
    pub fn matmul(&self, other: &CsrMatrix) -> Result<Self> {
        if self.ncols != other.nrows {
            return Err(MeqError::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.nrows, self.ncols, other.nrows, other.ncols
            )));
        }
        let mut acc = vec![ZERO; other.ncols];
        let mut mark = vec![usize::MAX; other.ncols];
        let mut touched = Vec::new();
        let mut indptr = Vec::with_capacity(self.nrows + 1);
        let mut indices = Vec::new();
        let mut values = Vec::new();
        indptr.push(0);
        for i in 0..self.nrows {
            touched.clear();
            for (k, a) in self.row(i) {
                for (j, b) in other.row(k) {
                    if mark[j] != i {
                        mark[j] = i;
                        acc[j] = ZERO;
                        touched.push(j);
                    }
                    acc[j] += a * b;
                }
            }
            touched.sort_unstable();
            for &j in &touched {
                if acc[j] != ZERO {
                    indices.push(j);
                    values.push(acc[j]);
                }
            }
            indptr.push(indices.len());
        }
        Ok(CsrMatrix { nrows: self.nrows, ncols: other.ncols, indptr, indices, values })
    }

    /// Standard Kronecker product: block (i, j) of the result is `self[i, j] * other`.
    pub fn kron(&self, other: &CsrMatrix) -> Self {
        let nrows = self.nrows * other.nrows;
        let ncols = self.ncols * other.ncols;
        let mut indptr = Vec::with_capacity(nrows + 1);
        let mut indices = Vec::with_capacity(self.nnz() * other.nnz());
        let mut values = Vec::with_capacity(self.nnz() * other.nnz());
        indptr.push(0);
        for i in 0..self.nrows {
            for k in 0..other.nrows {
                for (j, a) in self.row(i) {
                    for (l, b) in other.row(k) {
                        let v = a * b;
                        if v != ZERO {
                            indices.push(j * other.ncols + l);
                            values.push(v);
                        }
                    }
                }
                indptr.push(indices.len());
            }
        }
        CsrMatrix { nrows, ncols, indptr, indices, values }
    }

    pub fn matvec(&self, x: &[c64], y: &mut [c64]) {
        assert_eq!(x.len(), self.ncols);
        assert_eq!(y.len(), self.nrows);
        for (i, yi) in y.iter_mut().enumerate() {
            *yi = self.row(i).map(|(j, v)| v * x[j]).sum();
        }
    }

    /// `x^T A` written into `y` (length `ncols`).
    pub fn vecmat(&self, x: &[c64], y: &mut [c64]) {
        assert_eq!(x.len(), self.nrows);
        y.iter_mut().for_each(|v| *v = ZERO);
        for (i, j, v) in self.iter() {
            y[j] += x[i] * v;
        }
    }

    pub fn trace(&self) -> c64 {
        (0..self.nrows.min(self.ncols)).map(|i| self.get(i, i)).sum()
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        (0..self.nrows).map(|i| self.row(i).map(|(_, v)| v.norm()).sum::<f64>()).fold(0.0, f64::max)
    }

    /// Maximum absolute column sum.
    pub fn norm_one(&self) -> f64 {
        let mut sums = vec![0.0; self.ncols];
        for (_, j, v) in self.iter() {
            sums[j] += v.norm();
        }
        sums.into_iter().fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Replaces row `r` with the given dense row (zeros dropped).
    pub fn with_row(&self, r: usize, row: &[c64]) -> Self {
        assert_eq!(row.len(), self.ncols);
        let mut entries: Vec<_> = self.iter().filter(|&(i, _, _)| i != r).collect();
        entries.extend(row.iter().enumerate().filter(|(_, v)| **v != ZERO).map(|(j, v)| (r, j, *v)));
        CsrMatrix::from_triplets(self.nrows, self.ncols, &entries).expect("indices already in range")
    }

    pub(crate) fn to_faer_csc(&self) -> Result<SparseColMat<usize, c64>> {
        let triplets: Vec<_> = self.iter().map(|(row, col, val)| Triplet { row, col, val }).collect();
        SparseColMat::try_new_from_triplets(self.nrows, self.ncols, &triplets)
            .map_err(|e| MeqError::Numerical(format!("sparse conversion failed: {e:?}")))
    }
}

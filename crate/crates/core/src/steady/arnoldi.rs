//! Implicitly restarted Arnoldi for a few eigenpairs of a linear map.
//!
//! The map is supplied as a closure, so the same routine serves plain
//! largest-real-part iteration on `L` and shift-invert iteration on
//! `(L - s I)^{-1}`. Locked vectors (an orthonormal set spanning an invariant
//! subspace of the map) are projected out of every Krylov vector, which
//! yields the remaining eigenvalues of the map.

use faer::{c64, Mat};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{MeqError, Result};
use crate::linalg::{dot, norm2, ZERO};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Which {
    LargestReal,
    LargestMagnitude,
}

#[derive(Clone, Debug)]
pub(crate) struct ArnoldiOptions {
    /// Relative Ritz-residual tolerance.
    pub tol: f64,
    /// Cap on applications of the map.
    pub max_matvecs: usize,
    /// Krylov subspace dimension.
    pub ncv: usize,
    pub seed: u64,
}

impl ArnoldiOptions {
    pub fn for_dimension(n: usize) -> Self {
        ArnoldiOptions { tol: 1e-12, max_matvecs: 10 * n.max(10), ncv: 40.min(n), seed: 0x6d65_715f }
    }
}

#[derive(Clone, Debug)]
pub(crate) struct EigenPairs {
    pub values: Vec<c64>,
    pub vectors: Vec<Vec<c64>>,
}

/// Total order used for ranking eigenvalues: larger real part first, real
/// parts within 1e-12 tie and are broken by larger imaginary part.
pub(crate) fn compare_largest_real(a: &c64, b: &c64) -> std::cmp::Ordering {
    if (a.re - b.re).abs() <= 1e-12 {
        b.im.partial_cmp(&a.im).unwrap_or(std::cmp::Ordering::Equal)
    } else {
        b.re.partial_cmp(&a.re).unwrap_or(std::cmp::Ordering::Equal)
    }
}

/// Indices of `values` ranked by `which`, stable on ties.
pub(crate) fn rank(values: &[c64], which: Which) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    match which {
        Which::LargestReal => idx.sort_by(|&i, &j| compare_largest_real(&values[i], &values[j])),
        Which::LargestMagnitude => {
            idx.sort_by(|&i, &j| values[j].norm().partial_cmp(&values[i].norm()).unwrap_or(std::cmp::Ordering::Equal))
        }
    }
    idx
}

/// Eigenvalues and unit eigenvectors of a small dense matrix.
pub(crate) fn dense_eigen(m: &Mat<c64>) -> Result<(Vec<c64>, Mat<c64>)> {
    let evd = m.eigen().map_err(|e| MeqError::Numerical(format!("dense eigensolver failed: {e:?}")))?;
    let n = m.nrows();
    let values: Vec<c64> = (0..n).map(|i| evd.S()[i]).collect();
    let mut vectors = evd.U().to_owned();
    for j in 0..n {
        let nrm = (0..n).map(|i| vectors[(i, j)].norm_sqr()).sum::<f64>().sqrt();
        if nrm > 0.0 {
            for i in 0..n {
                vectors[(i, j)] /= nrm;
            }
        }
    }
    Ok((values, vectors))
}

struct Factorization<'a, F: FnMut(&[c64], &mut [c64])> {
    op: F,
    n: usize,
    locked: &'a [Vec<c64>],
    v: Vec<Vec<c64>>,
    h: Mat<c64>,
    f: Vec<c64>,
    matvecs: usize,
    rng: ChaCha8Rng,
    /// Set when the reachable space is exhausted; Ritz pairs are then exact.
    invariant: bool,
}

impl<F: FnMut(&[c64], &mut [c64])> Factorization<'_, F> {
    fn project(&self, w: &mut [c64], basis: &[Vec<c64>]) -> Vec<c64> {
        let mut coeffs = vec![ZERO; basis.len()];
        for _ in 0..2 {
            for (c, q) in coeffs.iter_mut().zip(basis) {
                let a = dot(q, w);
                *c += a;
                w.iter_mut().zip(q).for_each(|(wi, qi)| *wi -= a * qi);
            }
        }
        coeffs
    }

    /// Random unit vector orthogonal to the locked vectors and current basis,
    /// or `None` if no such direction is left.
    fn random_orthogonal(&mut self) -> Option<Vec<c64>> {
        for _ in 0..3 {
            let mut w: Vec<c64> =
                (0..self.n).map(|_| c64::new(self.rng.random::<f64>() - 0.5, self.rng.random::<f64>() - 0.5)).collect();
            let before = norm2(&w);
            self.project(&mut w, self.locked);
            let basis = std::mem::take(&mut self.v);
            self.project(&mut w, &basis);
            self.v = basis;
            let after = norm2(&w);
            if after > 1e-8 * before {
                w.iter_mut().for_each(|x| *x /= after);
                return Some(w);
            }
        }
        None
    }

    /// Grows the factorization `A V_k = V_k H_k + f e_k^T` to `m` columns.
    fn extend(&mut self, m: usize) {
        let mut k = self.v.len();
        while k < m {
            let beta = norm2(&self.f);
            let scale = if k == 0 { 1.0 } else { (0..k).map(|i| self.h[(i, k - 1)].norm_sqr()).sum::<f64>().sqrt() };
            let next = if beta > 1e-13 * scale.max(f64::MIN_POSITIVE) {
                if k > 0 {
                    self.h[(k, k - 1)] = c64::new(beta, 0.0);
                }
                self.f.iter().map(|x| x / beta).collect()
            } else {
                if k > 0 {
                    self.h[(k, k - 1)] = ZERO;
                }
                match self.random_orthogonal() {
                    Some(r) => r,
                    None => {
                        self.invariant = true;
                        return;
                    }
                }
            };
            let mut w = vec![ZERO; self.n];
            (self.op)(&next, &mut w);
            self.matvecs += 1;
            self.v.push(next);
            self.project(&mut w, self.locked);
            let basis = std::mem::take(&mut self.v);
            let coeffs = self.project(&mut w, &basis);
            self.v = basis;
            for (i, c) in coeffs.into_iter().enumerate() {
                self.h[(i, k)] = c;
            }
            self.f = w;
            k += 1;
        }
    }

    /// Applies the given shifts to `H_m` by explicit QR steps and truncates
    /// the factorization to `k` columns.
    fn restart(&mut self, shifts: &[c64], k: usize) {
        let m = self.v.len();
        let mut q = Mat::<c64>::identity(m, m);
        for &mu in shifts {
            for i in 0..m {
                self.h[(i, i)] -= mu;
            }
            let mut rotations = Vec::with_capacity(m - 1);
            for j in 0..m - 1 {
                let (a, b) = (self.h[(j, j)], self.h[(j + 1, j)]);
                let (c, s) = givens(a, b);
                for col in j..m {
                    let (x, y) = (self.h[(j, col)], self.h[(j + 1, col)]);
                    self.h[(j, col)] = x * c + s * y;
                    self.h[(j + 1, col)] = -s.conj() * x + y * c;
                }
                rotations.push((c, s));
            }
            for (j, &(c, s)) in rotations.iter().enumerate() {
                for row in 0..(j + 2).min(m) {
                    let (x, y) = (self.h[(row, j)], self.h[(row, j + 1)]);
                    self.h[(row, j)] = x * c + s.conj() * y;
                    self.h[(row, j + 1)] = -s * x + y * c;
                }
                for row in 0..m {
                    let (x, y) = (q[(row, j)], q[(row, j + 1)]);
                    q[(row, j)] = x * c + s.conj() * y;
                    q[(row, j + 1)] = -s * x + y * c;
                }
            }
            for i in 0..m {
                self.h[(i, i)] += mu;
            }
        }
        let combine = |v: &[Vec<c64>], col: usize| -> Vec<c64> {
            let mut out = vec![ZERO; v[0].len()];
            for (l, vl) in v.iter().enumerate() {
                let coef = q[(l, col)];
                if coef != ZERO {
                    out.iter_mut().zip(vl).for_each(|(o, x)| *o += coef * x);
                }
            }
            out
        };
        let vk = combine(&self.v, k);
        let new_v: Vec<Vec<c64>> = (0..k).map(|col| combine(&self.v, col)).collect();
        let hk = self.h[(k, k - 1)];
        let tail = q[(m - 1, k - 1)];
        self.f = vk.iter().zip(&self.f).map(|(a, b)| a * hk + b * tail).collect();
        self.v = new_v;
        for j in 0..m {
            for i in 0..m {
                if i >= k || j >= k {
                    self.h[(i, j)] = ZERO;
                }
            }
        }
    }
}

/// `(c, s)` with `c` real such that `[[c, s], [-conj(s), c]] [a; b] = [r; 0]`.
fn givens(a: c64, b: c64) -> (c64, c64) {
    let (na, nb) = (a.norm(), b.norm());
    if nb == 0.0 {
        return (c64::new(1.0, 0.0), ZERO);
    }
    if na == 0.0 {
        return (ZERO, b.conj() / nb);
    }
    let r = na.hypot(nb);
    (c64::new(na / r, 0.0), (a / na) * b.conj() / r)
}

/// `nev` eigenpairs of the map `op` on `C^n` ranked by `which`, excluding the
/// invariant subspace spanned by `locked`.
pub(crate) fn iram(
    op: impl FnMut(&[c64], &mut [c64]),
    n: usize,
    nev: usize,
    which: Which,
    opts: &ArnoldiOptions,
    locked: &[Vec<c64>],
) -> Result<EigenPairs> {
    let available = n.saturating_sub(locked.len());
    if nev == 0 || nev > available {
        return Err(MeqError::Argument(format!("cannot compute {nev} eigenpairs in a space of dimension {available}")));
    }
    let m = opts.ncv.max(2 * nev + 1).min(available);
    let mut fact = Factorization {
        op,
        n,
        locked,
        v: Vec::with_capacity(m + 1),
        h: Mat::zeros(m, m),
        f: vec![ZERO; n],
        matvecs: 0,
        rng: ChaCha8Rng::seed_from_u64(opts.seed),
        invariant: false,
    };
    loop {
        fact.extend(m);
        let size = fact.v.len();
        let hm = Mat::<c64>::from_fn(size, size, |i, j| fact.h[(i, j)]);
        let (theta, y) = dense_eigen(&hm)?;
        let order = rank(&theta, which);
        let fnorm = if fact.invariant { 0.0 } else { norm2(&fact.f) };
        let scale = theta.iter().map(|t| t.norm()).fold(0.0, f64::max);
        let residual = |i: usize| fnorm * y[(size - 1, i)].norm();
        let wanted = nev.min(size);
        let converged = |i: usize| residual(i) <= opts.tol * theta[i].norm().max(scale).max(f64::MIN_POSITIVE);
        let nconv = order[..wanted].iter().filter(|&&i| converged(i)).count();
        let last_residual = order[..wanted].iter().map(|&i| residual(i)).fold(0.0, f64::max);
        if nconv == wanted || fact.invariant || size < m || m == available {
            let values = order[..wanted].iter().map(|&i| theta[i]).collect();
            let vectors = order[..wanted]
                .iter()
                .map(|&i| {
                    let mut x = vec![ZERO; n];
                    for (l, vl) in fact.v.iter().enumerate() {
                        let c = y[(l, i)];
                        x.iter_mut().zip(vl).for_each(|(o, v)| *o += c * v);
                    }
                    let nrm = norm2(&x);
                    x.iter_mut().for_each(|v| *v /= nrm);
                    x
                })
                .collect();
            return Ok(EigenPairs { values, vectors });
        }
        if fact.matvecs >= opts.max_matvecs {
            return Err(MeqError::Convergence { iterations: fact.matvecs, residual: last_residual });
        }
        let k = (nev + nconv.min((m - nev) / 2)).min(m - 1);
        let shifts: Vec<c64> = order[k..].iter().map(|&i| theta[i]).collect();
        fact.restart(&shifts, k);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag_op(d: Vec<c64>) -> impl FnMut(&[c64], &mut [c64]) {
        move |x, y| {
            for i in 0..x.len() {
                y[i] = d[i] * x[i];
            }
        }
    }

    #[test]
    fn givens_zeroes_second_component() {
        let (a, b) = (c64::new(1.0, 2.0), c64::new(-0.5, 3.0));
        let (c, s) = givens(a, b);
        let lower = -s.conj() * a + c * b;
        assert!(lower.norm() < 1e-15);
        assert!((c.norm_sqr() + s.norm_sqr() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn largest_real_on_diagonal() {
        let n = 200;
        let d: Vec<c64> = (0..n).map(|i| c64::new(-(i as f64) * 0.5, (i % 7) as f64)).collect();
        let opts = ArnoldiOptions { ncv: 20, ..ArnoldiOptions::for_dimension(n) };
        let res = iram(diag_op(d), n, 3, Which::LargestReal, &opts, &[]).unwrap();
        let re: Vec<f64> = res.values.iter().map(|v| v.re).collect();
        assert!((re[0] - 0.0).abs() < 1e-10 && (re[1] + 0.5).abs() < 1e-10 && (re[2] + 1.0).abs() < 1e-10, "{re:?}");
    }

    #[test]
    fn locked_vectors_are_excluded() {
        let n = 30;
        let d: Vec<c64> = (0..n).map(|i| c64::new(1.0 / (i as f64 + 1.0), 0.0)).collect();
        let opts = ArnoldiOptions::for_dimension(n);
        let mut e0 = vec![ZERO; n];
        e0[0] = c64::new(1.0, 0.0);
        let res = iram(diag_op(d), n, 1, Which::LargestMagnitude, &opts, &[e0]).unwrap();
        assert!((res.values[0].re - 0.5).abs() < 1e-12);
    }

    #[test]
    fn small_space_is_exact() {
        let d = vec![c64::new(-1.0, 0.0), c64::new(0.0, 0.0), c64::new(-2.0, 1.0)];
        let res = iram(diag_op(d), 3, 2, Which::LargestReal, &ArnoldiOptions::for_dimension(3), &[]).unwrap();
        assert!(res.values[0].norm() < 1e-14);
        assert!((res.values[1] + 1.0).norm() < 1e-14);
    }
}

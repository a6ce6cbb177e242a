#![allow(dead_code)]

use meq::c64;
use meq::hilbert::Operator;
use meq::linalg::Matrix;
use meq::{LindbladModel, SpaceLayout};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Dense = Vec<Vec<c64>>;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn cx(re: f64, im: f64) -> c64 {
    c64::new(re, im)
}

pub fn zeros(n: usize) -> Dense {
    vec![vec![cx(0.0, 0.0); n]; n]
}

pub fn eye(n: usize) -> Dense {
    let mut m = zeros(n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = cx(1.0, 0.0);
    }
    m
}

pub fn random_dense(rng: &mut ChaCha8Rng, n: usize) -> Dense {
    (0..n).map(|_| (0..n).map(|_| cx(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect()).collect()
}

pub fn mul(a: &Dense, b: &Dense) -> Dense {
    let n = a.len();
    let mut c = zeros(n);
    for i in 0..n {
        for k in 0..n {
            for j in 0..n {
                c[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    c
}

pub fn adjoint(a: &Dense) -> Dense {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| a[j][i].conj()).collect()).collect()
}

pub fn add(a: &Dense, b: &Dense) -> Dense {
    a.iter().zip(b).map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| x + y).collect()).collect()
}

pub fn scale(a: &Dense, s: c64) -> Dense {
    a.iter().map(|r| r.iter().map(|x| x * s).collect()).collect()
}

pub fn trace(a: &Dense) -> c64 {
    (0..a.len()).map(|i| a[i][i]).sum()
}

pub fn hermitian(rng: &mut ChaCha8Rng, n: usize) -> Dense {
    let x = random_dense(rng, n);
    scale(&add(&x, &adjoint(&x)), cx(0.5, 0.0))
}

/// `A A^H / tr(A A^H)`.
pub fn density(rng: &mut ChaCha8Rng, n: usize) -> Dense {
    let a = random_dense(rng, n);
    let p = mul(&a, &adjoint(&a));
    let t = trace(&p);
    scale(&p, cx(1.0, 0.0) / t)
}

pub fn to_op(layout: &SpaceLayout, m: &Dense) -> Operator {
    Operator::new(layout.clone(), Matrix::from_rows(m).unwrap()).unwrap()
}

pub fn to_dense(op: &Operator) -> Dense {
    let n = op.dim();
    (0..n).map(|i| (0..n).map(|j| op.get(i, j)).collect()).collect()
}

pub fn max_diff(a: &Dense, b: &Dense) -> f64 {
    a.iter().zip(b).flat_map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| (x - y).norm())).fold(0.0, f64::max)
}

/// Random Hamiltonian and 1..=3 dense jump operators on a single space of dimension `d`.
pub fn random_model(seed: u64, d: usize) -> LindbladModel {
    let mut r = rng(seed);
    let layout = SpaceLayout::single("s", d).unwrap();
    let h = to_op(&layout, &hermitian(&mut r, d));
    let count = r.random_range(1..=3);
    let jumps = (0..count)
        .map(|_| {
            let rate = r.random_range(0.1..2.0);
            (rate, to_op(&layout, &random_dense(&mut r, d)))
        })
        .collect();
    LindbladModel::new(h, jumps).unwrap()
}

/// Random model on a two-subsystem layout whose dimensions multiply to `d`.
pub fn random_composite_model(seed: u64, dims: [usize; 2]) -> LindbladModel {
    let mut r = rng(seed);
    let layout = SpaceLayout::new([("x", dims[0]), ("y", dims[1])]).unwrap();
    let d = layout.total_dim();
    let h = to_op(&layout, &hermitian(&mut r, d));
    let jumps = (0..2).map(|_| (r.random_range(0.1..2.0), to_op(&layout, &random_dense(&mut r, d)))).collect();
    LindbladModel::new(h, jumps).unwrap()
}

/// Driven two-level atom: `H = W (s+ + s-)`, decay `|g><e|` at rate `G`, ground = level 1.
pub fn driven_qubit(omega: f64, gamma: f64) -> LindbladModel {
    let layout = SpaceLayout::single("q", 2).unwrap();
    let h = to_op(&layout, &vec![vec![cx(0.0, 0.0), cx(omega, 0.0)], vec![cx(omega, 0.0), cx(0.0, 0.0)]]);
    let lower = to_op(&layout, &vec![vec![cx(0.0, 0.0), cx(1.0, 0.0)], vec![cx(0.0, 0.0), cx(0.0, 0.0)]]);
    LindbladModel::new(h, vec![(gamma, lower)]).unwrap()
}

pub fn qubit_decay(gamma: f64) -> LindbladModel {
    driven_qubit(0.0, gamma)
}

/// Liouvillian of a model by the elementwise Lindblad formula, 0-based
/// super-indices `n + m d` (rows) and `k + l d` (columns).
pub fn oracle_liouvillian(model: &LindbladModel) -> Dense {
    let d = model.dim();
    let h = to_dense(model.hamiltonian());
    let jumps: Vec<(f64, Dense)> = model.dissipators().iter().map(|(g, j)| (*g, to_dense(j))).collect();
    let mut out = zeros(d * d);
    let i = cx(0.0, 1.0);
    for n in 0..d {
        for m in 0..d {
            for k in 0..d {
                for l in 0..d {
                    let mut v = cx(0.0, 0.0);
                    if m == l {
                        v += -i * h[n][k];
                    }
                    if k == n {
                        v += i * h[l][m];
                    }
                    for (g, j) in &jumps {
                        let jdj = |a: usize, b: usize| (0..d).map(|p| j[p][a].conj() * j[p][b]).sum::<c64>();
                        let mut t = j[n][k] * j[m][l].conj() * 2.0;
                        if m == l {
                            t -= jdj(n, k);
                        }
                        if k == n {
                            t -= jdj(l, m);
                        }
                        v += t * *g;
                    }
                    out[n + m * d][k + l * d] = v;
                }
            }
        }
    }
    out
}

/// Null vector of a small square matrix by Gaussian elimination with full
/// pivoting; the last pivot column is set free.
pub fn null_vector(a: &Dense) -> Vec<c64> {
    let n = a.len();
    let mut m = a.clone();
    let mut cols: Vec<usize> = (0..n).collect();
    for p in 0..n - 1 {
        let (mut bi, mut bj, mut best) = (p, p, -1.0);
        for i in p..n {
            for j in p..n {
                if m[i][j].norm() > best {
                    best = m[i][j].norm();
                    bi = i;
                    bj = j;
                }
            }
        }
        m.swap(p, bi);
        for row in m.iter_mut() {
            row.swap(p, bj);
        }
        cols.swap(p, bj);
        for i in p + 1..n {
            let f = m[i][p] / m[p][p];
            for j in p..n {
                let s = m[p][j];
                m[i][j] -= f * s;
            }
        }
    }
    let mut x = vec![cx(0.0, 0.0); n];
    x[n - 1] = cx(1.0, 0.0);
    for p in (0..n - 1).rev() {
        let s: c64 = (p + 1..n).map(|j| m[p][j] * x[j]).sum();
        x[p] = -s / m[p][p];
    }
    let mut out = vec![cx(0.0, 0.0); n];
    for (p, &c) in cols.iter().enumerate() {
        out[c] = x[p];
    }
    out
}

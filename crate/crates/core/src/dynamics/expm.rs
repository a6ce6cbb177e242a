//! Dense matrix exponential: degree-13 Padé approximant with scaling and
//! squaring (Higham 2005).

use faer::{c64, Mat};

use crate::error::{MeqError, Result};
use crate::linalg::{LinearSolver, Matrix};

const THETA_13: f64 = 5.371920351148152;

const PADE_13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

fn norm_one(a: &Mat<c64>) -> f64 {
    (0..a.ncols()).map(|j| (0..a.nrows()).map(|i| a[(i, j)].norm()).sum::<f64>()).fold(0.0, f64::max)
}

fn lincomb(terms: &[(f64, &Mat<c64>)], n: usize) -> Mat<c64> {
    Mat::from_fn(n, n, |i, j| terms.iter().map(|(c, m)| m[(i, j)] * *c).sum())
}

/// `exp(a)` for a square dense matrix.
pub fn expm(a: &Mat<c64>) -> Result<Mat<c64>> {
    let n = a.nrows();
    if a.ncols() != n {
        return Err(MeqError::Shape(format!("expm needs a square matrix, got {}x{}", n, a.ncols())));
    }
    if n == 0 {
        return Ok(Mat::zeros(0, 0));
    }
    let norm = norm_one(a);
    if !norm.is_finite() {
        return Err(MeqError::Numerical("expm argument is not finite".into()));
    }
    let s = if norm > THETA_13 { (norm / THETA_13).log2().ceil() as i32 } else { 0 };
    let scale = 0.5f64.powi(s);
    let a = Mat::from_fn(n, n, |i, j| a[(i, j)] * scale);
    let id = Mat::<c64>::identity(n, n);
    let a2 = &a * &a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;
    let b = &PADE_13;

    let inner_u = lincomb(&[(b[13], &a6), (b[11], &a4), (b[9], &a2)], n);
    let outer_u = &a6 * &inner_u + lincomb(&[(b[7], &a6), (b[5], &a4), (b[3], &a2), (b[1], &id)], n);
    let u = &a * &outer_u;
    let inner_v = lincomb(&[(b[12], &a6), (b[10], &a4), (b[8], &a2)], n);
    let v = &a6 * &inner_v + lincomb(&[(b[6], &a6), (b[4], &a4), (b[2], &a2), (b[0], &id)], n);

    let p = &v - &u;
    let q = &v + &u;
    let solver = LinearSolver::factor(&Matrix::Dense(p))?;
    let mut x = Mat::<c64>::zeros(n, n);
    for j in 0..n {
        let mut col: Vec<c64> = (0..n).map(|i| q[(i, j)]).collect();
        solver.solve_in_place(&mut col);
        for (i, v) in col.into_iter().enumerate() {
            x[(i, j)] = v;
        }
    }
    for _ in 0..s {
        x = &x * &x;
    }
    if (0..n).any(|j| (0..n).any(|i| !x[(i, j)].re.is_finite() || !x[(i, j)].im.is_finite())) {
        return Err(MeqError::Numerical("matrix exponential overflowed".into()));
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_and_rotation() {
        let a =
            Mat::<c64>::from_fn(2, 2, |i, j| if i == j { c64::new([1.0, -30.0][i], 0.0) } else { c64::new(0.0, 0.0) });
        let e = expm(&a).unwrap();
        assert!((e[(0, 0)].re - 1f64.exp()).abs() < 1e-14);
        assert!((e[(1, 1)].re - (-30f64).exp()).abs() < 1e-26);
        // exp of [[0, t], [-t, 0]] is a rotation by t.
        let t = 40.0;
        let r = Mat::<c64>::from_fn(2, 2, |i, j| match (i, j) {
            (0, 1) => c64::new(t, 0.0),
            (1, 0) => c64::new(-t, 0.0),
            _ => c64::new(0.0, 0.0),
        });
        let e = expm(&r).unwrap();
        assert!((e[(0, 0)].re - t.cos()).abs() < 1e-12);
        assert!((e[(0, 1)].re - t.sin()).abs() < 1e-12);
    }

    #[test]
    fn nilpotent_is_exact() {
        let a = Mat::<c64>::from_fn(3, 3, |i, j| if j == i + 1 { c64::new(2.0, 0.0) } else { c64::new(0.0, 0.0) });
        let e = expm(&a).unwrap();
        assert!((e[(0, 2)].re - 2.0).abs() < 1e-14);
        assert!((e[(0, 1)].re - 2.0).abs() < 1e-14);
    }
}

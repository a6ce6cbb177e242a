//! Action of `exp(t A)` on a vector by restarted Arnoldi projection with
//! adaptive sub-steps, after Sidje's Expokit `expv`.

use faer::{c64, Mat};

use super::expm::expm;
use crate::error::{MeqError, Result};
use crate::linalg::{dot, norm2, ZERO};

#[derive(Clone, Debug)]
pub struct KrylovOptions {
    /// Krylov subspace dimension.
    pub m: usize,
    /// Local error tolerance per unit time.
    pub tol: f64,
    /// Happy-breakdown threshold.
    pub btol: f64,
    /// Step-size safety factor.
    pub gamma: f64,
    /// Local error slack.
    pub delta: f64,
    /// Step rejections allowed in a row.
    pub max_rejections: usize,
}

impl Default for KrylovOptions {
    fn default() -> Self {
        KrylovOptions { m: 30, tol: 1e-10, btol: 1e-7, gamma: 0.9, delta: 1.2, max_rejections: 10 }
    }
}

fn round_step(t: f64) -> f64 {
    let s = 10f64.powf(t.log10().floor() - 1.0);
    (t / s).ceil() * s
}

/// `exp(t A) v` with `A` given as a matvec and `anorm` an estimate of `||A||`.
pub fn expv(
    t: f64,
    mut matvec: impl FnMut(&[c64], &mut [c64]),
    anorm: f64,
    v: &[c64],
    opts: &KrylovOptions,
) -> Result<Vec<c64>> {
    let n = v.len();
    let mut w = v.to_vec();
    let mut beta = norm2(&w);
    if t == 0.0 || beta == 0.0 || n == 0 {
        return Ok(w);
    }
    if !(t.is_finite() && t > 0.0) {
        return Err(MeqError::Argument(format!("propagation time must be finite and nonnegative, got {t}")));
    }
    let anorm = anorm.max(f64::MIN_POSITIVE);
    let m = opts.m.min(n).max(1);
    let mut xm = 1.0 / m as f64;
    let fact = ((m as f64 + 1.0) / std::f64::consts::E).powf(m as f64 + 1.0)
        * (2.0 * std::f64::consts::PI * (m as f64 + 1.0)).sqrt();
    let mut t_new = (1.0 / anorm) * ((fact * opts.tol) / (4.0 * beta * anorm)).powf(xm);
    t_new = round_step(t_new);
    let mut t_now = 0.0;

    while t_now < t {
        let mut t_step = (t - t_now).min(t_new);
        let mut basis: Vec<Vec<c64>> = Vec::with_capacity(m + 1);
        basis.push(w.iter().map(|x| x / beta).collect());
        let mut h = Mat::<c64>::zeros(m + 2, m + 2);
        let mut mb = m;
        let mut k1 = 2usize;
        let mut avnorm = 0.0;
        let mut p = vec![ZERO; n];
        for j in 0..m {
            matvec(&basis[j], &mut p);
            for (i, q) in basis.iter().enumerate() {
                let c = dot(q, &p);
                h[(i, j)] = c;
                p.iter_mut().zip(q).for_each(|(pi, qi)| *pi -= c * qi);
            }
            let s = norm2(&p);
            if s < opts.btol {
                k1 = 0;
                mb = j + 1;
                t_step = t - t_now;
                break;
            }
            h[(j + 1, j)] = c64::new(s, 0.0);
            basis.push(p.iter().map(|x| x / s).collect());
        }
        if k1 != 0 {
            h[(m + 1, m)] = c64::new(1.0, 0.0);
            matvec(&basis[m], &mut p);
            avnorm = norm2(&p);
        }

        let mut rejections = 0;
        let (f, err_loc) = loop {
            let mx = mb + k1;
            let hs = Mat::from_fn(mx, mx, |i, j| h[(i, j)] * t_step);
            let f = expm(&hs)?;
            if k1 == 0 {
                break (f, opts.btol);
            }
            let phi1 = (f[(m, 0)] * beta).norm();
            let phi2 = (f[(m + 1, 0)] * beta).norm() * avnorm;
            let err = if phi1 > 10.0 * phi2 {
                xm = 1.0 / m as f64;
                phi2
            } else if phi1 > phi2 {
                xm = 1.0 / m as f64;
                phi1 * phi2 / (phi1 - phi2)
            } else {
                xm = 1.0 / (m as f64 - 1.0).max(1.0);
                phi1
            };
            if err <= opts.delta * t_step * opts.tol {
                break (f, err);
            }
            rejections += 1;
            if rejections > opts.max_rejections {
                return Err(MeqError::Numerical(format!(
                    "Krylov propagation rejected {rejections} steps in a row at t = {t_now:e}"
                )));
            }
            t_step = round_step(opts.gamma * t_step * (t_step * opts.tol / err).powf(xm));
            if !(t_step > 0.0 && t_step.is_finite() && t_now + t_step > t_now) {
                return Err(MeqError::Numerical(format!("Krylov step size underflow at t = {t_now:e}")));
            }
        };

        let mx = mb + k1.saturating_sub(1);
        let mut next = vec![ZERO; n];
        for (j, q) in basis.iter().enumerate().take(mx) {
            let c = f[(j, 0)] * beta;
            next.iter_mut().zip(q).for_each(|(o, x)| *o += c * x);
        }
        w = next;
        beta = norm2(&w);
        if !beta.is_finite() {
            return Err(MeqError::Numerical("Krylov propagation produced non-finite values".into()));
        }
        t_now += t_step;
        if beta == 0.0 {
            break;
        }
        t_new = opts.gamma * t_step * (t_step * opts.tol / err_loc.max(f64::MIN_POSITIVE)).powf(xm);
        t_new = round_step(t_new);
        if !(t_new > 0.0 && t_new.is_finite()) {
            return Err(MeqError::Numerical(format!("Krylov step size underflow at t = {t_now:e}")));
        }
    }
    Ok(w)
}

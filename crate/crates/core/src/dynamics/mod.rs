//! Propagation `vec(rho(t)) = exp(L t) vec(rho(0))` for a fixed Liouvillian.

mod expm;
mod krylov;

use faer::c64;

pub use expm::expm;
pub use krylov::{expv, KrylovOptions};

use crate::error::{MeqError, Result};
use crate::hilbert::Operator;
use crate::linalg::{Matrix, Storage};
use crate::superspace::{devectorize, vectorize, SuperOperator, VectorizedOperator};

/// Dense-storage Liouvillians up to this superspace dimension use the dense
/// exponential under [`Propagator::Auto`].
pub const DENSE_PROPAGATOR_LIMIT: usize = 1024;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Propagator {
    /// Dense exponential for small dense Liouvillians, Krylov otherwise.
    #[default]
    Auto,
    /// Form `exp(L t)` and multiply.
    Dense,
    /// Krylov approximation of the action on the state.
    Krylov,
}

impl Propagator {
    fn resolve(self, l: &SuperOperator) -> Propagator {
        match self {
            Propagator::Auto if l.storage() == Storage::Dense && l.super_dim() <= DENSE_PROPAGATOR_LIMIT => {
                Propagator::Dense
            }
            Propagator::Auto => Propagator::Krylov,
            other => other,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<Operator>,
}

fn check_state(l: &SuperOperator, rho0: &Operator) -> Result<()> {
    if l.layout() != rho0.layout() {
        return Err(MeqError::LayoutMismatch(format!("{} vs {}", l.layout(), rho0.layout())));
    }
    Ok(())
}

fn step(l: &SuperOperator, v: &[c64], dt: f64, kind: Propagator) -> Result<Vec<c64>> {
    if dt == 0.0 {
        return Ok(v.to_vec());
    }
    match kind {
        Propagator::Dense => {
            let lt = l.matrix().to_dense();
            let scaled = faer::Mat::from_fn(lt.nrows(), lt.ncols(), |i, j| lt[(i, j)] * dt);
            Ok(Matrix::Dense(expm(&scaled)?).apply(v))
        }
        _ => {
            let m = l.matrix();
            expv(dt, |x, y| m.matvec(x, y), m.norm_inf(), v, &KrylovOptions::default())
        }
    }
}

fn to_operator(l: &SuperOperator, v: Vec<c64>) -> Result<Operator> {
    let rho = devectorize(&VectorizedOperator::new(l.layout().clone(), v)?)?;
    Ok(rho.with_storage(l.layout().default_storage()))
}

/// `rho(t)` with an explicit choice of propagator.
pub fn evolve_with(l: &SuperOperator, rho0: &Operator, t: f64, kind: Propagator) -> Result<Operator> {
    check_state(l, rho0)?;
    if !(t.is_finite() && t >= 0.0) {
        return Err(MeqError::Argument(format!("time must be finite and nonnegative, got {t}")));
    }
    if t == 0.0 {
        return Ok(rho0.clone());
    }
    let v = step(l, vectorize(rho0).components(), t, kind.resolve(l))?;
    to_operator(l, v)
}

/// `rho(t) = exp(L t) rho0`.
pub fn evolve(l: &SuperOperator, rho0: &Operator, t: f64) -> Result<Operator> {
    evolve_with(l, rho0, t, Propagator::Auto)
}

/// States at each of the ascending `times`, propagated incrementally from one
/// time to the next.
pub fn evolve_trajectory_with(
    l: &SuperOperator,
    rho0: &Operator,
    times: &[f64],
    kind: Propagator,
) -> Result<Trajectory> {
    check_state(l, rho0)?;
    for (i, &t) in times.iter().enumerate() {
        if !(t.is_finite() && t >= 0.0) {
            return Err(MeqError::Argument(format!("time must be finite and nonnegative, got {t}")));
        }
        if i > 0 && t < times[i - 1] {
            return Err(MeqError::Argument(format!("times must be ascending: {} follows {}", t, times[i - 1])));
        }
    }
    let kind = kind.resolve(l);
    let mut states = Vec::with_capacity(times.len());
    let mut v = vectorize(rho0).into_components();
    let mut t_prev = 0.0;
    for &t in times {
        v = step(l, &v, t - t_prev, kind)?;
        t_prev = t;
        states.push(if t == 0.0 { rho0.clone() } else { to_operator(l, v.clone())? });
    }
    Ok(Trajectory { times: times.to_vec(), states })
}

pub fn evolve_trajectory(l: &SuperOperator, rho0: &Operator, times: &[f64]) -> Result<Trajectory> {
    evolve_trajectory_with(l, rho0, times, Propagator::Auto)
}

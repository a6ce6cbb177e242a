//! Relaxation of a driven atom coupled to a lossy cavity, propagated with
//! the dense exponential and with Krylov steps.

use meq::c64;
use meq::dynamics::{evolve_trajectory_with, Propagator};
use meq::hilbert::{annihilation, basis_state, embed, transition, MultiIndex, SpaceLayout};
use meq::measures::expectation;
use meq::steady::steady_linsolve;
use meq::superspace::{build_liouvillian, LindbladModel};

fn main() -> meq::Result<()> {
    let layout = SpaceLayout::new([("q", 2), ("c", 6)])?;
    let sm = embed(&layout, "q", &transition(2, 1, 2)?)?;
    let a = embed(&layout, "c", &annihilation(6)?)?;
    let coupling = a.adjoint().matmul(&sm)?.add(&a.matmul(&sm.adjoint())?)?;
    let drive = sm.add(&sm.adjoint())?.scale(c64::new(0.8, 0.0));
    let model = LindbladModel::new(coupling.add(&drive)?, vec![(0.5, a.clone()), (0.1, sm.clone())])?;
    let l = build_liouvillian(&model)?;

    let ground = basis_state(&layout, &MultiIndex::new(vec![1, 1]))?.projector();
    let times: Vec<f64> = (0..=10).map(|k| k as f64 * 2.0).collect();
    let dense = evolve_trajectory_with(&l, &ground, &times, Propagator::Dense)?;
    let krylov = evolve_trajectory_with(&l, &ground, &times, Propagator::Krylov)?;
    let number = a.adjoint().matmul(&a)?;
    println!("{:>6} {:>12} {:>12} {:>10}", "t", "<a'a>", "<s22>", "|dense-kr|");
    for ((t, x), y) in times.iter().zip(&dense.states).zip(&krylov.states) {
        let n = expectation(&number, x)?.re;
        let e = expectation(&sm.adjoint().matmul(&sm)?, x)?.re;
        println!("{t:>6.1} {n:>12.6} {e:>12.6} {:>10.1e}", x.max_abs_diff(y)?);
    }
    let steady = steady_linsolve(&l, 1, 1.0)?.rho;
    println!("steady <a'a> = {:.6}", expectation(&number, &steady)?.re);
    Ok(())
}

//! Steady state of a driven, damped two-level atom by all three methods,
//! checked against the Bloch-equation solution.

use meq::c64;
use meq::hilbert::{transition, Operator, SpaceLayout};
use meq::steady::{steady_dense, steady_linsolve, steady_sparse};
use meq::superspace::{build_liouvillian, LindbladModel};

fn main() -> meq::Result<()> {
    let (omega, gamma) = (2.0, 1.0);
    let layout = SpaceLayout::single("q", 2)?;
    let lower = Operator::new(layout.clone(), transition(2, 1, 2)?)?;
    let h = lower.add(&lower.adjoint())?.scale(c64::new(omega, 0.0));
    let l = build_liouvillian(&LindbladModel::new(h, vec![(gamma, lower)])?)?;

    let expected = omega * omega / (gamma * gamma + 2.0 * omega * omega);
    println!("Bloch equations: rho_ee = {expected:.12}");
    for r in [steady_dense(&l)?, steady_sparse(&l)?, steady_linsolve(&l, 1, 1.0)?] {
        println!("{:>9?}: rho_ee = {:.12}  residual {:.1e}", r.method, r.rho.get(1, 1).re, r.residual);
    }
    Ok(())
}

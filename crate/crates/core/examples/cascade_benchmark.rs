//! The cascade benchmark: a three-level atom driving two cavity modes in the
//! displaced picture. Prints populations, cavity photon numbers, the top of
//! the Liouvillian spectrum and the logarithmic negativities.

use std::time::Instant;

use meq::hilbert::partial_trace;
use meq::measures::{displaced_mode_population, log_negativity, PopulationReport};
use meq::modelspec::{cascade_model, CascadeOperators, CascadeParams};
use meq::steady::{check_uniqueness, steady_sparse, DEFAULT_GAP_TOL};
use meq::superspace::build_liouvillian;

fn main() -> meq::Result<()> {
    let params = CascadeParams::default();
    let l = build_liouvillian(&cascade_model(&params)?)?;
    println!("d = {}, superspace {}", params.dim(), l.super_dim());

    let start = Instant::now();
    let steady = steady_sparse(&l)?;
    println!("shift-invert Arnoldi: {:.2}s, residual {:.1e}", start.elapsed().as_secs_f64(), steady.residual);
    let rho = &steady.rho;

    let ops = CascadeOperators::new(&params)?;
    let report = PopulationReport::new(rho, &ops.population_observables()?)?;
    for (label, value) in report.labels.iter().zip(&report.values) {
        println!("  <{label}> = {value:.6}");
    }
    println!("  max imaginary residual {:.1e}", report.max_imaginary_residual());
    println!("Popa = {:.4}", displaced_mode_population(rho, &ops.a, params.alpha()?)?);
    println!("Popb = {:.4}", displaced_mode_population(rho, &ops.b, params.beta()?)?);

    let gap = check_uniqueness(&l, DEFAULT_GAP_TOL)?;
    println!("spectral gap: lambda1 = {:?}", gap.lambda1);

    println!("xi|ab LN = {:.5e}", log_negativity(rho, &["xi"])?);
    println!("a|b   LN = {:.5e}", log_negativity(&partial_trace(rho, &["xi"])?, &["a"])?);
    println!("xi|a  LN = {:.5e}", log_negativity(&partial_trace(rho, &["b"])?, &["xi"])?);
    println!("xi|b  LN = {:.5e}", log_negativity(&partial_trace(rho, &["a"])?, &["xi"])?);
    Ok(())
}

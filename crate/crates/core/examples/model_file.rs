//! Parses a model file, evaluates observables in its namespace, and shows a
//! positioned diagnostic for a broken expression.
//!
//! `cargo run --example model_file -- models/jaynes_cummings.model`

use meq::modelspec::{build_model_with_context, parse_expr, parse_model};
use meq::steady::steady_linsolve;
use meq::superspace::build_liouvillian;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/models/jaynes_cummings.model").into());
    let doc = parse_model(&std::fs::read_to_string(&path)?)?;
    println!("{doc}");

    let (model, ctx) = build_model_with_context(&doc)?;
    let rho = steady_linsolve(&build_liouvillian(&model)?, 1, 1.0)?.rho;
    for expr in ["ident(q)", "proj(q,2)", "a'*a"] {
        match ctx.evaluate_str(expr) {
            Ok(op) => println!("<{expr}> = {:.6}", meq::measures::expectation(&op, &rho)?.re),
            Err(e) => println!("<{expr}>: {e}"),
        }
    }

    if let Err(e) = parse_expr("ga*(a'*s12 + a*s12'") {
        println!("{e}");
    }
    Ok(())
}

//! Column-stacking vectorization and the superoperators built from it.

use meq::c64;
use meq::hilbert::{transition, Operator, SpaceLayout};
use meq::superspace::{build_liouvillian, devectorize, super_sandwich, vectorize, LindbladModel};

fn main() -> meq::Result<()> {
    let layout = SpaceLayout::single("q", 2)?;
    let x = Operator::new(
        layout.clone(),
        meq::linalg::Matrix::from_rows(&[
            vec![c64::new(1.0, 0.0), c64::new(2.0, 0.0)],
            vec![c64::new(3.0, 0.0), c64::new(4.0, 0.0)],
        ])?,
    )?;
    println!("vec(X) = {:?}", vectorize(&x).components().iter().map(|c| c.re).collect::<Vec<_>>());
    assert_eq!(devectorize(&vectorize(&x))?.max_abs_diff(&x)?, 0.0);

    // X -> A X B as a matrix acting on vec(X).
    let sp = Operator::new(layout.clone(), transition(2, 2, 1)?)?;
    let sm = sp.adjoint();
    let sandwich = super_sandwich(&sm, &sp)?;
    println!("(s- X s+)_11 = {}", sandwich.act(&x)?.get(0, 0).re);

    let l = build_liouvillian(&LindbladModel::new(Operator::zeros(&layout), vec![(1.0, sm)])?)?;
    println!("Liouvillian of qubit decay ({}x{}):", l.super_dim(), l.super_dim());
    for i in 0..4 {
        let row: Vec<String> = (0..4).map(|j| format!("{:>5.1}", l.matrix().get(i, j).re)).collect();
        println!("  [{}]", row.join(" "));
    }
    // The diagonal rows sum to zero in every column: d/dt tr(rho) = 0.
    let column_trace: Vec<f64> = (0..4).map(|j| (l.matrix().get(0, j) + l.matrix().get(3, j)).re).collect();
    println!("vec(I)^T L = {column_trace:?}");
    Ok(())
}

//! Logarithmic negativity of Werner states, which are entangled exactly
//! when the singlet weight exceeds one third.

use meq::c64;
use meq::hilbert::{Operator, SpaceLayout};
use meq::linalg::Matrix;
use meq::measures::{log_negativity, partial_transpose_spectrum};

fn werner(layout: &SpaceLayout, p: f64) -> meq::Result<Operator> {
    let mut rows = vec![vec![c64::new(0.0, 0.0); 4]; 4];
    for (i, row) in rows.iter_mut().enumerate() {
        row[i] = c64::new((1.0 - p) / 4.0, 0.0);
    }
    for i in [0, 3] {
        for j in [0, 3] {
            rows[i][j] += c64::new(p / 2.0, 0.0);
        }
    }
    Operator::new(layout.clone(), Matrix::from_rows(&rows)?)
}

fn main() -> meq::Result<()> {
    let layout = SpaceLayout::new([("A", 2), ("B", 2)])?;
    for p in [0.0, 0.25, 1.0 / 3.0, 0.5, 0.75, 1.0] {
        let rho = werner(&layout, p)?;
        let spectrum = partial_transpose_spectrum(&rho, &["B"])?;
        println!("p = {p:.3}: min PT eigenvalue {:+.4}, LN = {:.6}", spectrum[0], log_negativity(&rho, &["B"])?);
    }
    Ok(())
}

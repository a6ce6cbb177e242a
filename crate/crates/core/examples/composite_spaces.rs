//! Index maps, embeddings and reductions on a qubit-qutrit layout.

use meq::c64;
use meq::hilbert::{
    annihilation, basis_state, embed, flat_to_index, index_to_flat, partial_trace, product_state, MultiIndex,
    SpaceLayout,
};

fn main() -> meq::Result<()> {
    // The first subsystem varies fastest.
    let layout = SpaceLayout::new([("q", 2), ("m", 3)])?;
    for flat in 1..=layout.total_dim() {
        let multi = flat_to_index(&layout, flat)?;
        assert_eq!(index_to_flat(&layout, &multi)?, flat);
        println!("flat {flat} <-> {:?}", multi.components());
    }

    // Embedded operators on different subsystems commute.
    let a = embed(&layout, "m", &annihilation(3)?)?;
    let n = a.adjoint().matmul(&a)?;
    let state = basis_state(&layout, &MultiIndex::new(vec![2, 3]))?.projector();
    println!("<n> in |2>|3> (two photons): {:.3}", meq::measures::expectation(&n, &state)?.re);

    // Reducing a product state returns its factors.
    let h = 1.0 / 2f64.sqrt();
    let plus = vec![c64::new(h, 0.0), c64::new(h, 0.0)];
    let one = vec![c64::new(0.0, 0.0), c64::new(1.0, 0.0), c64::new(0.0, 0.0)];
    let rho = product_state(&layout, &[plus, one])?.projector();
    let q = partial_trace(&rho, &["m"])?;
    println!(
        "reduced qubit: [[{:.3}, {:.3}], [{:.3}, {:.3}]]",
        q.get(0, 0).re,
        q.get(0, 1).re,
        q.get(1, 0).re,
        q.get(1, 1).re
    );
    Ok(())
}

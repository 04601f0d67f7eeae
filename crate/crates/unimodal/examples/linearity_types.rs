//! Every piece-count pair (p, q) with p, q ≥ 2 is realized by some
//! unimodal map conjugate to the tent map; single-piece halves force the
//! tent map itself.
//!
//!     cargo run --example linearity_types

use unimodal::plconj::{check_conjugacy, construct_type, linearity_type};

fn main() -> unimodal::Result<()> {
    for (p, q) in [(1, 1), (2, 2), (2, 3), (3, 2), (4, 5), (5, 4)] {
        let (g, h) = construct_type(p, q)?;
        let t = linearity_type(&g)?;
        println!(
            "type ({p},{q}): map with {} breakpoints, verified ({}, {}), conjugate: {}",
            g.breakpoints().len(),
            t.p,
            t.q,
            check_conjugacy(&g, &h)?,
        );
    }
    println!("\n(2,1) is inadmissible: {}", construct_type(2, 1).is_err());

    // The constructions are deterministic golden fixtures.
    let (g1, _) = construct_type(3, 4)?;
    let (g2, _) = construct_type(3, 4)?;
    println!("construct_type(3,4) is reproducible: {}", g1 == g2);
    Ok(())
}

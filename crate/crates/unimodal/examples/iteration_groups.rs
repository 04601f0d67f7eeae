//! Maps whose iterations form a finite group: classification and the
//! co-ordered-vector conjugacy decision.
//!
//!     cargo run --example iteration_groups

use unimodal::exactnum::{rat, rat_i};
use unimodal::itergroup::{
    classify_finite_group, conjugate_finite_group, extrema_vectors, minimal_group_exponent,
};
use unimodal::plmap::{tent, PLMap};

fn main() -> unimodal::Result<()> {
    let idempotent = PLMap::new(vec![
        (rat_i(0), rat(1, 4)),
        (rat(1, 4), rat(1, 4)),
        (rat(3, 4), rat(3, 4)),
        (rat_i(1), rat(1, 2)),
    ])?;
    let order3 = PLMap::new(vec![
        (rat_i(0), rat(3, 4)),
        (rat(1, 4), rat(3, 4)),
        (rat(3, 4), rat(1, 4)),
        (rat_i(1), rat(1, 2)),
    ])?;

    for (name, m) in [
        ("idempotent", &idempotent),
        ("order-3", &order3),
        ("tent", &tent()),
    ] {
        println!(
            "{name}: {}, minimal exponent {:?}",
            classify_finite_group(m),
            minimal_group_exponent(m, 7)
        );
    }

    let ev = extrema_vectors(&order3)?;
    println!("\norder-3 extrema and image pairs:");
    for (p, (m1, m2)) in ev.points.iter().zip(&ev.pairs) {
        println!("  a = {p}: (m(a), m²(a)) = ({m1}, {m2})");
    }

    println!("\nconjugacy decisions:");
    println!(
        "  idempotent vs itself:     {:?}",
        conjugate_finite_group(&idempotent, &idempotent)?
    );
    println!(
        "  idempotent vs its mirror: {:?}",
        conjugate_finite_group(&idempotent, &idempotent.mirror())?
    );
    println!(
        "  idempotent vs order-3:    {:?}",
        conjugate_finite_group(&idempotent, &order3)?
    );
    Ok(())
}

//! Arbitrarily small perturbations of the tent map destroy conjugacy,
//! with an exact certificate either way.
//!
//!     cargo run --example perturbation_counterexample

use unimodal::exactnum::rat;
use unimodal::plconj::perturb_non_conjugate;
use unimodal::plmap::{tent, FixedSet};

fn main() -> unimodal::Result<()> {
    // Flattened peak: the maximum drops below 1, so 1 loses all preimages.
    let (g, cert) = perturb_non_conjugate(&rat(1, 2), &rat(1, 8))?;
    println!("peak case: max g = {}", cert.peak.unwrap());
    println!(
        "  preimages of 1 under g: {:?}",
        g.preimages(&rat(1, 1))?.points
    );

    // Fixed-point case: flatten around 2/3 so that g² is the identity on
    // a whole interval, which f² never is.
    let (g, cert) = perturb_non_conjugate(&rat(2, 3), &rat(1, 10))?;
    let (x_star, n, delta) = cert.periodic.unwrap();
    println!("\nperiodic case: x* = {x_star}, period {n}, core radius {delta}");
    let g2 = g.iterate(2 * n);
    for fs in g2.fixed_points() {
        if let FixedSet::Interval(a, b) = fs {
            println!("  g^2 fixes [{a}, {b}] pointwise");
        }
    }
    let f2_intervals = tent()
        .iterate(2)
        .fixed_points()
        .iter()
        .filter(|fs| matches!(fs, FixedSet::Interval(..)))
        .count();
    println!("  f^2 has {f2_intervals} fixed intervals");

    // A window anywhere contains a periodic point to flatten.
    let (_, cert) = perturb_non_conjugate(&rat(1, 20), &rat(1, 25))?;
    let (x_star, n, _) = cert.periodic.unwrap();
    println!("\nnear zero: found periodic point {x_star} of period {n}");
    Ok(())
}

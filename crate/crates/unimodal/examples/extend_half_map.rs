//! Extend half of a unimodal map to the unique full map conjugate to the
//! tent map, and round-trip through the other half.
//!
//!     cargo run --example extend_half_map

use unimodal::exactnum::{rat, rat_i};
use unimodal::plconj::{check_conjugacy, extend_left, extend_right, slope_at_zero, HalfMap, Side};

fn main() -> unimodal::Result<()> {
    // A non-convex increasing half on [0, 5/8] with slope 2 at the origin.
    let gl = HalfMap::left(vec![
        (rat_i(0), rat_i(0)),
        (rat(1, 4), rat(1, 2)),
        (rat(1, 2), rat(5, 8)),
        (rat(5, 8), rat_i(1)),
    ])?;

    println!("conjugacy slope at 0: {}", slope_at_zero(&gl)?);
    let (g, h) = extend_left(&gl)?;
    println!("\nextended map g:");
    for (x, y) in g.breakpoints() {
        println!("  ({x}, {y})");
    }
    println!("conjugacy h:");
    for (x, y) in h.breakpoints() {
        println!("  ({x}, {y})");
    }
    println!("h∘f = g∘h exactly: {}", check_conjugacy(&g, &h)?);

    // The decreasing half alone determines the same map.
    let gr = HalfMap::from_unimodal(&g, Side::Right)?;
    let (g2, _) = extend_right(&gr)?;
    println!(
        "\nround trip through the right half reproduces g: {}",
        g2 == g
    );
    Ok(())
}

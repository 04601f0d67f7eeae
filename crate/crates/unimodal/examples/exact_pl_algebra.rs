//! The exact piecewise-linear toolbox underneath everything else:
//! composition, iteration, preimages, fixed sets, and binary-digit
//! shifts under the tent map.
//!
//!     cargo run --example exact_pl_algebra

use unimodal::exactnum::{rat, Dyadic};
use unimodal::plmap::{binary_shift, skew_tent, tent, PLMap};

fn main() -> unimodal::Result<()> {
    let f = tent();
    let f2 = f.iterate(2);
    println!("tent² breakpoints:");
    for (x, y) in f2.breakpoints() {
        println!("  ({x}, {y})");
    }

    println!(
        "\npreimages of 1/2 under tent: {:?}",
        f.preimages(&rat(1, 2))?.points
    );
    println!("fixed sets of tent: {:?}", f.fixed_points());
    println!(
        "fixed sets of identity: {:?}",
        PLMap::identity().fixed_points()
    );

    let g = skew_tent(&rat(2, 7))?;
    println!("\nskew tent peak: {:?}", g.is_unimodal());
    println!(
        "g⁴ has {} breakpoints (2^4 + 1)",
        g.iterate(4).breakpoints().len()
    );

    // The tent map is the binary shift with complement-on-carry.
    let x = Dyadic::from_index(5, 3)?; // 0.101
    let digits = x.binary_digits(3)?;
    let shifted = binary_shift(&digits);
    let fx = f.eval(&x.to_rat())?;
    println!(
        "\nx = 5/8 = 0.{}",
        digits.iter().map(u8::to_string).collect::<String>()
    );
    println!(
        "f(x) = {} = 0.{}",
        fx,
        shifted.iter().map(u8::to_string).collect::<String>()
    );
    Ok(())
}

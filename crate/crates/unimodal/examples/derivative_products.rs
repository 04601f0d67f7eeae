//! Slopes of the conjugacy approximations and the derivative dichotomy.
//!
//! The slope of h_n on a linearity interval is a product of digit factors
//! 2v / 2(1−v); their statistics flatten almost every interval, while the
//! printed dichotomy at rational points can disagree with the observed
//! quotients — the report keeps both visible.
//!
//!     cargo run --example derivative_products

use unimodal::analysis::{
    derivative_classify, derivative_scan, flattening_fraction, hn_derivative_bits,
};
use unimodal::exactnum::{parse_rat, rat};

fn main() -> unimodal::Result<()> {
    let v = parse_rat("3/4")?;

    // The extreme digit strings.
    let all_zero = vec![0u8; 7];
    let alternating: Vec<u8> = (0..7).map(|i| 1 - (i % 2) as u8).collect();
    println!("slopes of h_8 at v = 3/4:");
    println!(
        "  leftmost interval (digits 0000000): {}",
        hn_derivative_bits(&v, &all_zero, 8)?
    );
    println!(
        "  alternating digits 1010101:         {}",
        hn_derivative_bits(&v, &alternating, 8)?
    );

    let scan = derivative_scan(&v, 8, true)?;
    println!(
        "  scan: min {} max {} (exhaustively confirmed: {})",
        scan.min,
        scan.max,
        scan.confirmed.unwrap()
    );

    let frac = flattening_fraction(&v, 200, 10_000, 1e-3, 7);
    println!("\nfraction of 200-digit slope products below 1e-3: {frac}");

    // Quotient evidence at rational points.
    for (vv, x) in [(rat(3, 4), rat(1, 3)), (rat(1, 4), rat(1, 2))] {
        let report = derivative_classify(&vv, &x, 25)?;
        println!(
            "\nv = {vv}, x0 = {x}: class {:?}, trend supports: {}, contradiction: {}",
            report.class, report.trend_supports, report.contradiction
        );
        let last = report.samples.last().expect("non-empty");
        println!(
            "  depth-{} quotients: left {:?}, right {:?}",
            last.m, last.left, last.right
        );
    }
    Ok(())
}

//! The periodic factor of the conjugacy in logarithmic coordinates, and
//! the monotonicity threshold of the log-coordinate interpolants.
//!
//!     cargo run --example omega_and_monotonicity

use unimodal::analysis::{htilde_extremum, htilde_threshold_bisect, omega1_extract};
use unimodal::exactnum::{parse_rat, rat, rat_to_f64};

fn main() -> unimodal::Result<()> {
    let v = parse_rat("3/4")?;
    let tol = rat(1, 1_000_000_000);

    // h(x) = x^{-log2 v} * omega1(log2 x) with omega1 of period 1:
    // omega1 = 1 at every power of two, and x vs x/2 agree.
    println!("omega1 along powers of two:");
    for m in [1u32, 5, 10] {
        let x = rat(1, 1i64 << m);
        println!(
            "  x = 2^-{m}: omega1 = {:.12}",
            omega1_extract(&v, &x, &tol)?
        );
    }
    let w1 = omega1_extract(&v, &rat(2, 5), &tol)?;
    let w2 = omega1_extract(&v, &rat(1, 5), &tol)?;
    println!("  period check at 2/5 vs 1/5: {w1:.9} vs {w2:.9}");

    // In log coordinates the interpolant has one extremum per interval;
    // it crosses into the interval (breaking monotonicity) once the peak
    // parameter drops below a threshold.
    println!("\nextremum location on the last level-3 interval:");
    for vs in ["0.1", "0.15", "0.25", "0.4"] {
        let vv = parse_rat(vs)?;
        let (t, violation) = htilde_extremum(&vv, 3, 3)?;
        println!("  v = {vs:>4}: t = {t:+.6}, monotonicity violated: {violation}");
    }
    let (lo, hi) = htilde_threshold_bisect(
        3,
        3,
        parse_rat("0.1")?,
        parse_rat("0.3")?,
        &rat(1, 10_000_000),
    )?;
    println!(
        "\nthreshold bracketed in [{:.8}, {:.8}]",
        rat_to_f64(&lo),
        rat_to_f64(&hi)
    );
    Ok(())
}

//! Evaluate the conjugacy at non-dyadic points with certified enclosures.
//!
//! Off the dyadic grid, h is a limit; `h_eval` brackets it between exact
//! grid values and returns a midpoint with a proven error bound.
//!
//!     cargo run --example certified_evaluation

use unimodal::conjugacy::ConjSystem;
use unimodal::exactnum::{parse_rat, rat, rat_to_f64};

fn main() -> unimodal::Result<()> {
    let sys = ConjSystem::new(parse_rat("3/4")?)?;
    let x = parse_rat("1/3")?;

    println!("enclosures of h(1/3) at shrinking tolerances:\n");
    let mut tol = rat(1, 100);
    for _ in 0..6 {
        let enc = sys.h_eval(&x, &tol)?;
        println!(
            "tol {:>12}  value ~ {:.15}  bound {:.3e}",
            tol.to_string(),
            rat_to_f64(&enc.value),
            rat_to_f64(&enc.error_bound),
        );
        tol /= rat(100, 1);
    }

    // 1/3 maps to the fixed point 2/3 of the tent map, so h(1/3) is the
    // preimage of the skew fixed point: v/(2-v) = 3/5.
    let exact = rat(3, 5);
    let enc = sys.h_eval(&x, &rat(1, 1_000_000_000))?;
    let err = rat_to_f64(&(&enc.value - &exact));
    println!("\nknown closed form h(1/3) = 3/5; midpoint misses it by {err:.2e}");

    // Dyadic points short-circuit to the exact recurrence.
    let enc = sys.h_eval(&parse_rat("5/8")?, &rat(1, 100))?;
    println!("h(5/8) = {} exactly (bound {})", enc.value, enc.error_bound);
    Ok(())
}

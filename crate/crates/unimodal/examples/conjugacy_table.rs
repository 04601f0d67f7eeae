//! Tabulate the conjugacy between the tent map and a skew tent map on a
//! dyadic grid, all in exact rational arithmetic.
//!
//!     cargo run --example conjugacy_table

use unimodal::conjugacy::ConjSystem;
use unimodal::exactnum::{parse_rat, Dyadic};

fn main() -> unimodal::Result<()> {
    let v = parse_rat("3/4")?;
    let sys = ConjSystem::new(v)?;

    println!("h conjugates the tent map to the skew tent with peak 3/4;");
    println!("values on the grid A_5 (all exact):\n");
    println!("{:>8}  h(x)", "x");
    for k in 0..=16u64 {
        let x = Dyadic::from_index(k, 4)?;
        println!("{:>8}  {}", x.to_rat().to_string(), sys.h_on_dyadic(&x));
    }

    // The defining identity h(f(x)) = f_v(h(x)) holds exactly on every
    // grid level; here is the piecewise-linear interpolant at level 6.
    let h6 = sys.h_n_approx(6)?;
    println!("\nh_6 has {} breakpoints.", h6.breakpoints().len());
    Ok(())
}

//! Graph length of the conjugacy approximations: exact polylines at desk
//! scale, the log-space binomial closed form far beyond it.
//!
//!     cargo run --release --example graph_length

use unimodal::analysis::{graph_length_formula, length_report};
use unimodal::exactnum::parse_rat;

fn main() -> unimodal::Result<()> {
    let v = parse_rat("0.52")?;
    println!("lengths l_n of the approximations at v = 0.52:\n");
    for n in [2u32, 4, 8, 12] {
        let r = length_report(&v, n)?;
        println!(
            "n = {n:>2}: polyline {:.12}   closed form {:.12}",
            r.polyline, r.formula
        );
    }

    println!("\nthe closed form runs to huge levels without overflow:");
    for n in [20_000u64, 50_000, 200_000] {
        println!("l_{}(0.52) = {:.6}", n + 1, graph_length_formula(0.52, n)?);
    }
    println!(
        "\nl_50001(0.51) = {:.6}",
        graph_length_formula(0.51, 50_000)?
    );
    println!("the limit is 2 for every peak except 1/2, where every");
    println!(
        "approximation is the diagonal: l(0.5) = {:.12}",
        graph_length_formula(0.5, 1000)?
    );
    Ok(())
}

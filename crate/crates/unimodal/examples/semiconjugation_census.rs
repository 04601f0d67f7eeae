//! Self-semiconjugations of the tent map: the sawtooth family, the census
//! of admissible grid maps, and transport to skew-tent semiconjugations.
//!
//!     cargo run --example semiconjugation_census

use unimodal::exactnum::{parse_rat, rat};
use unimodal::format::csv_rat;
use unimodal::plmap::tent;
use unimodal::semiconj::{
    enumerate_admissible, enumerate_continuable, is_self_semiconj, semiconj_to_skew, zigzag,
};

fn main() -> unimodal::Result<()> {
    // The nonconstant continuous solutions of xi∘f = f∘xi are sawtooths.
    let f = tent();
    for k in [1u32, 2, 3, 8] {
        let xi = zigzag(k)?;
        println!(
            "zigzag({k}): {} teeth, commutes with f: {}",
            xi.breakpoints().len() - 1,
            xi.compose(&f) == f.compose(&xi)
        );
    }
    println!("constant 2/3 commutes too: {}", {
        let c = unimodal::plmap::PLMap::new(vec![(rat(0, 1), rat(2, 3)), (rat(1, 1), rat(2, 3))])?;
        is_self_semiconj(&c)
    });

    // Census of admissible grid maps, with the claimed closed form
    // reported alongside (they disagree; the flag keeps that visible).
    for n in 1..=3u32 {
        let census = enumerate_admissible(n)?;
        println!(
            "\nlevel {n}: {} admissible tables (claimed formula gives {}, match: {})",
            census.tables.len(),
            census.formula_count,
            census.matches_formula
        );
        for t in census.tables.iter().take(4) {
            let vals: Vec<String> = t.values.iter().map(csv_rat).collect();
            println!("  ({})", vals.join(", "));
        }
        if census.tables.len() > 4 {
            println!("  …");
        }
    }

    // Continuable tables and their sawtooth witnesses.
    let cont = enumerate_continuable(3)?;
    println!(
        "\ncontinuable tables at level 3 (claimed count {}):",
        cont.claimed_count
    );
    for e in &cont.entries {
        let vals: Vec<String> = e.table.values.iter().map(csv_rat).collect();
        println!(
            "  k = {:>2}: ({})  congruence ok: {}",
            e.witness_k,
            vals.join(", "),
            e.congruence_ok
        );
    }

    // Transport to the skew tent through the conjugacy.
    let v = parse_rat("3/4")?;
    let eta = semiconj_to_skew(&v, 2, &rat(3, 8), &rat(1, 1_000_000))?;
    println!("\neta(3/8) for k = 2, v = 3/4: {} (exact)", eta.value);
    Ok(())
}

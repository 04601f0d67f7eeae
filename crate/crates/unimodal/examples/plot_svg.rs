//! Render a conjugacy approximation as an SVG polyline.
//!
//!     cargo run --example plot_svg

use unimodal::conjugacy::ConjSystem;
use unimodal::exactnum::parse_rat;
use unimodal::format::{plot_points, svg_polyline};

fn main() -> unimodal::Result<()> {
    let sys = ConjSystem::new(parse_rat("3/4")?)?;
    let h7 = sys.h_n_approx(7)?;
    let svg = svg_polyline(&plot_points(&h7));

    let path = std::env::temp_dir().join("h7.svg");
    std::fs::write(&path, &svg)?;
    println!(
        "wrote {} ({} vertices, {} bytes)",
        path.display(),
        h7.breakpoints().len(),
        svg.len()
    );
    Ok(())
}

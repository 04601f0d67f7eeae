//! File formats: the line-based map format and SVG plotting.
//!
//! Map files are exact: header `plmap 1`, one `x y` pair of rationals per
//! line with explicit denominators, `#` comments. Reading accepts anything
//! `parse_rat` accepts, so integers and decimals round-trip too.

use num_traits::One;

use crate::exactnum::{parse_rat, Rat};
use crate::plmap::PLMap;
use crate::{Error, Result};

/// Serializes a map in the `plmap 1` format, bit-exact rationals.
pub fn write_plmap(m: &PLMap) -> String {
    let mut out = String::from("plmap 1\n");
    for (x, y) in m.breakpoints() {
        out.push_str(&format!(
            "{}/{} {}/{}\n",
            x.numer(),
            x.denom(),
            y.numer(),
            y.denom()
        ));
    }
    out
}

/// Parses the `plmap 1` format.
pub fn read_plmap(text: &str) -> Result<PLMap> {
    let mut lines = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'));
    match lines.next() {
        Some("plmap 1") => {}
        _ => return Err(Error::InvalidMap("missing `plmap 1` header".into())),
    }
    let mut pts: Vec<(Rat, Rat)> = Vec::new();
    for line in lines {
        let mut fields = line.split_whitespace();
        let (Some(xs), Some(ys), None) = (fields.next(), fields.next(), fields.next()) else {
            return Err(Error::InvalidMap(format!(
                "expected `x y` on line `{line}`"
            )));
        };
        pts.push((parse_rat(xs)?, parse_rat(ys)?));
    }
    PLMap::new(pts)
}

/// An SVG 1.1 document with a single polyline scaled into a 1024x1024
/// viewBox, mathematical orientation (y grows upward).
pub fn svg_polyline(points: &[(f64, f64)]) -> String {
    let coords: Vec<String> = points
        .iter()
        .map(|(x, y)| format!("{:.4},{:.4}", 1024.0 * x, 1024.0 * (1.0 - y)))
        .collect();
    format!(
        concat!(
            "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n",
            "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" ",
            "viewBox=\"0 0 1024 1024\">\n",
            "<polyline fill=\"none\" stroke=\"black\" stroke-width=\"2\" points=\"{}\"/>\n",
            "</svg>\n"
        ),
        coords.join(" ")
    )
}

/// The polyline vertices of a map, for plotting.
pub fn plot_points(m: &PLMap) -> Vec<(f64, f64)> {
    m.breakpoints()
        .iter()
        .map(|(x, y)| {
            (
                crate::exactnum::rat_to_f64(x),
                crate::exactnum::rat_to_f64(y),
            )
        })
        .collect()
}

/// Formats a rational for CSV output: exact `p/q` (integers stay bare).
pub fn csv_rat(r: &Rat) -> String {
    if r.denom() == &num_bigint::BigInt::one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

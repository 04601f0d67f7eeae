//! Maps whose iteration semigroup is a finite group.
//!
//! Such a map satisfies `m^n = m` for some `n`, and then always `m³ = m`:
//! either `m² = m` (the map retracts onto a fixed interval) or `m³ = m`
//! with the middle part a decreasing involution of the image interval.
//! Conjugacy between two such maps is decided by comparing the orders of
//! their extremum-image vectors.

use crate::exactnum::Rat;
use crate::plmap::{FixedSet, PLMap};
use crate::{Error, Result};

/// Exact test of `m^n = m` in canonical form.
pub fn iterate_equals(m: &PLMap, n: u32) -> bool {
    m.iterate(n) == *m
}

/// Structure of a finite iteration group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupClass {
    NotFinite,
    /// `m² = m`: the image `[a, b]` is an interval of fixed points.
    Idempotent {
        a: Rat,
        b: Rat,
    },
    /// `m³ = m`, `m² ≠ m`: the restriction to the image `[a, b]` is a
    /// decreasing involution.
    Order3 {
        a: Rat,
        b: Rat,
    },
}

impl std::fmt::Display for GroupClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GroupClass::NotFinite => write!(f, "NotFinite"),
            GroupClass::Idempotent { a, b } => write!(f, "Idempotent [{a}, {b}]"),
            GroupClass::Order3 { a, b } => write!(f, "Order3 [{a}, {b}]"),
        }
    }
}

fn image_interval(m: &PLMap) -> (Rat, Rat) {
    let ys = m.breakpoints().iter().map(|(_, y)| y);
    let min = ys.clone().min().expect("non-empty").clone();
    let max = ys.max().expect("non-empty").clone();
    (min, max)
}

/// Classifies the iteration semigroup: idempotent, order three, or not a
/// finite group. The structural certificates (fixed interval, involution)
/// are verified exactly.
pub fn classify_finite_group(m: &PLMap) -> GroupClass {
    let (a, b) = image_interval(m);
    if iterate_equals(m, 2) {
        // m fixes its image pointwise.
        debug_assert!(m.fixed_points().iter().any(
            |fs| matches!(fs, FixedSet::Interval(c, d) if c <= &a && &b <= d)
                || (a == b && matches!(fs, FixedSet::Point(p) if p == &a))
        ));
        return GroupClass::Idempotent { a, b };
    }
    if iterate_equals(m, 3) {
        // m² fixes the image pointwise, and the restriction of m to the
        // image is a decreasing involution of it.
        let m2 = m.iterate(2);
        let fixed_on_image = m2
            .fixed_points()
            .iter()
            .any(|fs| matches!(fs, FixedSet::Interval(c, d) if c <= &a && &b <= d));
        debug_assert!(fixed_on_image);
        return GroupClass::Order3 { a, b };
    }
    GroupClass::NotFinite
}

/// Smallest `n` in `[2, n_max]` with `m^n = m`, if any.
pub fn minimal_group_exponent(m: &PLMap, n_max: u32) -> Option<u32> {
    (2..=n_max).find(|&n| iterate_equals(m, n))
}

/// Extremum locations of a finite-group map with their image pairs
/// `(m(a_i), m²(a_i))`. Endpoints 0 and 1 count as extrema, as do the
/// endpoints of the fixed intervals of `m²`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtremaVector {
    pub points: Vec<Rat>,
    pub pairs: Vec<(Rat, Rat)>,
}

impl ExtremaVector {
    /// The flattened value vector `(m(a_1), m²(a_1), …)`.
    pub fn flattened(&self) -> Vec<Rat> {
        self.pairs
            .iter()
            .flat_map(|(u, w)| [u.clone(), w.clone()])
            .collect()
    }

    /// The reversed-order flattened vector `(m(a_L), m²(a_L), …)`.
    pub fn flattened_reversed(&self) -> Vec<Rat> {
        self.pairs
            .iter()
            .rev()
            .flat_map(|(u, w)| [u.clone(), w.clone()])
            .collect()
    }
}

/// Collects the extrema of a finite-group map. Errors on maps whose
/// iterations do not form a finite group.
pub fn extrema_vectors(m: &PLMap) -> Result<ExtremaVector> {
    if classify_finite_group(m) == GroupClass::NotFinite {
        return Err(Error::Validation(
            "extrema vectors are defined for finite iteration groups".into(),
        ));
    }
    let pts = m.breakpoints();
    let mut points: Vec<Rat> = vec![pts[0].0.clone(), pts[pts.len() - 1].0.clone()];
    // Interior slope sign changes; plateau ends count as extrema.
    let zero = Rat::from_integer(0.into());
    let sgn = |s: &Rat| s.cmp(&zero);
    let slopes: Vec<Rat> = pts
        .windows(2)
        .map(|w| (&w[1].1 - &w[0].1) / (&w[1].0 - &w[0].0))
        .collect();
    for i in 1..slopes.len() {
        if sgn(&slopes[i - 1]) != sgn(&slopes[i]) {
            points.push(pts[i].0.clone());
        }
    }
    // Fixed-interval endpoints of m².
    for fs in m.iterate(2).fixed_points() {
        if let FixedSet::Interval(c, d) = fs {
            points.push(c);
            points.push(d);
        }
    }
    points.sort();
    points.dedup();
    let pairs = points
        .iter()
        .map(|a| {
            let fa = m.eval(a).expect("in range");
            let ffa = m.eval(&fa).expect("in range");
            (fa, ffa)
        })
        .collect();
    Ok(ExtremaVector { points, pairs })
}

/// Whether two equal-length value lists induce the same weak order by
/// index: `u_i ≤ u_j ⟺ w_i ≤ w_j`.
pub fn co_ordered(u: &[Rat], w: &[Rat]) -> Result<bool> {
    if u.len() != w.len() {
        return Err(Error::OutOfRange("co-ordering needs equal lengths".into()));
    }
    for i in 0..u.len() {
        for j in 0..u.len() {
            if (u[i] <= u[j]) != (w[i] <= w[j]) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn anti_ordered(u: &[Rat], w: &[Rat]) -> Result<bool> {
    let flipped: Vec<Rat> = w.iter().map(|x| -x.clone()).collect();
    co_ordered(u, &flipped)
}

/// Conjugacy decision between two finite-group maps.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConjugacyKind {
    No,
    Increasing,
    Decreasing,
}

fn endpoint_indices(ev: &ExtremaVector, target: &Rat) -> Vec<usize> {
    ev.pairs
        .iter()
        .enumerate()
        .filter(|(_, (u, _))| u == target)
        .map(|(i, _)| i)
        .collect()
}

/// Decides conjugacy of two finite-group maps by comparing extremum
/// counts, the indices of extrema realizing the image-interval endpoints,
/// and the order of the `(m(a_i), m²(a_i))` vectors: the same order means
/// an increasing conjugator, the reversed-and-opposite order a decreasing
/// one.
pub fn conjugate_finite_group(m1: &PLMap, m2: &PLMap) -> Result<ConjugacyKind> {
    if classify_finite_group(m1) == GroupClass::NotFinite
        || classify_finite_group(m2) == GroupClass::NotFinite
    {
        return Err(Error::Validation(
            "conjugacy decision is defined for finite iteration groups".into(),
        ));
    }
    let e1 = extrema_vectors(m1)?;
    let e2 = extrema_vectors(m2)?;
    if e1.points.len() != e2.points.len() {
        return Ok(ConjugacyKind::No);
    }
    let len = e1.points.len();
    let (p1, q1) = image_interval(m1);
    let (p2, q2) = image_interval(m2);
    let min1 = endpoint_indices(&e1, &p1);
    let max1 = endpoint_indices(&e1, &q1);
    let min2 = endpoint_indices(&e2, &p2);
    let max2 = endpoint_indices(&e2, &q2);
    if min1 == min2 && max1 == max2 && co_ordered(&e1.flattened(), &e2.flattened())? {
        return Ok(ConjugacyKind::Increasing);
    }
    let reflect = |ix: &[usize]| -> Vec<usize> {
        let mut r: Vec<usize> = ix.iter().map(|&i| len - 1 - i).collect();
        r.sort();
        r
    };
    if min1 == reflect(&max2)
        && max1 == reflect(&min2)
        && anti_ordered(&e1.flattened(), &e2.flattened_reversed())?
    {
        return Ok(ConjugacyKind::Decreasing);
    }
    Ok(ConjugacyKind::No)
}

//! Exact algebra of continuous piecewise-linear self-maps of `[0, 1]`.
//!
//! A [`PLMap`] is stored as its breakpoint list in canonical form (no
//! interior breakpoint collinear with its neighbours), so exact equality of
//! maps is structural equality of the lists. Composition, iteration and
//! preimages are all computed in rational arithmetic with no rounding.

use num_traits::{One, Signed, Zero};

use crate::exactnum::{rat, Rat};
use crate::{Error, Result};

/// Continuous piecewise-linear map `[0,1] → [0,1]` as a canonical
/// breakpoint list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PLMap {
    pts: Vec<(Rat, Rat)>,
}

/// Result of a preimage query. When the target value is attained on a flat
/// segment, the segment's endpoints are listed and `degenerate` is set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Preimages {
    pub points: Vec<Rat>,
    pub degenerate: bool,
}

/// A connected component of the fixed-point set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FixedSet {
    Point(Rat),
    Interval(Rat, Rat),
}

impl PLMap {
    /// Builds a map from breakpoints, validating the invariants and
    /// removing collinear interior breakpoints.
    pub fn new(pts: Vec<(Rat, Rat)>) -> Result<PLMap> {
        if pts.len() < 2 {
            return Err(Error::InvalidMap("need at least two breakpoints".into()));
        }
        if !pts[0].0.is_zero() {
            return Err(Error::InvalidMap("first breakpoint must have x = 0".into()));
        }
        if pts[pts.len() - 1].0 != Rat::one() {
            return Err(Error::InvalidMap("last breakpoint must have x = 1".into()));
        }
        for w in pts.windows(2) {
            if w[0].0 >= w[1].0 {
                return Err(Error::InvalidMap(
                    "breakpoint x-coordinates must be strictly increasing".into(),
                ));
            }
        }
        for (x, y) in &pts {
            if x.is_negative() || x > &Rat::one() || y.is_negative() || y > &Rat::one() {
                return Err(Error::InvalidMap(
                    "breakpoints must lie in the unit square".into(),
                ));
            }
        }
        Ok(PLMap {
            pts: canonicalize(pts),
        })
    }

    /// The identity map.
    pub fn identity() -> PLMap {
        PLMap {
            pts: vec![(Rat::zero(), Rat::zero()), (Rat::one(), Rat::one())],
        }
    }

    pub fn breakpoints(&self) -> &[(Rat, Rat)] {
        &self.pts
    }

    /// Exact value at `x ∈ [0, 1]`.
    pub fn eval(&self, x: &Rat) -> Result<Rat> {
        if x.is_negative() || x > &Rat::one() {
            return Err(Error::OutOfRange(format!("{x} outside [0,1]")));
        }
        let i = self.segment_index(x);
        let (x1, y1) = &self.pts[i];
        let (x2, y2) = &self.pts[i + 1];
        Ok(y1 + (y2 - y1) * (x - x1) / (x2 - x1))
    }

    fn segment_index(&self, x: &Rat) -> usize {
        // Largest i with pts[i].0 <= x, clamped so i+1 is valid.
        match self.pts.binary_search_by(|(px, _)| px.cmp(x)) {
            Ok(i) => i.min(self.pts.len() - 2),
            Err(i) => i - 1,
        }
    }

    /// Exact composition `self ∘ inner`.
    ///
    /// The breakpoint x-set of the result is the union of `inner`'s
    /// breakpoints with the `inner`-preimages of `self`'s breakpoints.
    pub fn compose(&self, inner: &PLMap) -> PLMap {
        let mut xs: Vec<Rat> = inner.pts.iter().map(|(x, _)| x.clone()).collect();
        for (bx, _) in &self.pts {
            let pre = inner.preimages(bx).expect("breakpoint in range");
            xs.extend(pre.points);
        }
        xs.sort();
        xs.dedup();
        let pts = xs
            .into_iter()
            .map(|x| {
                let y = self
                    .eval(&inner.eval(&x).expect("x in range"))
                    .expect("inner value in range");
                (x, y)
            })
            .collect();
        PLMap {
            pts: canonicalize(pts),
        }
    }

    /// `n`-fold composition; `n = 0` yields the identity.
    pub fn iterate(&self, n: u32) -> PLMap {
        let mut acc = PLMap::identity();
        for _ in 0..n {
            acc = self.compose(&acc);
        }
        acc
    }

    /// All solutions of `self(x) = y`, sorted. Flat segments at height `y`
    /// contribute their two endpoints and set the degeneracy flag.
    pub fn preimages(&self, y: &Rat) -> Result<Preimages> {
        if y.is_negative() || y > &Rat::one() {
            return Err(Error::OutOfRange(format!("{y} outside [0,1]")));
        }
        let mut points: Vec<Rat> = Vec::new();
        let mut degenerate = false;
        for w in self.pts.windows(2) {
            let (x1, y1) = &w[0];
            let (x2, y2) = &w[1];
            if y1 == y2 {
                if y1 == y {
                    degenerate = true;
                    points.push(x1.clone());
                    points.push(x2.clone());
                }
            } else if (y1 <= y && y <= y2) || (y2 <= y && y <= y1) {
                points.push(x1 + (y - y1) * (x2 - x1) / (y2 - y1));
            }
        }
        points.sort();
        points.dedup();
        Ok(Preimages { points, degenerate })
    }

    /// Location of the peak when the map strictly increases up to it and
    /// strictly decreases after it; `None` otherwise.
    pub fn is_unimodal(&self) -> Option<Rat> {
        let slopes: Vec<Rat> = self.slopes();
        let mut peak = None;
        for (i, s) in slopes.iter().enumerate() {
            if s.is_zero() {
                return None;
            }
            if s.is_negative() {
                peak = peak.or(Some(i));
            } else if peak.is_some() {
                return None;
            }
        }
        match peak {
            Some(i) if i > 0 => Some(self.pts[i].0.clone()),
            _ => None,
        }
    }

    fn slopes(&self) -> Vec<Rat> {
        self.pts
            .windows(2)
            .map(|w| (&w[1].1 - &w[0].1) / (&w[1].0 - &w[0].0))
            .collect()
    }

    /// All solutions of `self(x) = x`; segments lying on the diagonal are
    /// reported as intervals.
    pub fn fixed_points(&self) -> Vec<FixedSet> {
        let mut out: Vec<FixedSet> = Vec::new();
        let mut last_point: Option<Rat> = None;
        for w in self.pts.windows(2) {
            let (x1, y1) = &w[0];
            let (x2, y2) = &w[1];
            let s = (y2 - y1) / (x2 - x1);
            if s == Rat::one() {
                if y1 == x1 {
                    out.push(FixedSet::Interval(x1.clone(), x2.clone()));
                    last_point = None;
                }
                continue;
            }
            // y1 + s (x - x1) = x  =>  x = (y1 - s x1) / (1 - s)
            let x = (y1 - &s * x1) / (Rat::one() - &s);
            if &x >= x1 && &x <= x2 {
                if last_point.as_ref() == Some(&x) {
                    continue;
                }
                if let Some(FixedSet::Interval(_, b)) = out.last() {
                    if b == &x {
                        continue;
                    }
                }
                last_point = Some(x.clone());
                out.push(FixedSet::Point(x));
            }
        }
        out
    }

    /// The reflection `x ↦ 1 − self(1 − x)`, i.e. conjugation by `1 − x`.
    pub fn mirror(&self) -> PLMap {
        let one = Rat::one();
        let mut pts: Vec<(Rat, Rat)> = self
            .pts
            .iter()
            .rev()
            .map(|(x, y)| (&one - x, &one - y))
            .collect();
        pts[0].0 = Rat::zero();
        PLMap {
            pts: canonicalize(pts),
        }
    }
}

fn canonicalize(pts: Vec<(Rat, Rat)>) -> Vec<(Rat, Rat)> {
    let mut out: Vec<(Rat, Rat)> = Vec::with_capacity(pts.len());
    for p in pts {
        while out.len() >= 2 {
            let (x1, y1) = &out[out.len() - 2];
            let (x2, y2) = &out[out.len() - 1];
            // (x2,y2) collinear with (x1,y1)-(p)?
            if (y2 - y1) * (&p.0 - x1) == (&p.1 - y1) * (x2 - x1) {
                out.pop();
            } else {
                break;
            }
        }
        out.push(p);
    }
    out
}

/// The tent map: breakpoints `(0,0), (1/2,1), (1,0)`.
pub fn tent() -> PLMap {
    PLMap::new(vec![
        (Rat::zero(), Rat::zero()),
        (rat(1, 2), Rat::one()),
        (Rat::one(), Rat::zero()),
    ])
    .expect("valid")
}

/// The skew tent map with peak at `v ∈ (0,1)`: `x/v` then `(1−x)/(1−v)`.
pub fn skew_tent(v: &Rat) -> Result<PLMap> {
    if v <= &Rat::zero() || v >= &Rat::one() {
        return Err(Error::OutOfRange(format!("peak {v} outside (0,1)")));
    }
    PLMap::new(vec![
        (Rat::zero(), Rat::zero()),
        (v.clone(), Rat::one()),
        (Rat::one(), Rat::zero()),
    ])
}

/// Binary digits of `f(x)` from the digits of `x` under the tent map:
/// drop the leading digit; if it was 1, complement the rest.
///
/// Complementing a terminating expansion turns its zero tail into an
/// all-ones tail, so the finite result carries: complement then add one
/// unit in the last place. The input `[1,0,…,0]` (x = 1/2, image exactly 1)
/// has no terminating expansion; the all-ones string is returned for it.
pub fn binary_shift(bits: &[u8]) -> Vec<u8> {
    assert!(
        !bits.is_empty(),
        "binary_shift needs a non-empty bit string"
    );
    let mut rest: Vec<u8> = bits[1..].to_vec();
    if bits[0] == 1 {
        for b in rest.iter_mut() {
            *b = 1 - *b;
        }
        for b in rest.iter_mut().rev() {
            if *b == 0 {
                *b = 1;
                return rest;
            }
            *b = 0;
        }
        // Carried off the top: image is exactly 1.
        for b in rest.iter_mut() {
            *b = 1;
        }
    }
    rest
}

/// Strictly monotone piecewise-linear arc on a subinterval of `[0,1]`.
///
/// Supporting machinery for branch inverses: the left/right branches of a
/// unimodal map, and partially-built conjugacies.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Branch {
    pts: Vec<(Rat, Rat)>,
    increasing: bool,
}

impl Branch {
    pub fn new(pts: Vec<(Rat, Rat)>) -> Result<Branch> {
        if pts.len() < 2 {
            return Err(Error::InvalidMap("branch needs two points".into()));
        }
        for w in pts.windows(2) {
            if w[0].0 >= w[1].0 {
                return Err(Error::InvalidMap("branch x must strictly increase".into()));
            }
        }
        let increasing = pts[0].1 < pts[pts.len() - 1].1;
        for w in pts.windows(2) {
            let ok = if increasing {
                w[0].1 < w[1].1
            } else {
                w[0].1 > w[1].1
            };
            if !ok {
                return Err(Error::FlatBranch(
                    "branch y must be strictly monotone".into(),
                ));
            }
        }
        Ok(Branch { pts, increasing })
    }

    pub fn points(&self) -> &[(Rat, Rat)] {
        &self.pts
    }

    pub fn is_increasing(&self) -> bool {
        self.increasing
    }

    pub fn domain(&self) -> (&Rat, &Rat) {
        (&self.pts[0].0, &self.pts[self.pts.len() - 1].0)
    }

    pub fn eval(&self, x: &Rat) -> Result<Rat> {
        let (lo, hi) = self.domain();
        if x < lo || x > hi {
            return Err(Error::OutOfRange(format!("{x} outside branch domain")));
        }
        let i = match self.pts.binary_search_by(|(px, _)| px.cmp(x)) {
            Ok(i) => i.min(self.pts.len() - 2),
            Err(i) => i - 1,
        };
        let (x1, y1) = &self.pts[i];
        let (x2, y2) = &self.pts[i + 1];
        Ok(y1 + (y2 - y1) * (x - x1) / (x2 - x1))
    }

    /// Solves `self(x) = y` on the branch.
    pub fn eval_inverse(&self, y: &Rat) -> Result<Rat> {
        let (ylo, yhi) = if self.increasing {
            (&self.pts[0].1, &self.pts[self.pts.len() - 1].1)
        } else {
            (&self.pts[self.pts.len() - 1].1, &self.pts[0].1)
        };
        if y < ylo || y > yhi {
            return Err(Error::OutOfRange(format!("{y} outside branch range")));
        }
        let idx = self
            .pts
            .windows(2)
            .position(|w| {
                if self.increasing {
                    &w[0].1 <= y && y <= &w[1].1
                } else {
                    &w[1].1 <= y && y <= &w[0].1
                }
            })
            .expect("y within some segment");
        let (x1, y1) = &self.pts[idx];
        let (x2, y2) = &self.pts[idx + 1];
        Ok(x1 + (y - y1) * (x2 - x1) / (y2 - y1))
    }

    /// The inverse branch (coordinates swapped).
    pub fn inverse(&self) -> Branch {
        let mut pts: Vec<(Rat, Rat)> = self
            .pts
            .iter()
            .map(|(x, y)| (y.clone(), x.clone()))
            .collect();
        if !self.increasing {
            pts.reverse();
        }
        Branch::new(pts).expect("inverse of monotone branch is monotone")
    }
}

/// Splits a unimodal map into its increasing and decreasing branches.
pub fn split_unimodal(m: &PLMap) -> Result<(Branch, Branch)> {
    let top = m.is_unimodal().ok_or(Error::NotUnimodal)?;
    let pts = m.breakpoints();
    let split = pts
        .iter()
        .position(|(x, _)| x == &top)
        .expect("peak is a breakpoint");
    let left = Branch::new(pts[..=split].to_vec())?;
    let right = Branch::new(pts[split..].to_vec())?;
    Ok((left, right))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{rat_i, Dyadic};
    use proptest::prelude::*;

    #[test]
    fn tent_values() {
        let f = tent();
        assert_eq!(f.eval(&rat(1, 2)).unwrap(), rat_i(1));
        assert_eq!(f.eval(&rat(1, 4)).unwrap(), rat(1, 2));
        assert_eq!(f.eval(&rat(3, 4)).unwrap(), rat(1, 2));
        assert_eq!(f.eval(&rat_i(0)).unwrap(), rat_i(0));
    }

    #[test]
    fn skew_tent_values() {
        let g = skew_tent(&rat(3, 4)).unwrap();
        assert_eq!(g.eval(&rat(3, 4)).unwrap(), rat_i(1));
        assert_eq!(g.eval(&rat(3, 8)).unwrap(), rat(1, 2));
        assert_eq!(g.eval(&rat(7, 8)).unwrap(), rat(1, 2));
        let g = skew_tent(&rat(1, 3)).unwrap();
        assert_eq!(g.eval(&rat(2, 3)).unwrap(), rat(1, 2));
        assert!(skew_tent(&rat_i(0)).is_err());
        assert!(skew_tent(&rat_i(1)).is_err());
    }

    #[test]
    fn identity_is_identity() {
        let id = PLMap::identity();
        assert_eq!(id.eval(&rat(5, 7)).unwrap(), rat(5, 7));
        assert_eq!(tent().compose(&id), tent());
        assert_eq!(id.compose(&tent()), tent());
    }

    #[test]
    fn compose_tent_twice() {
        // Hand-composed: peaks at 1/4 and 3/4, zeros at 0, 1/2, 1.
        let f2 = tent().compose(&tent());
        let expect = PLMap::new(vec![
            (rat_i(0), rat_i(0)),
            (rat(1, 4), rat_i(1)),
            (rat(1, 2), rat_i(0)),
            (rat(3, 4), rat_i(1)),
            (rat_i(1), rat_i(0)),
        ])
        .unwrap();
        assert_eq!(f2, expect);
        assert_eq!(tent().iterate(2), expect);
    }

    #[test]
    fn compose_hits_zero_at_peak() {
        let v = rat(2, 5);
        let g = skew_tent(&v).unwrap();
        let c = tent().compose(&g);
        assert_eq!(c.eval(&v).unwrap(), rat_i(0));
    }

    #[test]
    fn iterate_zero_is_identity() {
        assert_eq!(tent().iterate(0), PLMap::identity());
    }

    #[test]
    fn skew_tent_iterates_have_full_branches() {
        // 2^n monotone pieces, each spanning [0,1]: 2^n + 1 breakpoints
        // alternating 0/1 values.
        let g = skew_tent(&rat(2, 7)).unwrap();
        for n in 1..=6u32 {
            let it = g.iterate(n);
            let pts = it.breakpoints();
            assert_eq!(pts.len(), (1usize << n) + 1);
            for (i, (_, y)) in pts.iter().enumerate() {
                let expect = if i % 2 == 0 { rat_i(0) } else { rat_i(1) };
                assert_eq!(*y, expect, "n={n} i={i}");
            }
        }
    }

    #[test]
    fn preimage_queries() {
        let f = tent();
        assert_eq!(
            f.preimages(&rat(1, 2)).unwrap().points,
            vec![rat(1, 4), rat(3, 4)]
        );
        assert_eq!(f.preimages(&rat_i(1)).unwrap().points, vec![rat(1, 2)]);
        let g = skew_tent(&rat(2, 3)).unwrap();
        assert_eq!(
            g.preimages(&rat_i(0)).unwrap().points,
            vec![rat_i(0), rat_i(1)]
        );
    }

    #[test]
    fn preimage_flags_flat_segment() {
        let m = PLMap::new(vec![
            (rat_i(0), rat_i(0)),
            (rat(1, 4), rat(1, 2)),
            (rat(3, 4), rat(1, 2)),
            (rat_i(1), rat_i(1)),
        ])
        .unwrap();
        let p = m.preimages(&rat(1, 2)).unwrap();
        assert!(p.degenerate);
        assert_eq!(p.points, vec![rat(1, 4), rat(3, 4)]);
        let q = m.preimages(&rat(1, 4)).unwrap();
        assert!(!q.degenerate);
    }

    #[test]
    fn unimodal_detection() {
        assert_eq!(tent().is_unimodal(), Some(rat(1, 2)));
        assert_eq!(
            skew_tent(&rat(1, 4)).unwrap().is_unimodal(),
            Some(rat(1, 4))
        );
        assert_eq!(PLMap::identity().is_unimodal(), None);
        let zigzag3 = PLMap::new(vec![
            (rat_i(0), rat_i(0)),
            (rat(1, 3), rat_i(1)),
            (rat(2, 3), rat_i(0)),
            (rat_i(1), rat_i(1)),
        ])
        .unwrap();
        assert_eq!(zigzag3.is_unimodal(), None);
    }

    #[test]
    fn fixed_point_queries() {
        assert_eq!(
            tent().fixed_points(),
            vec![FixedSet::Point(rat_i(0)), FixedSet::Point(rat(2, 3))]
        );
        let v = rat(2, 5);
        // Positive fixed point of the skew tent is 1/(2-v).
        assert_eq!(
            skew_tent(&v).unwrap().fixed_points(),
            vec![FixedSet::Point(rat_i(0)), FixedSet::Point(rat(5, 8))]
        );
        assert_eq!(
            PLMap::identity().fixed_points(),
            vec![FixedSet::Interval(rat_i(0), rat_i(1))]
        );
    }

    #[test]
    fn shift_matches_tent_arithmetic() {
        // Oracle: digits of eval(tent(), x).
        let x = Dyadic::from_index(5, 3).unwrap(); // 0.101
        let fx = tent().eval(&x.to_rat()).unwrap(); // 3/4 = 0.11
        let shifted = binary_shift(&x.binary_digits(3).unwrap());
        assert_eq!(
            shifted,
            Dyadic::from_rat(&fx).unwrap().binary_digits(2).unwrap()
        );
        assert_eq!(shifted, vec![1, 1]);
        assert_eq!(binary_shift(&[0, 1, 1]), vec![1, 1]);
        assert_eq!(binary_shift(&[0, 0, 0]), vec![0, 0]);
        assert_eq!(binary_shift(&[1, 1, 1]), vec![0, 1]); // f(7/8) = 1/4
    }

    #[test]
    fn mirror_reflects() {
        let g = skew_tent(&rat(1, 4)).unwrap();
        let m = g.mirror();
        assert_eq!(
            m.breakpoints(),
            &[
                (rat_i(0), rat_i(1)),
                (rat(3, 4), rat_i(0)),
                (rat_i(1), rat_i(1))
            ]
        );
        assert_eq!(m.mirror(), g);
    }

    #[test]
    fn branch_inverse_round_trip() {
        let (l, r) = split_unimodal(&skew_tent(&rat(3, 7)).unwrap()).unwrap();
        assert!(l.is_increasing());
        assert!(!r.is_increasing());
        let y = rat(2, 9);
        assert_eq!(l.eval(&l.eval_inverse(&y).unwrap()).unwrap(), y);
        assert_eq!(r.eval(&r.eval_inverse(&y).unwrap()).unwrap(), y);
        assert_eq!(l.inverse().eval(&y).unwrap(), l.eval_inverse(&y).unwrap());
    }

    fn arb_rat01() -> impl Strategy<Value = Rat> {
        (0u32..=64, 1u32..=6).prop_map(|(n, e)| {
            let den = 1u32 << e;
            rat(i64::from(n % (den + 1)), i64::from(den))
        })
    }

    fn arb_plmap() -> impl Strategy<Value = PLMap> {
        // Random small maps: interior breakpoints at dyadic x with dyadic y.
        proptest::collection::vec((arb_rat01(), arb_rat01()), 0..4).prop_map(|mid| {
            let mut xs: Vec<(Rat, Rat)> = vec![(rat_i(0), rat(1, 2))];
            let mut mids: Vec<(Rat, Rat)> = mid
                .into_iter()
                .filter(|(x, _)| !x.is_zero() && x != &rat_i(1))
                .collect();
            mids.sort_by(|a, b| a.0.cmp(&b.0));
            mids.dedup_by(|a, b| a.0 == b.0);
            xs.extend(mids);
            xs.push((rat_i(1), rat(1, 3)));
            PLMap::new(xs).unwrap()
        })
    }

    proptest! {
        #[test]
        fn compose_is_associative(a in arb_plmap(), b in arb_plmap(), c in arb_plmap()) {
            prop_assert_eq!(a.compose(&b).compose(&c), a.compose(&b.compose(&c)));
        }

        #[test]
        fn iterate_adds(m in arb_plmap(), a in 0u32..4, b in 0u32..4) {
            prop_assert_eq!(m.iterate(a + b), m.iterate(a).compose(&m.iterate(b)));
        }

        #[test]
        fn shift_reconstructs_tent_image(k in 1u64..=255, extra in 0usize..3) {
            let d = Dyadic::new(k.into(), 8).unwrap();
            // Skip x = 1/2 and x = 1: f(x) = 1 has no terminating expansion.
            prop_assume!(d != Dyadic::from_index(1, 1).unwrap() && !d.is_one());
            let count = 8 + extra;
            let shifted = binary_shift(&d.binary_digits(count).unwrap());
            let fx = tent().eval(&d.to_rat()).unwrap();
            let want = Dyadic::from_rat(&fx).unwrap().binary_digits(count - 1).unwrap();
            prop_assert_eq!(shifted, want);
        }
    }
}

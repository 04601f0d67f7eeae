//! Constructive piecewise-linear conjugacy with the tent map.
//!
//! A half-specified unimodal map (the increasing part on `[0, v]`, or the
//! decreasing part on `[v, 1]`) determines the full map and the conjugating
//! homeomorphism uniquely, provided the boundary obstructions hold:
//! slope 2 at the origin for the left half, slope product 4 around the
//! interior fixed point for the right half. Both extensions are computed
//! exactly and verified against `h∘f = g∘h` as piecewise-linear identities.

use num_traits::{One, Signed, Zero};

use crate::exactnum::{rat, rat_i, Rat};
use crate::plmap::{split_unimodal, tent, Branch, FixedSet, PLMap};
use crate::{Error, Result};

/// Which half of a unimodal map a [`HalfMap`] describes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Half of a unimodal map: `[0,v] → [0,1]` increasing, or `[v,1] → [0,1]`
/// decreasing, stored as a breakpoint list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfMap {
    side: Side,
    pts: Vec<(Rat, Rat)>,
}

/// A reason a half map cannot extend to a conjugate of the tent map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    Endpoint(String),
    Monotonicity(String),
    SlopeAtZero(Rat),
    FixedSlopeProduct { x0: Rat, product: Rat },
    NoFixedPoint,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::Endpoint(s) => write!(f, "endpoint: {s}"),
            Violation::Monotonicity(s) => write!(f, "monotonicity: {s}"),
            Violation::SlopeAtZero(s) => write!(f, "slope at zero is {s}, not 2"),
            Violation::FixedSlopeProduct { x0, product } => {
                write!(f, "slope product at fixed point {x0} is {product}, not 4")
            }
            Violation::NoFixedPoint => write!(f, "no fixed point inside (v, 1)"),
        }
    }
}

impl HalfMap {
    /// An increasing half on `[0, v]`.
    pub fn left(pts: Vec<(Rat, Rat)>) -> Result<HalfMap> {
        HalfMap::checked(Side::Left, pts)
    }

    /// A decreasing half on `[v, 1]`.
    pub fn right(pts: Vec<(Rat, Rat)>) -> Result<HalfMap> {
        HalfMap::checked(Side::Right, pts)
    }

    fn checked(side: Side, pts: Vec<(Rat, Rat)>) -> Result<HalfMap> {
        if pts.len() < 2 {
            return Err(Error::InvalidMap("half map needs two breakpoints".into()));
        }
        for w in pts.windows(2) {
            if w[0].0 >= w[1].0 {
                return Err(Error::InvalidMap(
                    "x-coordinates must strictly increase".into(),
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
        match side {
            Side::Left if !pts[0].0.is_zero() => {
                return Err(Error::InvalidMap("left half must start at x = 0".into()))
            }
            Side::Right if pts[pts.len() - 1].0 != Rat::one() => {
                return Err(Error::InvalidMap("right half must end at x = 1".into()))
            }
            _ => {}
        }
        Ok(HalfMap { side, pts })
    }

    /// Extracts a half from a full unimodal map.
    pub fn from_unimodal(g: &PLMap, side: Side) -> Result<HalfMap> {
        let top = g.is_unimodal().ok_or(Error::NotUnimodal)?;
        let pts = g.breakpoints();
        let split = pts
            .iter()
            .position(|(x, _)| x == &top)
            .expect("peak is a breakpoint");
        let pts = match side {
            Side::Left => pts[..=split].to_vec(),
            Side::Right => pts[split..].to_vec(),
        };
        HalfMap::checked(side, pts)
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn points(&self) -> &[(Rat, Rat)] {
        &self.pts
    }

    /// The peak coordinate `v`.
    pub fn v(&self) -> &Rat {
        match self.side {
            Side::Left => &self.pts[self.pts.len() - 1].0,
            Side::Right => &self.pts[0].0,
        }
    }
}

/// Checks the left-half obstructions: endpoints `(0,0) → (v,1)`, strict
/// increase, and slope exactly 2 at the origin.
pub fn validate_left(hm: &HalfMap) -> Vec<Violation> {
    let mut out = Vec::new();
    if hm.side != Side::Left {
        out.push(Violation::Endpoint("not a left half".into()));
        return out;
    }
    let pts = &hm.pts;
    let v = hm.v();
    if v <= &Rat::zero() || v >= &Rat::one() {
        out.push(Violation::Endpoint(format!("peak {v} outside (0,1)")));
    }
    if !pts[0].1.is_zero() {
        out.push(Violation::Endpoint("g(0) must be 0".into()));
    }
    if pts[pts.len() - 1].1 != Rat::one() {
        out.push(Violation::Endpoint("g(v) must be 1".into()));
    }
    if !pts.windows(2).all(|w| w[0].1 < w[1].1) {
        out.push(Violation::Monotonicity(
            "left half must strictly increase".into(),
        ));
    }
    if out.is_empty() {
        let slope = (&pts[1].1 - &pts[0].1) / (&pts[1].0 - &pts[0].0);
        if slope != rat(2, 1) {
            out.push(Violation::SlopeAtZero(slope));
        }
    }
    out
}

/// Locates the fixed point of a decreasing right half in `(v, 1)`.
fn right_fixed_point(pts: &[(Rat, Rat)]) -> Option<Rat> {
    for w in pts.windows(2) {
        let (x1, y1) = &w[0];
        let (x2, y2) = &w[1];
        if y1 >= x1 && y2 <= x2 {
            let s = (y2 - y1) / (x2 - x1);
            let x = (y1 - &s * x1) / (Rat::one() - &s);
            if &x >= x1 && &x <= x2 {
                return Some(x);
            }
        }
    }
    None
}

/// Checks the right-half obstructions: endpoints `(v,1) → (1,0)`, strict
/// decrease, and slope product exactly 4 around the interior fixed point.
pub fn validate_right(hm: &HalfMap) -> Vec<Violation> {
    let mut out = Vec::new();
    if hm.side != Side::Right {
        out.push(Violation::Endpoint("not a right half".into()));
        return out;
    }
    let pts = &hm.pts;
    let v = hm.v();
    if v <= &Rat::zero() || v >= &Rat::one() {
        out.push(Violation::Endpoint(format!("peak {v} outside (0,1)")));
    }
    if pts[0].1 != Rat::one() {
        out.push(Violation::Endpoint("g(v) must be 1".into()));
    }
    if !pts[pts.len() - 1].1.is_zero() {
        out.push(Violation::Endpoint("g(1) must be 0".into()));
    }
    if !pts.windows(2).all(|w| w[0].1 > w[1].1) {
        out.push(Violation::Monotonicity(
            "right half must strictly decrease".into(),
        ));
        return out;
    }
    if !out.is_empty() {
        return out;
    }
    match right_fixed_point(pts) {
        None => out.push(Violation::NoFixedPoint),
        Some(x0) => {
            let (a1, a2) = slopes_around(pts, &x0);
            let product = &a1 * &a2;
            if product != rat(4, 1) {
                out.push(Violation::FixedSlopeProduct { x0, product });
            }
        }
    }
    out
}

/// Slopes of the pieces immediately left and right of `x` (equal when `x`
/// is interior to a piece).
fn slopes_around(pts: &[(Rat, Rat)], x: &Rat) -> (Rat, Rat) {
    let mut left = None;
    let mut right = None;
    for w in pts.windows(2) {
        let s = (&w[1].1 - &w[0].1) / (&w[1].0 - &w[0].0);
        if &w[0].0 < x && x <= &w[1].0 {
            left = Some(s.clone());
        }
        if &w[0].0 <= x && x < &w[1].0 {
            right = Some(s);
        }
    }
    let l = left
        .clone()
        .or_else(|| right.clone())
        .expect("x inside domain");
    let r = right.or(left).expect("x inside domain");
    (l, r)
}

/// The stabilized limit `k = lim 2^n g_l^{-n}(1)`, which is the slope of
/// the conjugacy at 0. The sequence stabilizes exactly once the backward
/// orbit of 1 enters the first linearity piece of `g_l`; failure to do so
/// within 64 steps signals an invalid half.
pub fn slope_at_zero(hm: &HalfMap) -> Result<Rat> {
    let viols = validate_left(hm);
    if !viols.is_empty() {
        return Err(Error::Validation(join_violations(&viols)));
    }
    let branch = Branch::new(hm.pts.clone())?;
    let mut y = Rat::one();
    let mut scale = Rat::one();
    let mut prev: Option<Rat> = None;
    for _ in 0..64 {
        y = branch.eval_inverse(&y)?;
        scale *= rat(2, 1);
        let k = &scale * &y;
        if prev.as_ref() == Some(&k) {
            return Ok(k);
        }
        prev = Some(k);
    }
    Err(Error::NoStabilization(
        "2^n g_l^{-n}(1) did not stabilize within 64 iterations".into(),
    ))
}

fn join_violations(viols: &[Violation]) -> String {
    viols
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

fn poly_eval(pts: &[(Rat, Rat)], x: &Rat) -> Rat {
    let i = match pts.binary_search_by(|(px, _)| px.cmp(x)) {
        Ok(i) => return pts[i].1.clone(),
        Err(i) => i - 1,
    };
    let (x1, y1) = &pts[i];
    let (x2, y2) = &pts[i + 1];
    y1 + (y2 - y1) * (x - x1) / (x2 - x1)
}

// Inverse evaluation on a strictly increasing polyline.
fn poly_inv(pts: &[(Rat, Rat)], y: &Rat) -> Rat {
    let idx = pts
        .windows(2)
        .position(|w| &w[0].1 <= y && y <= &w[1].1)
        .expect("y within polyline range");
    let (x1, y1) = &pts[idx];
    let (x2, y2) = &pts[idx + 1];
    x1 + (y - y1) * (x2 - x1) / (y2 - y1)
}

/// Extends a valid increasing half `g_l` to the unique unimodal `g`
/// conjugate to the tent map, returning `(g, h)` with `h∘f = g∘h` exact.
///
/// The conjugacy starts as `h(x) = kx` near 0 and propagates along dyadic
/// scale intervals by `h(2x) = g_l(h(x))`; the decreasing half is then
/// `g_r = h ∘ f_r ∘ h⁻¹`.
pub fn extend_left(hm: &HalfMap) -> Result<(PLMap, PLMap)> {
    let viols = validate_left(hm);
    if !viols.is_empty() {
        return Err(Error::Validation(join_violations(&viols)));
    }
    let k = slope_at_zero(hm)?;
    let gl = hm.pts.clone();
    // First linearity break of g_l; a straight half breaks only at the peak.
    let eps = if gl.len() > 2 {
        gl[1].0.clone()
    } else {
        hm.v().clone()
    };
    // Largest dyadic scale 2^-n inside [0, eps/k].
    let cutoff = &eps / &k;
    let mut t = Rat::one();
    while t > cutoff {
        t /= rat(2, 1);
    }
    let mut h: Vec<(Rat, Rat)> = vec![(Rat::zero(), Rat::zero()), (t.clone(), &k * &t)];
    let mut cur = t;
    while cur < Rat::one() {
        let lo = &cur / rat(2, 1);
        let mut cand: Vec<Rat> = Vec::new();
        for (px, _) in h.iter() {
            if px >= &lo && px <= &cur {
                cand.push(px * rat(2, 1));
            }
        }
        let (ylo, yhi) = (poly_eval(&h, &lo), poly_eval(&h, &cur));
        for (bx, _) in &gl {
            if bx >= &ylo && bx <= &yhi {
                cand.push(poly_inv(&h, bx) * rat(2, 1));
            }
        }
        cand.sort();
        cand.dedup();
        for x in cand {
            if x <= cur {
                continue;
            }
            let y = poly_eval(&gl, &poly_eval(&h, &(&x / rat(2, 1))));
            if y <= h.last().expect("non-empty").1 {
                return Err(Error::Validation(
                    "propagation produced a non-monotone conjugacy; the left half does not extend"
                        .into(),
                ));
            }
            h.push((x, y));
        }
        cur *= rat(2, 1);
    }
    finish_extension(h, Some(gl), None)
}

/// Extends a valid decreasing half `g_r` to the unique unimodal `g`
/// conjugate to the tent map, returning `(g, h)` with `h∘f = g∘h` exact.
///
/// The slope of `h` at the fixed pair `(2/3, x0)` is read off the backward
/// trajectory of `(1,1)` under `(f_r^{-1}, g_r^{-1})`; the ratio
/// `(y − x0)/(x − 2/3)` is exactly stable once the `y`-iterate enters the
/// breakpoint-free zone around `x0`, where `(g²)' = 4` identically.
pub fn extend_right(hm: &HalfMap) -> Result<(PLMap, PLMap)> {
    let viols = validate_right(hm);
    if !viols.is_empty() {
        return Err(Error::Validation(join_violations(&viols)));
    }
    let gr = hm.pts.clone();
    let branch = Branch::new(gr.clone())?;
    let x0 = right_fixed_point(&gr).expect("validated");
    // Breakpoint-free zone around the fixed point.
    let v = hm.v();
    let mut c1 = v.clone();
    let mut c2 = Rat::one();
    for (bx, _) in &gr {
        if bx < &x0 && bx > &c1 {
            c1 = bx.clone();
        }
        if bx > &x0 && bx < &c2 {
            c2 = bx.clone();
        }
    }
    let zone_top = c2.min(branch.eval_inverse(&c1)?);
    // Backward trajectory of (1, 1).
    let two_thirds = rat(2, 3);
    let mut x = Rat::one();
    let mut y = Rat::one();
    let mut seed: Option<(Rat, Rat)> = None;
    for _ in 0..256 {
        x = Rat::one() - &x / rat(2, 1);
        y = branch.eval_inverse(&y)?;
        if x > two_thirds && x < Rat::one() {
            if y <= x0 {
                return Err(Error::NoStabilization(format!(
                    "trajectory left the fixed point from below (y = {y} <= x0 = {x0}); \
                     the right half does not extend"
                )));
            }
            if y < zone_top {
                seed = Some((x.clone(), y.clone()));
                break;
            }
        }
    }
    let Some((sx, sy)) = seed else {
        return Err(Error::NoStabilization(
            "backward trajectory never entered the linear zone around the fixed point".into(),
        ));
    };
    // h on [2/3, sx], then propagate with h(2-2x) = g_r(h(x)) for x >= 1/2.
    let mut h: Vec<(Rat, Rat)> = vec![(two_thirds.clone(), x0.clone()), (sx.clone(), sy)];
    let mut lo = two_thirds.clone();
    let mut hi = sx;
    let half = rat(1, 2);
    let two = rat(2, 1);
    for _ in 0..300 {
        if lo.is_zero() && hi == Rat::one() {
            break;
        }
        let src_lo = lo.clone().max(half.clone());
        // Image of the right-branch part of the known interval:
        // [2 - 2 hi, 2 - 2 src_lo].
        let tgt_lo = &two - &hi * &two;
        let tgt_hi = &two - &src_lo * &two;
        let extend = |a: &Rat, b: &Rat, h: &mut Vec<(Rat, Rat)>| {
            // New points on [a, b] with h(y) = g_r(h((2-y)/2)).
            let mut cand: Vec<Rat> = vec![a.clone(), b.clone()];
            for (px, _) in h.iter() {
                let yy = &two - px * &two;
                if &yy >= a && &yy <= b {
                    cand.push(yy);
                }
            }
            let (sa, sb) = ((&two - b) / &two, (&two - a) / &two);
            let (ya, yb) = (poly_eval(h, &sa), poly_eval(h, &sb));
            let (ylo, yhi) = if ya <= yb { (ya, yb) } else { (yb, ya) };
            for (bx, _) in &gr {
                if bx >= &ylo && bx <= &yhi {
                    let src = poly_inv(h, bx);
                    cand.push(&two - src * &two);
                }
            }
            cand.sort();
            cand.dedup();
            let news: Vec<(Rat, Rat)> = cand
                .into_iter()
                .map(|yy| {
                    let src = (&two - &yy) / &two;
                    let val = poly_eval(&gr, &poly_eval(h, &src));
                    (yy, val)
                })
                .collect();
            for p in news {
                match h.binary_search_by(|(px, _)| px.cmp(&p.0)) {
                    Ok(_) => {}
                    Err(i) => h.insert(i, p),
                }
            }
        };
        if tgt_lo < lo {
            let b = lo.clone();
            extend(&tgt_lo, &b, &mut h);
            lo = tgt_lo;
        }
        if tgt_hi > hi {
            let a = hi.clone();
            extend(&a, &tgt_hi, &mut h);
            hi = tgt_hi;
        }
    }
    if !(lo.is_zero() && hi == Rat::one()) {
        return Err(Error::NoStabilization(
            "conjugacy propagation did not reach [0,1]".into(),
        ));
    }
    if !h.windows(2).all(|w| w[0].1 < w[1].1) {
        return Err(Error::Validation(
            "propagation produced a non-monotone conjugacy; the right half does not extend".into(),
        ));
    }
    finish_extension(h, None, Some(gr))
}

/// Builds the missing half from the conjugacy, assembles `g`, and verifies
/// the conjugacy identity exactly.
fn finish_extension(
    h_pts: Vec<(Rat, Rat)>,
    gl: Option<Vec<(Rat, Rat)>>,
    gr: Option<Vec<(Rat, Rat)>>,
) -> Result<(PLMap, PLMap)> {
    let h = PLMap::new(h_pts.clone())
        .map_err(|e| Error::Validation(format!("conjugacy is not a homeomorphism: {e}")))?;
    let half = rat(1, 2);
    let two = rat(2, 1);
    let gl = match gl {
        Some(gl) => gl,
        None => {
            // g_l(h(x)) = h(2x) for x in [0, 1/2].
            let mut cand: Vec<Rat> = vec![Rat::zero(), half.clone()];
            for (px, _) in &h_pts {
                if px <= &half {
                    cand.push(px.clone());
                }
                cand.push(px / &two);
            }
            cand.sort();
            cand.dedup();
            cand.into_iter()
                .map(|x| {
                    let dom = poly_eval(&h_pts, &x);
                    let val = poly_eval(&h_pts, &(&x * &two));
                    (dom, val)
                })
                .collect()
        }
    };
    let gr = match gr {
        Some(gr) => gr,
        None => {
            // g_r(h(x)) = h(2 - 2x) for x in [1/2, 1].
            let mut cand: Vec<Rat> = vec![half.clone(), Rat::one()];
            for (px, _) in &h_pts {
                if px >= &half {
                    cand.push(px.clone());
                }
                let refl = (&two - px) / &two;
                if refl >= half && refl <= Rat::one() {
                    cand.push(refl);
                }
            }
            cand.sort();
            cand.dedup();
            cand.into_iter()
                .map(|x| {
                    let dom = poly_eval(&h_pts, &x);
                    let val = poly_eval(&h_pts, &(&two - &x * &two));
                    (dom, val)
                })
                .collect()
        }
    };
    let mut g_pts = gl;
    for p in gr {
        if g_pts.last().map(|q| q.0 < p.0).unwrap_or(true) {
            g_pts.push(p);
        }
    }
    let g = PLMap::new(g_pts)
        .map_err(|e| Error::Validation(format!("extension is not a valid map: {e}")))?;
    if !check_conjugacy(&g, &h)? {
        return Err(Error::Validation(
            "extension failed the exact conjugacy identity".into(),
        ));
    }
    Ok((g, h))
}

/// Piece counts of the increasing and decreasing parts of a unimodal map.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LinearityType {
    pub p: u32,
    pub q: u32,
}

/// The linearity type `(p, q)` of a unimodal piecewise-linear map, from
/// the canonical breakpoint list.
pub fn linearity_type(g: &PLMap) -> Result<LinearityType> {
    let (left, right) = split_unimodal(g)?;
    Ok(LinearityType {
        p: left.points().len() as u32 - 1,
        q: right.points().len() as u32 - 1,
    })
}

/// Exact inverse of an increasing homeomorphism of `[0,1]`.
fn invert_homeo(h: &PLMap) -> Result<PLMap> {
    let pts = h.breakpoints();
    if pts[0].1 != Rat::zero()
        || pts[pts.len() - 1].1 != Rat::one()
        || !pts.windows(2).all(|w| w[0].1 < w[1].1)
    {
        return Err(Error::InvalidMap("not an increasing homeomorphism".into()));
    }
    PLMap::new(pts.iter().map(|(x, y)| (y.clone(), x.clone())).collect())
}

/// Conjugates the tent map by the increasing homeomorphism with tangent
/// `tangents[i]` on `intervals[i]` (a tiling of `[0,1]`).
fn conjugate_by_tangents(intervals: &[(Rat, Rat)], tangents: &[Rat]) -> Result<(PLMap, PLMap)> {
    let mut order: Vec<usize> = (0..intervals.len()).collect();
    order.sort_by(|&a, &b| intervals[a].0.cmp(&intervals[b].0));
    let mut pts: Vec<(Rat, Rat)> = vec![(Rat::zero(), Rat::zero())];
    for &i in &order {
        let (a, b) = &intervals[i];
        let y = &pts.last().expect("non-empty").1 + &tangents[i] * (b - a);
        pts.push((b.clone(), y));
    }
    let h = PLMap::new(pts)?;
    let g = h.compose(&tent()).compose(&invert_homeo(&h)?);
    Ok((g, h))
}

/// The scale-interval family of the increasing-side recipe for `n`:
/// `[0, 2^{2-n}]` and `[2^t/2^{n-1}, 2^{t+1}/2^{n-1}]` for `t = 1..n-2`.
fn p_family(n: u32) -> Vec<(Rat, Rat)> {
    let denom = 1i64 << (n - 1);
    let mut out = vec![(Rat::zero(), rat(2, denom))];
    for t in 1..=(n - 2) {
        out.push((rat(1i64 << t, denom), rat(1i64 << (t + 1), denom)));
    }
    out
}

/// The mirrored family: `[0, 1/2]` plus the backward `f_r`-images of it
/// stacked around the fixed point `2/3`; the central leftover shares the
/// tangent of the smallest interval.
fn q_family(n: u32) -> Vec<(Rat, Rat)> {
    // towers[j] = f_r^{-j}([0, 1/2]); index t = n-2-j.
    let mut towers: Vec<(Rat, Rat)> = vec![(Rat::zero(), rat(1, 2))];
    for _ in 0..(n - 2) {
        let (a, b) = towers.last().expect("non-empty").clone();
        towers.push((Rat::one() - b / rat(2, 1), Rat::one() - a / rat(2, 1)));
    }
    towers.reverse(); // now towers[t] = Q_t, t = 0..n-2
    let mut covered = towers.clone();
    covered.sort_by(|a, b| a.0.cmp(&b.0));
    let mut gap: Option<(Rat, Rat)> = None;
    for w in covered.windows(2) {
        if w[0].1 < w[1].0 {
            gap = Some((w[0].1.clone(), w[1].0.clone()));
        }
    }
    towers.push(gap.expect("tower leaves exactly one gap"));
    towers
}

/// Builds a unimodal map of linearity type `(p, q)` together with its
/// conjugacy to the tent map.
///
/// Deterministic: integer tangent seeds follow a fixed rule (ratio 2 on
/// the collapsed stretch, then alternating 3, 2, …), and the result is
/// verified by `linearity_type` and `check_conjugacy`; a lexicographic
/// search over small integer tuples backs the mirrored `p > q` family.
pub fn construct_type(p: u32, q: u32) -> Result<(PLMap, PLMap)> {
    if p == 1 && q == 1 {
        return Ok((tent(), PLMap::identity()));
    }
    if p == 1 || q == 1 {
        return Err(Error::Validation(format!(
            "type ({p},{q}) is inadmissible: a single-piece half forces the tent map"
        )));
    }
    if p.max(q) > 10 {
        return Err(Error::OutOfRange(
            "linearity type pieces above 10 unsupported".into(),
        ));
    }
    let n = p.max(q) + 1;
    let m = n as usize - 1; // tangent seeds r_0..r_{n-2}, plus one for the gap
    let intervals = if p <= q { p_family(n) } else { q_family(n) };
    let try_tuple = |r: &[i64]| -> Result<Option<(PLMap, PLMap)>> {
        // In the mirrored family the central gap interval shares r_0.
        let mut seeds: Vec<Rat> = r.iter().map(|&x| rat_i(x)).collect();
        if intervals.len() == m + 1 {
            seeds.push(rat_i(r[0]));
        }
        let mut total = Rat::zero();
        for (i, (a, b)) in intervals.iter().enumerate() {
            total += &seeds[i] * (b - a);
        }
        let tangents: Vec<Rat> = seeds.iter().map(|t| t / &total).collect();
        let (g, h) = conjugate_by_tangents(&intervals, &tangents)?;
        if linearity_type(&g)? == (LinearityType { p, q }) && check_conjugacy(&g, &h)? {
            Ok(Some((g, h)))
        } else {
            Ok(None)
        }
    };
    if p <= q {
        // Seed ratios u_t: 2 on the collapsed stretch t <= q-p, then
        // alternating 3, 2, 3, ...
        let mut r: Vec<i64> = vec![1];
        for t in 0..(m - 1) {
            let t = t as u32;
            let u = if t <= q - p {
                2
            } else if (t - (q - p)) % 2 == 1 {
                3
            } else {
                2
            };
            let prev = *r.last().expect("non-empty");
            r.push(prev * u);
        }
        if let Some(hit) = try_tuple(&r)? {
            return Ok(hit);
        }
    }
    // Deterministic fallback: search consecutive-tangent ratios over
    // {1, 2, 3}, smallest pattern first. Ratios pin the run structure of
    // both slope sequences, so this space is small and suffices.
    let mut ratios = vec![1u8; m - 1];
    loop {
        let mut tuple = vec![1i64; m];
        for t in 0..(m - 1) {
            tuple[t + 1] = tuple[t] * i64::from(ratios[t]);
        }
        if let Some(hit) = try_tuple(&tuple)? {
            return Ok(hit);
        }
        let mut i = m - 1;
        loop {
            if i == 0 {
                return Err(Error::Validation(format!(
                    "no admissible tangent tuple found for type ({p},{q})"
                )));
            }
            i -= 1;
            if ratios[i] < 3 {
                ratios[i] += 1;
                break;
            }
            ratios[i] = 1;
        }
    }
}

/// Witness data for a non-conjugate perturbation.
#[derive(Clone, Debug)]
pub struct PerturbCertificate {
    /// Flattened-peak case: the maximum of `g`; 1 then has no preimage.
    pub peak: Option<Rat>,
    /// Periodic-point case: `(x*, period n, delta)` with `g^{2n}` equal to
    /// the identity on `(x*-delta, x*+delta)` — verified by exact
    /// iteration — while `f^{2n}` has no fixed interval.
    pub periodic: Option<(Rat, u32, Rat)>,
}

/// A unimodal map equal to the tent map outside `(x0-eps, x0+eps)` but not
/// topologically conjugate to it, together with the exact witness.
pub fn perturb_non_conjugate(x0: &Rat, eps: &Rat) -> Result<(PLMap, PerturbCertificate)> {
    if x0.is_negative() || x0 > &Rat::one() {
        return Err(Error::OutOfRange(format!("{x0} outside [0,1]")));
    }
    if eps <= &Rat::zero() {
        return Err(Error::OutOfRange("eps must be positive".into()));
    }
    let half = rat(1, 2);
    if x0 == &half {
        // Flattened peak: the maximum 1 - eps/2 < 1 leaves 1 without
        // preimages.
        let e = eps.clone().min(rat(1, 4));
        let peak = Rat::one() - &e / rat(2, 1);
        let flank = Rat::one() - rat(2, 1) * &e;
        let g = PLMap::new(vec![
            (Rat::zero(), Rat::zero()),
            (&half - &e, flank.clone()),
            (half.clone(), peak.clone()),
            (&half + &e, flank),
            (Rat::one(), Rat::zero()),
        ])?;
        return Ok((
            g,
            PerturbCertificate {
                peak: Some(peak),
                periodic: None,
            },
        ));
    }
    // Shrink the window to keep the peak of f out of it.
    let dist_to_half = (x0 - &half).abs();
    let e = eps.clone().min(dist_to_half);
    let win_lo = (x0 - &e).max(Rat::zero());
    let win_hi = (x0 + &e).min(Rat::one());
    let f = tent();
    // Smallest period with an interior periodic point in the window;
    // within a period, the smallest such point.
    let mut found: Option<(Rat, u32)> = None;
    'outer: for n in 1..=60u32 {
        for fs in f.iterate(n).fixed_points() {
            let FixedSet::Point(x) = fs else { continue };
            if x <= win_lo || x >= win_hi || x.is_zero() || x == Rat::one() {
                continue;
            }
            let mut orbit_point = x.clone();
            let mut minimal = true;
            for _ in 1..n {
                orbit_point = f.eval(&orbit_point)?;
                if orbit_point == x {
                    minimal = false;
                    break;
                }
            }
            if minimal {
                found = Some((x, n));
                break 'outer;
            }
        }
    }
    let Some((x_star, n)) = found else {
        return Err(Error::Validation(
            "no interior periodic point found in the window".into(),
        ));
    };
    // The modification zone must stay clear of the rest of the orbit, of
    // the peak 1/2, and of the window edges, so the tube around the orbit
    // stays linear and g^{2n} = id holds exactly near x*.
    let mut orbit: Vec<Rat> = Vec::new();
    let mut z = x_star.clone();
    for _ in 1..(2 * n) {
        z = f.eval(&z)?;
        orbit.push(z.clone());
    }
    let mut zone = (&x_star - &win_lo).min(&win_hi - &x_star) / rat(2, 1);
    for o in &orbit {
        if o != &x_star {
            zone = zone.min((o - &x_star).abs() / rat(2, 1));
            zone = zone.min((o - &half).abs());
        }
    }
    let delta = &zone / rat(2, 1);
    let fx_star = f.eval(&x_star)?;
    let f_slope = if x_star < half { rat(2, 1) } else { rat(-2, 1) };
    // Local slope f'(x*)/2^n: the orbit revisits the flattened core every
    // n steps, so the slope product of g^n over one period is exactly ±1
    // and g^{2n} is the identity on the core.
    let mut pow2n = Rat::one();
    for _ in 0..n {
        pow2n *= rat(2, 1);
    }
    let s = &f_slope / &pow2n;
    let a = &x_star - &zone;
    let b = &x_star + &zone;
    let mut pts: Vec<(Rat, Rat)> = vec![(Rat::zero(), Rat::zero())];
    if half < a {
        pts.push((half.clone(), Rat::one()));
    }
    pts.push((a.clone(), f.eval(&a)?));
    pts.push((&x_star - &delta, &fx_star - &delta * &s));
    pts.push((&x_star + &delta, &fx_star + &delta * &s));
    pts.push((b.clone(), f.eval(&b)?));
    if half > b {
        pts.push((half.clone(), Rat::one()));
    }
    pts.push((Rat::one(), Rat::zero()));
    let g = PLMap::new(pts)?;
    if g.is_unimodal().is_none() {
        return Err(Error::Validation("perturbation lost unimodality".into()));
    }
    // Exact certificate: g^{2n} has a diagonal segment through x*, while
    // f^{2n} has none.
    let g_pow = g.iterate(2 * n);
    let has_interval = g_pow.fixed_points().iter().any(|fs| match fs {
        FixedSet::Interval(a, b) => a <= &x_star && &x_star <= b,
        FixedSet::Point(_) => false,
    });
    if !has_interval {
        return Err(Error::Validation(
            "perturbation certificate failed: g^{2n} has no diagonal segment".into(),
        ));
    }
    if f.iterate(2 * n)
        .fixed_points()
        .iter()
        .any(|fs| matches!(fs, FixedSet::Interval(..)))
    {
        return Err(Error::Validation(
            "tent iterate unexpectedly has a fixed interval".into(),
        ));
    }
    Ok((
        g,
        PerturbCertificate {
            peak: None,
            periodic: Some((x_star, n, delta)),
        },
    ))
}

/// Exact conjugacy check: `h∘f = g∘h` as canonical piecewise-linear maps,
/// for an increasing homeomorphism `h` fixing 0 and 1.
pub fn check_conjugacy(g: &PLMap, h: &PLMap) -> Result<bool> {
    let pts = h.breakpoints();
    if pts[0].1 != Rat::zero()
        || pts[pts.len() - 1].1 != Rat::one()
        || !pts.windows(2).all(|w| w[0].1 < w[1].1)
    {
        return Err(Error::InvalidMap(
            "conjugator must be an increasing homeomorphism fixing 0 and 1".into(),
        ));
    }
    let f = tent();
    Ok(h.compose(&f) == g.compose(h))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plmap::skew_tent;

    fn fixture_left() -> HalfMap {
        HalfMap::left(vec![
            (rat_i(0), rat_i(0)),
            (rat(1, 4), rat(1, 2)),
            (rat(1, 2), rat(5, 8)),
            (rat(5, 8), rat_i(1)),
        ])
        .unwrap()
    }

    #[test]
    fn validate_left_slope_rule() {
        assert!(validate_left(&fixture_left()).is_empty());
        let bad = HalfMap::left(vec![(rat_i(0), rat_i(0)), (rat(1, 3), rat_i(1))]).unwrap();
        assert_eq!(validate_left(&bad), vec![Violation::SlopeAtZero(rat(3, 1))]);
        let non_monotone = HalfMap::left(vec![
            (rat_i(0), rat_i(0)),
            (rat(1, 4), rat(1, 2)),
            (rat(1, 2), rat(1, 4)),
            (rat(5, 8), rat_i(1)),
        ])
        .unwrap();
        assert!(!validate_left(&non_monotone).is_empty());
    }

    #[test]
    fn validate_right_slope_product() {
        let tent_right = HalfMap::right(vec![(rat(1, 2), rat_i(1)), (rat_i(1), rat_i(0))]).unwrap();
        assert!(validate_right(&tent_right).is_empty());
        // Slopes -1 and -4 meeting exactly at the fixed point x0 = 7/10.
        let ok = HalfMap::right(vec![
            (rat(1, 2), rat_i(1)),
            (rat(3, 5), rat(4, 5)),
            (rat(7, 10), rat(7, 10)),
            (rat(3, 4), rat(1, 2)),
            (rat_i(1), rat_i(0)),
        ])
        .unwrap();
        assert!(validate_right(&ok).is_empty());
        // A single slope -3 through the fixed point: 9 != 4.
        let bad = HalfMap::right(vec![
            (rat(1, 2), rat_i(1)),
            (rat(5, 6), rat(1, 6)),
            (rat_i(1), rat_i(0)),
        ])
        .unwrap();
        let viols = validate_right(&bad);
        assert!(!viols.is_empty());
    }

    #[test]
    fn slope_at_zero_values() {
        assert_eq!(slope_at_zero(&fixture_left()).unwrap(), rat(2, 1));
        let tent_left = HalfMap::left(vec![(rat_i(0), rat_i(0)), (rat(1, 2), rat_i(1))]).unwrap();
        assert_eq!(slope_at_zero(&tent_left).unwrap(), rat(1, 1));
        // Skew-tent left half has slope 1/v != 2: rejected by validation.
        let skew = HalfMap::left(vec![(rat_i(0), rat_i(0)), (rat(3, 4), rat_i(1))]).unwrap();
        assert!(slope_at_zero(&skew).is_err());
    }

    #[test]
    fn extend_left_reproduces_fixture() {
        let (g, h) = extend_left(&fixture_left()).unwrap();
        // The conjugacy breaks exactly at (1/4, 1/2) and (1/2, 5/8).
        assert_eq!(
            h.breakpoints(),
            &[
                (rat_i(0), rat_i(0)),
                (rat(1, 4), rat(1, 2)),
                (rat(1, 2), rat(5, 8)),
                (rat_i(1), rat_i(1)),
            ]
        );
        // The decreasing half breaks exactly at (13/16, 5/8), (29/32, 1/2).
        let right = HalfMap::from_unimodal(&g, Side::Right).unwrap();
        assert_eq!(
            right.points(),
            &[
                (rat(5, 8), rat_i(1)),
                (rat(13, 16), rat(5, 8)),
                (rat(29, 32), rat(1, 2)),
                (rat_i(1), rat_i(0)),
            ]
        );
        assert!(check_conjugacy(&g, &h).unwrap());
    }

    #[test]
    fn extend_left_tent_is_identity() {
        let tent_left = HalfMap::left(vec![(rat_i(0), rat_i(0)), (rat(1, 2), rat_i(1))]).unwrap();
        let (g, h) = extend_left(&tent_left).unwrap();
        assert_eq!(g, tent());
        assert_eq!(h, PLMap::identity());
    }

    #[test]
    fn extend_right_tent_is_identity() {
        let tent_right = HalfMap::right(vec![(rat(1, 2), rat_i(1)), (rat_i(1), rat_i(0))]).unwrap();
        let (g, h) = extend_right(&tent_right).unwrap();
        assert_eq!(g, tent());
        assert_eq!(h, PLMap::identity());
    }

    #[test]
    fn extend_right_round_trips_fixture() {
        let (g, _) = extend_left(&fixture_left()).unwrap();
        let right = HalfMap::from_unimodal(&g, Side::Right).unwrap();
        let (g2, h2) = extend_right(&right).unwrap();
        assert_eq!(g2, g);
        assert!(check_conjugacy(&g2, &h2).unwrap());
        let left = HalfMap::from_unimodal(&g2, Side::Left).unwrap();
        assert_eq!(left.points(), fixture_left().points());
    }

    #[test]
    fn extensions_are_deterministic() {
        let (g1, h1) = extend_left(&fixture_left()).unwrap();
        let (g2, h2) = extend_left(&fixture_left()).unwrap();
        assert_eq!(g1, g2);
        assert_eq!(h1, h2);
        // Perturbing a breakpoint changes the output.
        let other = HalfMap::left(vec![
            (rat_i(0), rat_i(0)),
            (rat(1, 4), rat(1, 2)),
            (rat(1, 2), rat(11, 16)),
            (rat(5, 8), rat_i(1)),
        ])
        .unwrap();
        let (g3, _) = extend_left(&other).unwrap();
        assert_ne!(g1, g3);
    }

    #[test]
    fn linearity_types_of_basics() {
        assert_eq!(
            linearity_type(&tent()).unwrap(),
            LinearityType { p: 1, q: 1 }
        );
        assert_eq!(
            linearity_type(&skew_tent(&rat(2, 7)).unwrap()).unwrap(),
            LinearityType { p: 1, q: 1 }
        );
        let (g, _) = extend_left(&fixture_left()).unwrap();
        assert_eq!(linearity_type(&g).unwrap(), LinearityType { p: 3, q: 3 });
    }

    #[test]
    fn construct_small_types() {
        assert_eq!(construct_type(1, 1).unwrap().0, tent());
        for (p, q) in [(2, 2), (2, 3), (3, 2), (3, 3), (2, 5), (4, 3)] {
            let (g, h) = construct_type(p, q).unwrap();
            assert_eq!(
                linearity_type(&g).unwrap(),
                LinearityType { p, q },
                "type ({p},{q})"
            );
            assert!(check_conjugacy(&g, &h).unwrap(), "conjugacy ({p},{q})");
        }
        assert!(construct_type(1, 3).is_err());
        assert!(construct_type(4, 1).is_err());
    }

    #[test]
    fn construct_round_trips_through_extension() {
        for (p, q) in [(2, 2), (3, 2), (2, 4)] {
            let (g, _) = construct_type(p, q).unwrap();
            let left = HalfMap::from_unimodal(&g, Side::Left).unwrap();
            let (g_l, _) = extend_left(&left).unwrap();
            assert_eq!(g_l, g, "left round trip ({p},{q})");
            let right = HalfMap::from_unimodal(&g, Side::Right).unwrap();
            let (g_r, _) = extend_right(&right).unwrap();
            assert_eq!(g_r, g, "right round trip ({p},{q})");
        }
    }

    #[test]
    fn extension_invariants() {
        // Every construction satisfies g'(0) = 2 and slope product 4.
        for (p, q) in [(2, 2), (2, 3), (3, 3)] {
            let (g, _) = construct_type(p, q).unwrap();
            let left = HalfMap::from_unimodal(&g, Side::Left).unwrap();
            assert!(validate_left(&left).is_empty());
            let right = HalfMap::from_unimodal(&g, Side::Right).unwrap();
            assert!(validate_right(&right).is_empty());
        }
    }

    #[test]
    fn perturb_peak_case() {
        let (g, cert) = perturb_non_conjugate(&rat(1, 2), &rat(1, 8)).unwrap();
        assert_eq!(cert.peak, Some(rat(15, 16)));
        assert!(g.preimages(&rat_i(1)).unwrap().points.is_empty());
        assert!(g.is_unimodal().is_some());
        // Equal to the tent map outside the window.
        assert_eq!(g.eval(&rat(1, 4)).unwrap(), rat(1, 2));
        assert_eq!(g.eval(&rat(7, 8)).unwrap(), rat(1, 4));
    }

    #[test]
    fn perturb_fixed_point_case() {
        let (g, cert) = perturb_non_conjugate(&rat(2, 3), &rat(1, 10)).unwrap();
        let (x_star, n, _delta) = cert.periodic.unwrap();
        assert_eq!(x_star, rat(2, 3));
        assert_eq!(n, 1);
        // Local slope is -1: the unique slope for which the exact second
        // iterate is the identity near the fixed point.
        let near = g.eval(&rat(2, 3)).unwrap() - g.eval(&(rat(2, 3) + rat(1, 1000))).unwrap();
        assert_eq!(near, rat(1, 1000));
        // g^2 = id near 2/3.
        let g2 = g.iterate(2);
        assert!(g2
            .fixed_points()
            .iter()
            .any(|fs| matches!(fs, FixedSet::Interval(a, b) if a < &rat(2, 3) && b > &rat(2, 3))));
        assert!(tent()
            .iterate(2)
            .fixed_points()
            .iter()
            .all(|fs| matches!(fs, FixedSet::Point(_))));
        // Equal to the tent outside the window, unimodal inside.
        assert!(g.is_unimodal().is_some());
        assert_eq!(g.eval(&rat(1, 2)).unwrap(), rat_i(1));
        assert_eq!(g.eval(&rat(9, 10)).unwrap(), rat(1, 5));
    }

    #[test]
    fn perturb_window_without_named_point() {
        // Window near 0: a periodic point of some higher period is found.
        let (g, cert) = perturb_non_conjugate(&rat(1, 20), &rat(1, 25)).unwrap();
        let (x_star, n, _) = cert.periodic.unwrap();
        assert!(x_star > rat(1, 100) && x_star < rat(1, 10));
        assert!(n >= 4);
        assert!(g.is_unimodal().is_some());
    }

    #[test]
    fn conjugacy_check_examples() {
        assert!(check_conjugacy(&tent(), &PLMap::identity()).unwrap());
        // The worked fixture: h breaking at (1/2, 3/4) sends the tent map
        // to the map through (3/8, 3/4), (3/4, 1), (7/8, 3/4).
        let h = PLMap::new(vec![
            (rat_i(0), rat_i(0)),
            (rat(1, 2), rat(3, 4)),
            (rat_i(1), rat_i(1)),
        ])
        .unwrap();
        let g = PLMap::new(vec![
            (rat_i(0), rat_i(0)),
            (rat(3, 8), rat(3, 4)),
            (rat(3, 4), rat_i(1)),
            (rat(7, 8), rat(3, 4)),
            (rat_i(1), rat_i(0)),
        ])
        .unwrap();
        assert!(check_conjugacy(&g, &h).unwrap());
        // h_n is only a grid conjugacy: off-grid composition differs.
        let sys = crate::conjugacy::ConjSystem::new(rat(3, 4)).unwrap();
        for n in 2..=6 {
            let hn = sys.h_n_approx(n).unwrap();
            assert!(!check_conjugacy(&skew_tent(&rat(3, 4)).unwrap(), &hn).unwrap());
        }
        // Non-homeomorphisms are rejected.
        assert!(check_conjugacy(&tent(), &tent()).is_err());
    }
}

//! The conjugacy `h` between the tent map and a skew tent map.
//!
//! `h` is pinned down by `h(0)=0`, `h(1)=1` and the recurrence
//! `h(x) = v·h(2x)` for `x ≤ 1/2`, `h(x) = 1 − (1−v)·h(2−2x)` for
//! `x > 1/2`. On dyadic rationals the recurrence terminates and the value is
//! exact; elsewhere `h` is the limit of the piecewise-linear interpolants
//! `h_n` through the grids `A_n → B_n`, and [`ConjSystem::h_eval`] returns a
//! certified enclosure instead of a bare float.

use std::sync::{Arc, Mutex};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::exactnum::{Dyadic, Rat};
use crate::plmap::{split_unimodal, PLMap};
use crate::{Error, Result};

/// One refinement level of a grid: `A_n` (dyadics) or `B_n` (rationals).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridLevel<T> {
    pub level: u32,
    pub points: Vec<T>,
}

/// The grid `A_n = {k/2^(n-1) : 0 ≤ k ≤ 2^(n-1)}`, i.e. the solutions of
/// `f^n(x) = 0` for the tent map.
pub fn build_a(n: u32) -> Result<GridLevel<Dyadic>> {
    if n < 1 {
        return Err(Error::OutOfRange("grid level must be at least 1".into()));
    }
    if n > 34 {
        return Err(Error::OutOfRange(format!(
            "grid level {n} too large to enumerate"
        )));
    }
    let e = n - 1;
    let points = (0..=(1u64 << e))
        .map(|k| Dyadic::from_index(k, e).expect("k/2^e in range"))
        .collect();
    Ok(GridLevel { level: n, points })
}

/// The grid `B_n` of solutions of `g^n(x) = 0`, computed by repeated branch
/// preimages of the previous level. Requires `g` unimodal with strictly
/// monotone branches and `g(0) = g(1) = 0`, `g(peak) = 1`.
pub fn build_b(g: &PLMap, n: u32) -> Result<GridLevel<Rat>> {
    if n < 1 {
        return Err(Error::OutOfRange("grid level must be at least 1".into()));
    }
    if n > 22 {
        return Err(Error::OutOfRange(format!(
            "grid level {n} too large to materialize (2^{} points)",
            n - 1
        )));
    }
    let (left, right) = split_unimodal(g)?;
    if g.eval(&Rat::zero()).expect("0 in range") != Rat::zero()
        || g.eval(&Rat::one()).expect("1 in range") != Rat::zero()
    {
        return Err(Error::InvalidMap("need g(0) = g(1) = 0".into()));
    }
    let mut level: Vec<Rat> = vec![Rat::zero(), Rat::one()];
    for _ in 1..n {
        let mut next: Vec<Rat> = Vec::with_capacity(2 * level.len());
        for y in &level {
            next.push(left.eval_inverse(y)?);
            next.push(right.eval_inverse(y)?);
        }
        next.sort();
        next.dedup();
        level = next;
    }
    Ok(GridLevel {
        level: n,
        points: level,
    })
}

/// Certified enclosure of a limit value: `value ± error_bound`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Enclosure {
    pub value: Rat,
    pub error_bound: Rat,
}

/// Maximum gaps `d_1..d_n` of the grids `B_k`, with contraction ratios.
#[derive(Clone, Debug)]
pub struct GapReport {
    pub gaps: Vec<Rat>,
    pub ratios: Vec<Rat>,
}

/// The pair (tent, skew tent with peak `v`) together with cached `B` levels.
#[derive(Debug)]
pub struct ConjSystem {
    v: Rat,
    // cache[i] holds B_{i+1}; extended on demand under the lock.
    cache: Mutex<Vec<Arc<Vec<Rat>>>>,
}

impl ConjSystem {
    pub fn new(v: Rat) -> Result<ConjSystem> {
        if v <= Rat::zero() || v >= Rat::one() {
            return Err(Error::OutOfRange(format!(
                "skew parameter {v} outside (0,1)"
            )));
        }
        Ok(ConjSystem {
            v,
            cache: Mutex::new(Vec::new()),
        })
    }

    pub fn v(&self) -> &Rat {
        &self.v
    }

    /// Exact `h(x)` for dyadic `x` (including `x = 1`) via the recurrence.
    ///
    /// At `x = 1/2` both recurrence branches agree on the value `v`; the
    /// `x ≤ 1/2` branch is the one taken.
    pub fn h_on_dyadic(&self, x: &Dyadic) -> Rat {
        // Walk the orbit of x under the tent map, recording the branch,
        // until it reaches 0 or 1, then fold the recurrence back.
        let mut num = x.num().clone();
        let mut exp = x.exp();
        let mut branches: Vec<bool> = Vec::with_capacity(exp as usize + 1);
        while exp > 0 {
            let half = BigUint::one() << (exp - 1);
            if num <= half {
                branches.push(false); // left: h = v * h(2x)
                exp -= 1;
            } else {
                branches.push(true); // right: h = 1 - (1-v) * h(2-2x)
                num = (BigUint::one() << exp) - num;
                exp -= 1;
            }
        }
        let mut h = if num.is_zero() {
            Rat::zero()
        } else {
            Rat::one()
        };
        let one_minus_v = Rat::one() - &self.v;
        for right in branches.into_iter().rev() {
            h = if right {
                Rat::one() - &one_minus_v * h
            } else {
                &self.v * h
            };
        }
        h
    }

    /// `B_n` for the skew tent, cached: the exact images `h(A_n)` in order.
    pub fn level_b(&self, n: u32) -> Result<Arc<Vec<Rat>>> {
        if n < 1 {
            return Err(Error::OutOfRange("grid level must be at least 1".into()));
        }
        if n > 22 {
            return Err(Error::OutOfRange(format!(
                "grid level {n} too large to materialize (2^{} points)",
                n - 1
            )));
        }
        let mut cache = self.cache.lock().expect("cache lock");
        while cache.len() < n as usize {
            let k = cache.len() as u32 + 1;
            let points: Vec<Rat> = if k == 1 {
                vec![Rat::zero(), Rat::one()]
            } else {
                // Refine the previous level: keep old points at even
                // positions, insert h of the new odd dyadics between.
                let prev = cache[k as usize - 2].clone();
                let e = k - 1;
                let mut points = Vec::with_capacity((1usize << e) + 1);
                for (i, p) in prev.iter().enumerate() {
                    if i > 0 {
                        let mid = Dyadic::from_index(2 * i as u64 - 1, e).expect("in range");
                        points.push(self.h_on_dyadic(&mid));
                    }
                    points.push(p.clone());
                }
                points
            };
            cache.push(Arc::new(points));
        }
        Ok(cache[n as usize - 1].clone())
    }

    /// The piecewise-linear interpolant `h_n` through `(A_n, B_n)`.
    pub fn h_n_approx(&self, n: u32) -> Result<PLMap> {
        let b = self.level_b(n)?;
        let e = n - 1;
        let pts: Vec<(Rat, Rat)> = b
            .iter()
            .enumerate()
            .map(|(k, y)| (Rat::new(BigInt::from(k), BigInt::one() << e), y.clone()))
            .collect();
        PLMap::new(pts)
    }

    /// Certified evaluation of `h` at any rational `x`.
    ///
    /// Dyadic `x` short-circuits to the exact recurrence with zero error.
    /// Otherwise `x` is bracketed between consecutive points of `A_n` for
    /// growing `n`; since `h` is increasing, the midpoint of the image
    /// bracket is within half the bracket height of the true value.
    pub fn h_eval(&self, x: &Rat, tol: &Rat) -> Result<Enclosure> {
        if x.is_negative() || x > &Rat::one() {
            return Err(Error::OutOfRange(format!("{x} outside [0,1]")));
        }
        if tol <= &Rat::zero() {
            return Err(Error::OutOfRange("tolerance must be positive".into()));
        }
        if let Some(d) = Dyadic::from_rat(x) {
            return Ok(Enclosure {
                value: self.h_on_dyadic(&d),
                error_bound: Rat::zero(),
            });
        }
        let two = Rat::from_integer(BigInt::from(2));
        let mut e = 3u32; // bracket at A_{e+1}
        loop {
            let scale = Rat::from_integer(BigInt::one() << e);
            let k = (x * &scale).floor().to_integer();
            let left = Dyadic::new(k.to_biguint().expect("x >= 0"), e).expect("in range");
            let right = Dyadic::new((k + 1u32).to_biguint().expect("positive"), e)
                .expect("x < 1 so k+1 <= 2^e");
            let hl = self.h_on_dyadic(&left);
            let hr = self.h_on_dyadic(&right);
            let half_gap = (&hr - &hl) / &two;
            if &half_gap < tol {
                return Ok(Enclosure {
                    value: (&hl + &hr) / &two,
                    error_bound: half_gap,
                });
            }
            e += e.max(4) / 2;
        }
    }
}

/// Conditional conjugacy value on dyadics for a general unimodal `g` with
/// strictly monotone branches, via branch-inverse recursion.
pub fn h_general_on_dyadic(g: &PLMap, x: &Dyadic) -> Result<Rat> {
    let (left, right) = split_unimodal(g)?;
    if g.eval(&Rat::zero())? != Rat::zero() || g.eval(&Rat::one())? != Rat::zero() {
        return Err(Error::InvalidMap("need g(0) = g(1) = 0".into()));
    }
    let mut num = x.num().clone();
    let mut exp = x.exp();
    let mut branches: Vec<bool> = Vec::with_capacity(exp as usize + 1);
    while exp > 0 {
        let half = BigUint::one() << (exp - 1);
        if num <= half {
            branches.push(false);
        } else {
            branches.push(true);
            num = (BigUint::one() << exp) - num;
        }
        exp -= 1;
    }
    let mut h = if num.is_zero() {
        Rat::zero()
    } else {
        Rat::one()
    };
    for right_branch in branches.into_iter().rev() {
        h = if right_branch {
            right.eval_inverse(&h)?
        } else {
            left.eval_inverse(&h)?
        };
    }
    Ok(h)
}

/// Maximum gaps `d_k` of `B_k` for `k = 1..=n`, plus consecutive ratios
/// `d_{k+1}/d_k` — the computable face of the density criterion.
pub fn ulam_gap_report(g: &PLMap, n: u32) -> Result<GapReport> {
    let mut gaps = Vec::with_capacity(n as usize);
    for k in 1..=n {
        let level = build_b(g, k)?;
        let d = level
            .points
            .windows(2)
            .map(|w| &w[1] - &w[0])
            .max()
            .expect("non-empty level");
        gaps.push(d);
    }
    let ratios = gaps.windows(2).map(|w| &w[1] / &w[0]).collect();
    Ok(GapReport { gaps, ratios })
}

/// Absolute slope of the `k`-th monotone branch of the `n`-th iterate of
/// the skew tent map, `1 ≤ k ≤ 2^n`, from the binary digits of `k − 1`:
/// factor `1/v` when a digit repeats its predecessor (with a leading 0
/// prepended), `1/(1−v)` when it changes.
pub fn zeta(n: u32, k: u64, v: &Rat) -> Result<Rat> {
    if n == 0 || n > 62 {
        return Err(Error::OutOfRange(format!("branch level {n} unsupported")));
    }
    if k < 1 || k > (1u64 << n) {
        return Err(Error::OutOfRange(format!(
            "branch index {k} outside 1..=2^{n}"
        )));
    }
    let inv_v = Rat::one() / v;
    let inv_w = Rat::one() / (Rat::one() - v);
    let bits = k - 1;
    let mut prev = 0u64;
    let mut acc = Rat::one();
    for i in (0..n).rev() {
        let digit = (bits >> i) & 1;
        acc *= if digit == prev { &inv_v } else { &inv_w };
        prev = digit;
    }
    Ok(acc)
}

/// Partial sum of the explicit branch-slope series:
/// `β(⌊2^n x⌋, n) = Σ_{t=1..⌊2^n x⌋} 1/ζ_{n,t}`.
///
/// For dyadic `x` with `2^n x` integral this equals `h(x)` exactly.
pub fn h_explicit(v: &Rat, x: &Rat, n: u32) -> Result<Rat> {
    if x.is_negative() || x > &Rat::one() {
        return Err(Error::OutOfRange(format!("{x} outside [0,1]")));
    }
    if n == 0 || n > 24 {
        return Err(Error::OutOfRange(format!(
            "series level {n} unsupported (2^n terms)"
        )));
    }
    let scale = Rat::from_integer(BigInt::one() << n);
    let m = (x * scale)
        .floor()
        .to_integer()
        .to_u64()
        .expect("0 <= floor(2^n x) <= 2^n");
    let mut acc = Rat::zero();
    for t in 1..=m {
        acc += Rat::one() / zeta(n, t, v)?;
    }
    Ok(acc)
}

//! Self-semiconjugations of the tent map.
//!
//! The nonconstant continuous solutions of `ξ∘f = f∘ξ` are exactly the
//! sawtooth maps with `k` teeth; their restrictions to the grids `A_n` sit
//! inside the larger set of *admissible* grid maps (those satisfying the
//! equation pointwise on `A_n`). The census here enumerates the admissible
//! maps by brute force, reports the claimed closed-form counts alongside
//! with mismatch flags, and transports everything to skew-tent
//! semiconjugations through the conjugacy `h`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::conjugacy::{ConjSystem, Enclosure};
use crate::exactnum::{rat, Rat};
use crate::plmap::{tent, PLMap};
use crate::{Error, Result};

/// The sawtooth self-semiconjugation with `k` teeth: breakpoints at `t/k`
/// with values alternating `0, 1, 0, …`.
pub fn zigzag(k: u32) -> Result<PLMap> {
    if k < 1 {
        return Err(Error::OutOfRange("need k >= 1".into()));
    }
    let pts = (0..=k)
        .map(|t| (rat(i64::from(t), i64::from(k)), rat(i64::from(t % 2), 1)))
        .collect();
    PLMap::new(pts)
}

/// Exact check of `ξ∘f = f∘ξ` for the tent map.
pub fn is_self_semiconj(xi: &PLMap) -> bool {
    let f = tent();
    xi.compose(&f) == f.compose(xi)
}

/// A grid map `ξ: A_n → [0,1]` given by its values in grid order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct GridSemiconj {
    pub n: u32,
    pub values: Vec<Rat>,
}

impl GridSemiconj {
    /// Pointwise check of `ξ(f(x)) = f(ξ(x))` on `A_n`.
    pub fn is_admissible(&self) -> bool {
        let f = tent();
        let e = self.n - 1;
        let count = 1u64 << e;
        for k in 0..=count {
            let x = Rat::new(BigInt::from(k), BigInt::one() << e);
            let fx = f.eval(&x).expect("grid point in range");
            let fx_index = (&fx * Rat::from_integer(BigInt::one() << e)).to_integer();
            let fx_index = usize::try_from(fx_index.magnitude().clone()).expect("grid index fits");
            let lhs = &self.values[fx_index];
            let rhs = f.eval(&self.values[k as usize]).expect("value in range");
            if lhs != &rhs {
                return false;
            }
        }
        true
    }
}

/// Census of admissible grid maps, with the claimed closed-form count for
/// comparison.
#[derive(Clone, Debug)]
pub struct AdmissibleCensus {
    pub tables: Vec<GridSemiconj>,
    /// `Σ 2^{k+1} C(n,k) = 2·3^n`, the claimed closed-form count.
    pub formula_count: BigInt,
    /// Whether the enumerated count matches the claimed one (it does not
    /// for small `n`; the flag keeps the discrepancy visible).
    pub matches_formula: bool,
}

/// Exhaustively enumerates the admissible maps `ξ: A_n → [0,1]`:
/// `ξ(0) ∈ {0, 2/3}` and, walking points in an order where `f(x)` precedes
/// `x`, each `ξ(x)` ranges over the `f`-preimages of `ξ(f(x))` in
/// increasing order. Tables come out sorted by value vector.
pub fn enumerate_admissible(n: u32) -> Result<AdmissibleCensus> {
    if !(1..=5).contains(&n) {
        return Err(Error::OutOfRange(
            "admissible census supported for 1 <= n <= 5".into(),
        ));
    }
    let e = n - 1;
    let count = (1usize << e) + 1;
    let f = tent();
    // Depth of k/2^e under f: steps to reach 0.
    let depth = |k: u64| -> u32 {
        if k == 0 {
            return 0;
        }
        let mut k = k;
        let mut exp = e;
        while exp > 0 && k.is_multiple_of(2) {
            k /= 2;
            exp -= 1;
        }
        exp + 1
    };
    let mut order: Vec<u64> = (0..count as u64).collect();
    order.sort_by_key(|&k| (depth(k), k));
    let grid: Vec<Rat> = (0..count)
        .map(|k| Rat::new(BigInt::from(k), BigInt::one() << e))
        .collect();
    struct Search<'a> {
        order: &'a [u64],
        grid: &'a [Rat],
        f: &'a PLMap,
        n: u32,
        values: Vec<Option<Rat>>,
        tables: Vec<GridSemiconj>,
    }
    impl Search<'_> {
        fn index_of(&self, x: &Rat) -> usize {
            let e = self.n - 1;
            let idx = (x * Rat::from_integer(BigInt::one() << e)).to_integer();
            usize::try_from(idx.magnitude().clone()).expect("grid index fits")
        }
        fn assign(&mut self, slot: usize) {
            if slot == self.order.len() {
                let vals: Vec<Rat> = self
                    .values
                    .iter()
                    .map(|v| v.clone().expect("assigned"))
                    .collect();
                self.tables.push(GridSemiconj {
                    n: self.n,
                    values: vals,
                });
                return;
            }
            let k = self.order[slot] as usize;
            let choices: Vec<Rat> = if k == 0 {
                vec![Rat::zero(), rat(2, 3)]
            } else {
                let fx = self.f.eval(&self.grid[k]).expect("in range");
                let target = self.values[self.index_of(&fx)]
                    .clone()
                    .expect("parent assigned first");
                self.f.preimages(&target).expect("in range").points
            };
            for c in choices {
                self.values[k] = Some(c);
                self.assign(slot + 1);
            }
            self.values[k] = None;
        }
    }
    let mut search = Search {
        order: &order,
        grid: &grid,
        f: &f,
        n,
        values: vec![None; count],
        tables: Vec::new(),
    };
    search.assign(0);
    let mut tables = search.tables;
    tables.sort();
    debug_assert!(tables.iter().all(GridSemiconj::is_admissible));
    let formula_count = admissible_count_formula(n);
    let matches_formula = BigInt::from(tables.len()) == formula_count;
    Ok(AdmissibleCensus {
        tables,
        formula_count,
        matches_formula,
    })
}

/// The claimed closed-form count `Σ_{k=0}^n 2^{k+1} C(n,k)` (= `2·3^n`).
/// Reported for comparison only; direct enumeration disagrees with it at
/// small `n`.
pub fn admissible_count_formula(n: u32) -> BigInt {
    let mut sum = BigInt::zero();
    let mut binom = BigInt::one();
    for k in 0..=n {
        sum += (BigInt::one() << (k + 1)) * &binom;
        if k < n {
            binom = binom * (n - k) / (k + 1);
        }
    }
    sum
}

/// One continuable grid table with its smallest sawtooth witness.
#[derive(Clone, Debug)]
pub struct ContinuableEntry {
    pub table: GridSemiconj,
    /// Smallest `k` with `zigzag(k)` restricting to this table.
    pub witness_k: u32,
    /// The witness satisfies the slope congruence `k(2s+1) ≡ ±p (mod 2^n)`
    /// read off the first refined grid point.
    pub congruence_ok: bool,
}

/// Census of continuable grid maps, with the claimed count `2^{n-1}` for
/// comparison.
#[derive(Clone, Debug)]
pub struct ContinuableCensus {
    pub entries: Vec<ContinuableEntry>,
    pub claimed_count: u64,
    pub matches_claimed: bool,
}

/// Distinct restrictions of the sawtooth family to `A_n`, each with its
/// smallest witness `k ≤ 2^{n+1}` and a congruence cross-check.
pub fn enumerate_continuable(n: u32) -> Result<ContinuableCensus> {
    if !(1..=12).contains(&n) {
        return Err(Error::OutOfRange(
            "continuable census supported for 1 <= n <= 12".into(),
        ));
    }
    let e = n - 1;
    let count = (1u64 << e) + 1;
    let modulus = 1u64 << n;
    let mut seen: BTreeMap<Vec<Rat>, u32> = BTreeMap::new();
    for k in 1..=(1u32 << (n + 1)) {
        let xi = zigzag(k)?;
        let values: Vec<Rat> = (0..count)
            .map(|t| {
                let x = Rat::new(BigInt::from(t), BigInt::one() << e);
                xi.eval(&x).expect("grid point in range")
            })
            .collect();
        seen.entry(values).or_insert(k);
    }
    let entries = seen
        .into_iter()
        .map(|(values, witness_k)| {
            let table = GridSemiconj { n, values };
            // Congruence at the first refined point: alpha_{n,1} = 1/2^{n-1}
            // (so 2s+1 = 1), image alpha_{n,p}.
            let p_rat = &table.values[1] * Rat::from_integer(BigInt::one() << e);
            let p = u64::try_from(p_rat.to_integer().magnitude().clone())
                .expect("continuable tables take grid values");
            let k_mod = u64::from(witness_k) % modulus;
            let congruence_ok = k_mod == p % modulus || k_mod == (modulus - p % modulus) % modulus;
            ContinuableEntry {
                table,
                witness_k,
                congruence_ok,
            }
        })
        .collect::<Vec<_>>();
    let claimed_count = 1u64 << (n - 1);
    let matches_claimed = entries.len() as u64 == claimed_count;
    Ok(ContinuableCensus {
        entries,
        claimed_count,
        matches_claimed,
    })
}

/// Semiconjugation of the tent map with the skew tent through `h`:
/// `η(x) = h(zigzag_k(x))`, evaluated as a certified enclosure (exact on
/// dyadics).
pub fn semiconj_to_skew(v: &Rat, k: u32, x: &Rat, tol: &Rat) -> Result<Enclosure> {
    if x.is_negative() || x > &Rat::one() {
        return Err(Error::OutOfRange(format!("{x} outside [0,1]")));
    }
    let xi = zigzag(k)?;
    let sys = ConjSystem::new(v.clone())?;
    sys.h_eval(&xi.eval(x)?, tol)
}

/// Prefix-consistent map on binary sequences encoding an admissible grid
/// map via the branch-word correspondence.
///
/// `leaf_images` maps every length-`n` word to its image word; images of
/// shorter prefixes are the prefixes of the leaf images. The only forcing
/// that survives scrutiny is at the first position — a leading 0 forces
/// the leading image digit `i0` — and even that is subsumed by
/// [`BitSeqMap::value_table`]'s well-definedness filter: the branch-word
/// encoding of grid points is not injective, and a coherent grid map must
/// decode to the same value along every encoding of every point, at every
/// word length. Maps that survive that filter are automatically
/// admissible, because the image of a truncated word is the truncated
/// image, which is exactly `ξ(f(x)) = f(ξ(x))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitSeqMap {
    pub n: u32,
    pub i0: u8,
    pub leaf_images: BTreeMap<Vec<u8>, Vec<u8>>,
}

fn decode_point(bits: &[u8], x0: &Rat) -> Rat {
    let two = rat(2, 1);
    bits.iter().fold(x0.clone(), |acc, &b| {
        if b == 0 {
            acc / &two
        } else {
            Rat::one() - acc / &two
        }
    })
}

impl BitSeqMap {
    /// All prefix-consistent maps at level `n` whose decoded values are
    /// consistent along every encoding of every grid point (so they
    /// project to well-defined tables). Enumerated by a depth-first walk
    /// over the word tree with early consistency pruning; the first-digit
    /// forcing falls out of the seeded root value `ξ(0) = x₀`.
    pub fn enumerate_all(n: u32) -> Result<Vec<BitSeqMap>> {
        if !(1..=4).contains(&n) {
            return Err(Error::OutOfRange(
                "bit-sequence enumeration supported for 1 <= n <= 4".into(),
            ));
        }
        let e = n - 1;
        let count = (1usize << e) + 1;
        let scale = Rat::from_integer(BigInt::one() << e);
        // Words ordered by level, lexicographic inside a level; each word's
        // parent precedes it.
        let mut words: Vec<Vec<u8>> = Vec::new();
        for level in 1..=n {
            words.extend(all_words(level));
        }
        let mut out = Vec::new();
        for i0 in [0u8, 1] {
            let x0 = if i0 == 0 { Rat::zero() } else { rat(2, 3) };
            let mut images: BTreeMap<Vec<u8>, Vec<u8>> = BTreeMap::new();
            let mut values: Vec<Option<Rat>> = vec![None; count];
            values[0] = Some(x0.clone());
            walk(
                0,
                &words,
                &x0,
                &scale,
                &mut images,
                &mut values,
                n,
                i0,
                &mut out,
            );
        }
        Ok(out)
    }

    /// Projects the bit map to its value table on `A_n`. Maps produced by
    /// [`BitSeqMap::enumerate_all`] always project; the filter remains for
    /// hand-built maps whose encodings decode inconsistently.
    pub fn value_table(&self) -> Option<GridSemiconj> {
        let e = self.n - 1;
        let count = (1usize << e) + 1;
        let x0 = if self.i0 == 0 { Rat::zero() } else { rat(2, 3) };
        let scale = Rat::from_integer(BigInt::one() << e);
        let mut values: Vec<Option<Rat>> = vec![None; count];
        values[0] = Some(x0.clone());
        for (word, image) in &self.leaf_images {
            for m in 1..=word.len() {
                let x = decode_point(&word[..m], &Rat::zero());
                let idx_rat = &x * &scale;
                if !idx_rat.is_integer() {
                    return None;
                }
                let idx = usize::try_from(idx_rat.to_integer().magnitude().clone()).ok()?;
                let val = decode_point(&image[..m], &x0);
                match &values[idx] {
                    None => values[idx] = Some(val),
                    Some(prev) if prev == &val => {}
                    Some(_) => return None,
                }
            }
        }
        let values: Option<Vec<Rat>> = values.into_iter().collect();
        Some(GridSemiconj {
            n: self.n,
            values: values?,
        })
    }
}

#[allow(clippy::too_many_arguments)]
fn walk(
    slot: usize,
    words: &[Vec<u8>],
    x0: &Rat,
    scale: &Rat,
    images: &mut BTreeMap<Vec<u8>, Vec<u8>>,
    values: &mut Vec<Option<Rat>>,
    n: u32,
    i0: u8,
    out: &mut Vec<BitSeqMap>,
) {
    if slot == words.len() {
        let leaf_images = images
            .iter()
            .filter(|(w, _)| w.len() == n as usize)
            .map(|(w, i)| (w.clone(), i.clone()))
            .collect();
        out.push(BitSeqMap { n, i0, leaf_images });
        return;
    }
    let word = &words[slot];
    let parent_img: Vec<u8> = if word.len() == 1 {
        Vec::new()
    } else {
        images[&word[..word.len() - 1]].clone()
    };
    let x = decode_point(word, &Rat::zero());
    let idx_rat = &x * scale;
    let idx = usize::try_from(idx_rat.to_integer().magnitude().clone()).expect("grid point");
    for digit in [0u8, 1] {
        let mut img = parent_img.clone();
        img.push(digit);
        let val = decode_point(&img, x0);
        let prev = values[idx].clone();
        match &prev {
            Some(existing) if existing != &val => continue,
            _ => {}
        }
        values[idx] = Some(val);
        images.insert(word.clone(), img);
        walk(slot + 1, words, x0, scale, images, values, n, i0, out);
        images.remove(word);
        values[idx] = prev.clone();
    }
}

fn all_words(len: u32) -> Vec<Vec<u8>> {
    (0..(1u32 << len))
        .map(|bits| {
            (0..len)
                .map(|i| ((bits >> (len - 1 - i)) & 1) as u8)
                .collect()
        })
        .collect()
}

//! Derivatives of the conjugacy approximations, graph length, and
//! log-coordinate monotonicity diagnostics.
//!
//! The slope of `h_n` on the linearity interval containing `x` is the
//! product of per-digit factors `2v` (digit repeats its predecessor) or
//! `2(1−v)` (digit changes). Everything downstream of that product — the
//! derivative scan, the almost-everywhere flattening statistics, and the
//! graph length — lives here.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::conjugacy::ConjSystem;
use crate::exactnum::{rat, rat_to_f64, Dyadic, Rat};
use crate::{Error, Result};

/// Per-digit slope multipliers of an approximation interval.
///
/// `factors[j]` is the factor indexed `i = j + 2` in the product
/// `h_n'(x) = ∏_{i=2}^n α_i(x)`: `2v` iff `x_{i−1} = x_{i−2}` (with
/// `x_0 = 0`), else `2(1−v)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlphaFactors {
    pub digits: Vec<u8>,
    pub factors: Vec<Rat>,
}

pub fn alpha_factors(v: &Rat, digits: &[u8]) -> AlphaFactors {
    let two_v = rat(2, 1) * v;
    let two_w = rat(2, 1) * (Rat::one() - v);
    let mut prev = 0u8;
    let mut factors = Vec::with_capacity(digits.len());
    for &d in digits {
        factors.push(if d == prev {
            two_v.clone()
        } else {
            two_w.clone()
        });
        prev = d;
    }
    AlphaFactors {
        digits: digits.to_vec(),
        factors,
    }
}

fn rat_pow(base: &Rat, exp: u32) -> Rat {
    Rat::new(base.numer().pow(exp), base.denom().pow(exp))
}

/// Exact slope of `h_n` on the linearity interval selected by the digit
/// string `x_1 x_2 …` (needs at least `n − 1` digits).
pub fn hn_derivative_bits(v: &Rat, digits: &[u8], n: u32) -> Result<Rat> {
    if n < 2 {
        return Err(Error::OutOfRange("need n >= 2".into()));
    }
    if digits.len() < n as usize - 1 {
        return Err(Error::OutOfRange(format!(
            "need {} digits for level {n}",
            n - 1
        )));
    }
    let mut prev = 0u8;
    let mut agree = 0u32;
    for &d in &digits[..n as usize - 1] {
        if d == prev {
            agree += 1;
        }
        prev = d;
    }
    let two_v = rat(2, 1) * v;
    let two_w = rat(2, 1) * (Rat::one() - v);
    Ok(rat_pow(&two_v, agree) * rat_pow(&two_w, n - 1 - agree))
}

/// Exact slope of `h_n` at a dyadic point in the interior of a linearity
/// interval. Errors when `x ∈ A_n`, where the slope is undefined.
pub fn hn_derivative(v: &Rat, x: &Dyadic, n: u32) -> Result<Rat> {
    if x.exp() < n {
        return Err(Error::OutOfRange(format!(
            "{x} lies in A_{n}; the slope is undefined at grid points"
        )));
    }
    let digits = x.binary_digits(n as usize - 1)?;
    hn_derivative_bits(v, &digits, n)
}

/// Extremes of `h_n'` over all linearity intervals.
#[derive(Clone, Debug)]
pub struct ScanResult {
    pub min: Rat,
    pub max: Rat,
    /// Set when the closed forms were confirmed by exhaustive enumeration.
    pub confirmed: Option<bool>,
}

/// Minimum and maximum of `h_n'` over the `2^{n-1}` linearity intervals:
/// the all-agree digit string gives `(2 max(v,1−v))^{n−1}` and the
/// alternating string `(2 min(v,1−v))^{n−1}`. With `confirm`, checks the
/// closed forms against exhaustive enumeration (supported for `n ≤ 12`).
pub fn derivative_scan(v: &Rat, n: u32, confirm: bool) -> Result<ScanResult> {
    if n < 2 {
        return Err(Error::OutOfRange("need n >= 2".into()));
    }
    let two_v = rat(2, 1) * v;
    let two_w = rat(2, 1) * (Rat::one() - v);
    let (lo, hi) = if two_v <= two_w {
        (&two_v, &two_w)
    } else {
        (&two_w, &two_v)
    };
    let min = rat_pow(lo, n - 1);
    let max = rat_pow(hi, n - 1);
    let confirmed = if confirm {
        if n > 12 {
            return Err(Error::OutOfRange(
                "exhaustive confirmation supported for n <= 12".into(),
            ));
        }
        let mut emin: Option<Rat> = None;
        let mut emax: Option<Rat> = None;
        for pattern in 0u64..(1 << (n - 1)) {
            let digits: Vec<u8> = (0..n - 1)
                .map(|i| ((pattern >> (n - 2 - i)) & 1) as u8)
                .collect();
            let slope = hn_derivative_bits(v, &digits, n)?;
            if emin.as_ref().is_none_or(|m| &slope < m) {
                emin = Some(slope.clone());
            }
            if emax.as_ref().is_none_or(|m| &slope > m) {
                emax = Some(slope);
            }
        }
        Some(emin.as_ref() == Some(&min) && emax.as_ref() == Some(&max))
    } else {
        None
    };
    Ok(ScanResult {
        min,
        max,
        confirmed,
    })
}

/// The dichotomy of the derivative of `h` at rational points.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DerivClass {
    Zero,
    Infinite,
}

/// One depth step of difference-quotient evidence.
#[derive(Clone, Debug)]
pub struct QuotientSample {
    pub m: u32,
    pub left: Option<f64>,
    pub right: Option<f64>,
}

/// Classification of `h'(x0)` with supporting evidence.
#[derive(Clone, Debug)]
pub struct ClassifyReport {
    pub class: DerivClass,
    pub samples: Vec<QuotientSample>,
    /// The quotient trend agrees with the classification.
    pub trend_supports: bool,
    /// The quotient trend is monotone in the opposite direction — the
    /// printed dichotomy and the observed evidence disagree at this point.
    pub contradiction: bool,
}

/// Trend thresholds for the quotient evidence: a trend supports `Zero`
/// once the last quotients fall below `zero`, and `Infinite` once they
/// rise above `infinite`.
#[derive(Clone, Copy, Debug)]
pub struct TrendThresholds {
    pub zero: f64,
    pub infinite: f64,
}

impl Default for TrendThresholds {
    fn default() -> Self {
        TrendThresholds {
            zero: 1e-3,
            infinite: 1e3,
        }
    }
}

/// Classifies `h'(x0)` at a rational point by the printed dichotomy
/// (`v < 1/2` → infinite, `v > 1/2` → zero) and reports difference
/// quotients `(h(x0 ± 2^{-m}) − h(x0)) / ±2^{-m}` for `m ≤ depth`, with
/// default trend thresholds.
pub fn derivative_classify(v: &Rat, x0: &Rat, depth: u32) -> Result<ClassifyReport> {
    derivative_classify_with(v, x0, depth, TrendThresholds::default())
}

/// As [`derivative_classify`], with explicit trend thresholds.
///
/// The evidence is authoritative: the trend test takes the last ten
/// samples per side and requires them monotone and beyond the matching
/// threshold; a monotone opposite trend raises the contradiction flag.
pub fn derivative_classify_with(
    v: &Rat,
    x0: &Rat,
    depth: u32,
    thresholds: TrendThresholds,
) -> Result<ClassifyReport> {
    let half = rat(1, 2);
    if v == &half {
        return Err(Error::OutOfRange(
            "v = 1/2 conjugates identically; no dichotomy".into(),
        ));
    }
    if x0.is_negative() || x0 > &Rat::one() {
        return Err(Error::OutOfRange(format!("{x0} outside [0,1]")));
    }
    let class = if v < &half {
        DerivClass::Infinite
    } else {
        DerivClass::Zero
    };
    let sys = ConjSystem::new(v.clone())?;
    let mut samples = Vec::with_capacity(depth as usize);
    for m in 1..=depth {
        let step = Rat::new(BigInt::one(), BigInt::one() << m);
        // The quotient scales the enclosure error by 2^m, and the true
        // quotients decay geometrically; the bound must outpace both.
        let tol = Rat::new(BigInt::one(), BigInt::one() << (2 * m + 30));
        let h0 = sys.h_eval(x0, &tol)?.value;
        let mut left = None;
        let mut right = None;
        let xl = x0 - &step;
        if !xl.is_negative() {
            let hl = sys.h_eval(&xl, &tol)?.value;
            left = Some(rat_to_f64(&((&h0 - hl) / &step)));
        }
        let xr = x0 + &step;
        if xr <= Rat::one() {
            let hr = sys.h_eval(&xr, &tol)?.value;
            right = Some(rat_to_f64(&((hr - &h0) / &step)));
        }
        samples.push(QuotientSample { m, left, right });
    }
    let (zero_threshold, inf_threshold) = (thresholds.zero, thresholds.infinite);
    let tail = |side: fn(&QuotientSample) -> Option<f64>| -> Vec<f64> {
        let vals: Vec<f64> = samples.iter().filter_map(side).collect();
        let skip = vals.len().saturating_sub(10);
        vals[skip..].to_vec()
    };
    let mut supports = true;
    let mut contradiction = false;
    for vals in [tail(|s| s.left), tail(|s| s.right)] {
        if vals.len() < 2 {
            continue;
        }
        let decreasing = vals.windows(2).all(|w| w[1] < w[0]);
        let increasing = vals.windows(2).all(|w| w[1] > w[0]);
        let last = *vals.last().expect("non-empty");
        match class {
            DerivClass::Zero => {
                if !(decreasing && last < zero_threshold) {
                    supports = false;
                }
                if increasing && last > inf_threshold {
                    contradiction = true;
                }
            }
            DerivClass::Infinite => {
                if !(increasing && last > inf_threshold) {
                    supports = false;
                }
                if decreasing && last < zero_threshold {
                    contradiction = true;
                }
            }
        }
    }
    Ok(ClassifyReport {
        class,
        samples,
        trend_supports: supports,
        contradiction,
    })
}

/// Fraction of `samples` random `bits`-digit strings whose level-`bits`
/// slope product falls below `threshold`. Deterministic for a fixed seed.
pub fn flattening_fraction(v: &Rat, bits: u32, samples: u32, threshold: f64, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let log_two_v = rat_to_f64(v).log2() + 1.0;
    let log_two_w = (1.0 - rat_to_f64(v)).log2() + 1.0;
    let log_threshold = threshold.log2();
    let mut hits = 0u32;
    for _ in 0..samples {
        let mut prev = 0u8;
        let mut agree = 0u32;
        for _ in 0..bits.saturating_sub(1) {
            let d = u8::from(rng.random::<bool>());
            if d == prev {
                agree += 1;
            }
            prev = d;
        }
        let log_slope = f64::from(agree) * log_two_v + f64::from(bits - 1 - agree) * log_two_w;
        if log_slope < log_threshold {
            hits += 1;
        }
    }
    f64::from(hits) / f64::from(samples)
}

/// Length of the graph of `h_n` as the exact polyline sum
/// `Σ sqrt(Δx² + Δy²)`: the squared lengths are exact rationals, the square
/// root is the only floating-point step, and the sum is compensated.
pub fn graph_length_polyline(v: &Rat, n: u32) -> Result<f64> {
    if !(1..=22).contains(&n) {
        return Err(Error::OutOfRange(format!("polyline level {n} unsupported")));
    }
    let sys = ConjSystem::new(v.clone())?;
    let b = sys.level_b(n)?;
    let dx = Rat::new(BigInt::one(), BigInt::one() << (n - 1));
    let dx2 = &dx * &dx;
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for w in b.windows(2) {
        let dy = &w[1] - &w[0];
        let s2 = &dx2 + &dy * &dy;
        let term = rat_to_f64(&s2).sqrt();
        // Neumaier compensation.
        let t = sum + term;
        comp += if sum.abs() >= term.abs() {
            (sum - t) + term
        } else {
            (term - t) + sum
        };
        sum = t;
    }
    Ok(sum + comp)
}

fn log_binomial_exact(n: u64, k: u64) -> f64 {
    let k = k.min(n - k);
    let mut c: u128 = 1;
    for i in 0..k {
        c = c * u128::from(n - i) / u128::from(i + 1);
    }
    (c as f64).ln()
}

/// Closed-form length
/// `l_{n+1}(v) = 2^{-n} Σ_k C(n,k) √(1 + 2^{2n} v^{2k} (1−v)^{2(n−k)})`
/// evaluated entirely in log space, so it does not overflow for `n` up to
/// a million and beyond.
pub fn graph_length_formula(v: f64, n: u64) -> Result<f64> {
    if !(v > 0.0 && v < 1.0) {
        return Err(Error::OutOfRange(format!("peak {v} outside (0,1)")));
    }
    let ln2 = std::f64::consts::LN_2;
    let (lv, lw) = (v.ln(), (1.0 - v).ln());
    let softplus = |z: f64| z.max(0.0) + (-z.abs()).exp().ln_1p();
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    let mut log_c = 0.0f64; // ln C(n,k), advanced with k
    for k in 0..=n {
        let z = 2.0 * n as f64 * ln2 + 2.0 * k as f64 * lv + 2.0 * (n - k) as f64 * lw;
        let log_term = log_c - n as f64 * ln2 + 0.5 * softplus(z);
        let term = log_term.exp();
        let t = sum + term;
        comp += if sum.abs() >= term.abs() {
            (sum - t) + term
        } else {
            (term - t) + sum
        };
        sum = t;
        if k < n {
            // Exact binomials while they fit; additive recurrence beyond.
            if n <= 120 {
                log_c = log_binomial_exact(n, k + 1);
            } else {
                log_c += ((n - k) as f64).ln() - ((k + 1) as f64).ln();
            }
        }
    }
    Ok(sum + comp)
}

/// Both length routes for the graph of `h_n` at one level, side by side.
#[derive(Clone, Debug)]
pub struct LengthReport {
    /// Approximation level: both fields below measure the graph of `h_n`.
    pub n: u32,
    pub v: Rat,
    /// Exact-polyline route (exact squared lengths, compensated sum).
    pub polyline: f64,
    /// Log-space binomial closed form.
    pub formula: f64,
    /// Number of terms in the closed-form sum.
    pub terms: u64,
}

/// Computes both length routes for `h_n` and packages them; the two agree
/// to `1e-12` relative at desk-scale levels.
pub fn length_report(v: &Rat, n: u32) -> Result<LengthReport> {
    if n < 2 {
        return Err(Error::OutOfRange(
            "need n >= 2 for both length routes".into(),
        ));
    }
    let polyline = graph_length_polyline(v, n)?;
    let formula = graph_length_formula(rat_to_f64(v), u64::from(n) - 1)?;
    Ok(LengthReport {
        n,
        v: v.clone(),
        polyline,
        formula,
        terms: u64::from(n),
    })
}

/// The periodic factor of `h` in logarithmic coordinates:
/// `ω₁(log₂ x) = h(x) · x^{log₂ v}`.
pub fn omega1_extract(v: &Rat, x: &Rat, tol: &Rat) -> Result<f64> {
    if x <= &Rat::zero() || x > &Rat::one() {
        return Err(Error::OutOfRange(format!("{x} outside (0,1]")));
    }
    let sys = ConjSystem::new(v.clone())?;
    let h = sys.h_eval(x, tol)?.value;
    Ok(rat_to_f64(&h) * rat_to_f64(x).powf(rat_to_f64(v).log2()))
}

/// Location of the extremum of the log-coordinate interpolant on interval
/// `k` of level `n`, and whether it falls inside the interval (which is
/// exactly a monotonicity violation of the approximation).
///
/// The grid data come from exact `B`-values; only the final logarithms are
/// floating point.
pub fn htilde_extremum(v: &Rat, n: u32, k: u64) -> Result<(f64, bool)> {
    if n < 2 {
        return Err(Error::OutOfRange("need n >= 2".into()));
    }
    let intervals = (1u64 << (n - 1)) - 1;
    if k < 1 || k > intervals {
        return Err(Error::OutOfRange(format!(
            "interval index {k} outside 1..={intervals} for level {n}"
        )));
    }
    let sys = ConjSystem::new(v.clone())?;
    let e = n - 1;
    let beta_k = sys.h_on_dyadic(&Dyadic::from_index(k, e)?);
    let beta_k1 = sys.h_on_dyadic(&Dyadic::from_index(k + 1, e)?);
    let vf = rat_to_f64(v);
    let at_k = (k as f64).log2() - f64::from(e);
    let at_k1 = ((k + 1) as f64).log2() - f64::from(e);
    let bt_k = rat_to_f64(&beta_k) * vf.powf(at_k);
    let bt_k1 = rat_to_f64(&beta_k1) * vf.powf(at_k1);
    let a = (bt_k1 - bt_k) / (at_k1 - at_k);
    if a == 0.0 {
        return Err(Error::Degenerate(
            "the interpolant is constant on this interval".into(),
        ));
    }
    let b = bt_k - at_k * a;
    let t = 1.0 / vf.ln() - b / a;
    Ok((t, at_k < t && t < at_k1))
}

/// Bisects `[lo, hi]` for the monotonicity threshold of interval `k` at
/// level `n`: `lo` must violate, `hi` must not. Returns the final bracket.
pub fn htilde_threshold_bisect(
    n: u32,
    k: u64,
    mut lo: Rat,
    mut hi: Rat,
    width: &Rat,
) -> Result<(Rat, Rat)> {
    let viol = |v: &Rat| -> Result<bool> { Ok(htilde_extremum(v, n, k)?.1) };
    if !viol(&lo)? || viol(&hi)? {
        return Err(Error::Validation(
            "bisection needs a violation at lo and none at hi".into(),
        ));
    }
    while &(&hi - &lo) > width {
        let mid = (&lo + &hi) / rat(2, 1);
        if viol(&mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((lo, hi))
}

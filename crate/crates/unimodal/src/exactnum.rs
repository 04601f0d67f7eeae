//! Arbitrary-precision rationals and dyadic rationals.
//!
//! `Rat` is the exact scalar used everywhere in the crate. `Dyadic` is a
//! number of the form `num / 2^exp` in `[0, 1]`, the raw material of the
//! grids `A_n`; it gives direct access to the terminating binary expansion.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::{Error, Result};

/// Exact rational scalar. Always canonical: reduced, positive denominator.
pub type Rat = num_rational::BigRational;

/// Shorthand for a small rational.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// Shorthand for a small integer as a rational.
pub fn rat_i(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat_to_f64(r: &Rat) -> f64 {
    r.to_f64().expect("rational out of f64 range")
}

/// Parses `p/q`, an integer, or a finite decimal into an exact rational.
///
/// A leading sign is allowed on the whole number; the denominator of the
/// `p/q` form must be positive and nonzero.
pub fn parse_rat(text: &str) -> Result<Rat> {
    let s = text.trim();
    if s.is_empty() {
        return Err(Error::ParseRat(text.to_string()));
    }
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.parse().map_err(|_| Error::ParseRat(text.to_string()))?;
        let q: BigInt = q.parse().map_err(|_| Error::ParseRat(text.to_string()))?;
        if q.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if q.is_negative() {
            return Err(Error::ParseRat(text.to_string()));
        }
        return Ok(Rat::new(p, q));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let (sign, int) = match int.strip_prefix('-') {
            Some(rest) => (-1, rest),
            None => (1, int.strip_prefix('+').unwrap_or(int)),
        };
        if int.is_empty() && frac.is_empty() {
            return Err(Error::ParseRat(text.to_string()));
        }
        if !int.chars().all(|c| c.is_ascii_digit()) || !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(Error::ParseRat(text.to_string()));
        }
        let int_part: BigInt = if int.is_empty() {
            BigInt::zero()
        } else {
            int.parse().map_err(|_| Error::ParseRat(text.to_string()))?
        };
        let frac_part: BigInt = if frac.is_empty() {
            BigInt::zero()
        } else {
            frac.parse()
                .map_err(|_| Error::ParseRat(text.to_string()))?
        };
        let scale = BigInt::from(10u32).pow(frac.len() as u32);
        let value = Rat::new(int_part * &scale + frac_part, scale);
        return Ok(if sign < 0 { -value } else { value });
    }
    let n: BigInt = s.parse().map_err(|_| Error::ParseRat(text.to_string()))?;
    Ok(Rat::from_integer(n))
}

/// Formats `r` with `digits` places after the decimal point, rounding
/// half to even. Output has no trailing separator games: always exactly
/// `digits` fractional digits.
pub fn format_decimal(r: &Rat, digits: usize) -> String {
    let neg = r.is_negative();
    let abs = r.abs();
    let scale = BigInt::from(10u32).pow(digits as u32);
    let scaled = abs * Rat::from_integer(scale.clone());
    let mut int = scaled.floor().to_integer();
    let frac = &scaled - Rat::from_integer(int.clone());
    let half = rat(1, 2);
    if frac > half || (frac == half && int.clone() % 2 != BigInt::zero()) {
        int += 1;
    }
    let (whole, rem) = num_integer::Integer::div_rem(&int, &scale);
    let mut out = String::new();
    if neg && !(whole.is_zero() && rem.is_zero()) {
        out.push('-');
    }
    out.push_str(&whole.to_string());
    if digits > 0 {
        out.push('.');
        let rem_str = rem.to_string();
        for _ in rem_str.len()..digits {
            out.push('0');
        }
        out.push_str(&rem_str);
    }
    out
}

/// Dyadic rational `num / 2^exp` in `[0, 1]`, canonical form: `num` odd,
/// or the distinguished values zero `(0,0)` and one `(1,0)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Dyadic {
    num: BigUint,
    exp: u32,
}

impl Dyadic {
    /// Builds `num / 2^exp`, canonicalizing. Errors if the value exceeds 1.
    pub fn new(num: BigUint, exp: u32) -> Result<Dyadic> {
        if num.bits() > exp as u64 + 1
            || (num.bits() == exp as u64 + 1 && num != BigUint::one() << exp)
        {
            return Err(Error::OutOfRange(format!("dyadic {num}/2^{exp} exceeds 1")));
        }
        let mut num = num;
        let mut exp = exp;
        if num.is_zero() {
            return Ok(Dyadic { num, exp: 0 });
        }
        while exp > 0 && (&num % 2u32).is_zero() {
            num >>= 1;
            exp -= 1;
        }
        Ok(Dyadic { num, exp })
    }

    pub fn zero() -> Dyadic {
        Dyadic {
            num: BigUint::zero(),
            exp: 0,
        }
    }

    pub fn one() -> Dyadic {
        Dyadic {
            num: BigUint::one(),
            exp: 0,
        }
    }

    /// `k / 2^exp` for a machine-sized numerator.
    pub fn from_index(k: u64, exp: u32) -> Result<Dyadic> {
        Dyadic::new(BigUint::from(k), exp)
    }

    pub fn num(&self) -> &BigUint {
        &self.num
    }

    pub fn exp(&self) -> u32 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.exp == 0 && self.num.is_one()
    }

    /// Lossless conversion to a rational.
    pub fn to_rat(&self) -> Rat {
        Rat::new(
            BigInt::from(self.num.clone()),
            BigInt::from(BigUint::one() << self.exp),
        )
    }

    /// Exact conversion from a rational, if it is dyadic and in `[0, 1]`.
    pub fn from_rat(r: &Rat) -> Option<Dyadic> {
        if r.is_negative() || r > &Rat::one() {
            return None;
        }
        let den = r.denom().magnitude();
        if den.count_ones() != 1 {
            return None;
        }
        let exp = den.trailing_zeros().unwrap_or(0) as u32;
        Some(Dyadic {
            num: r.numer().magnitude().clone(),
            exp,
        })
    }

    /// First `count` digits of the terminating binary expansion, zero-padded.
    ///
    /// The expansion with a suffix of zeros is always used, never the
    /// all-ones one; consequently `x = 1` has no expansion and is rejected.
    pub fn binary_digits(&self, count: usize) -> Result<Vec<u8>> {
        if count == 0 {
            return Err(Error::OutOfRange("digit count must be at least 1".into()));
        }
        if self.is_one() {
            return Err(Error::OutOfRange(
                "x = 1 has no terminating binary expansion".into(),
            ));
        }
        let mut digits = Vec::with_capacity(count);
        for i in 1..=count {
            if i as u32 <= self.exp {
                let bit = (&self.num >> (self.exp - i as u32)) & BigUint::one();
                digits.push(if bit.is_zero() { 0 } else { 1 });
            } else {
                digits.push(0);
            }
        }
        Ok(digits)
    }
}

impl std::fmt::Display for Dyadic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}/2^{}", self.num, self.exp)
    }
}

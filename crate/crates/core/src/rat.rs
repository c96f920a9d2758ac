//! Exact rational numbers for exponent bookkeeping.
//!
//! Every exponent relation in [`crate::exponent`] is decided in this type so
//! that boundary cases such as `s = 5/6, q = 3` compare exactly.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot parse `{input}` as an exact rational: {reason}")]
pub struct ParseRatError {
    pub input: String,
    pub reason: &'static str,
}

/// Arbitrary-precision rational in canonical form (positive denominator,
/// coprime numerator and denominator).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rat(BigRational);

impl Rat {
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Rat(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn int(v: i64) -> Self {
        Rat(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn zero() -> Self {
        Rat(BigRational::zero())
    }

    pub fn one() -> Self {
        Rat(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    /// True for 0, 1, 2, ...
    pub fn is_natural(&self) -> bool {
        self.is_integer() && !self.is_negative()
    }

    pub fn floor(&self) -> Rat {
        Rat(self.0.floor())
    }

    pub fn recip(&self) -> Rat {
        Rat(self.0.recip())
    }

    pub fn abs(&self) -> Rat {
        Rat(self.0.abs())
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }


    /// Integer value, if this is an integer that fits in `i64`.
    pub fn to_i64(&self) -> Option<i64> {
        if self.is_integer() {
            self.0.numer().to_i64()
        } else {
            None
        }
    }
}

impl From<i64> for Rat {
    fn from(v: i64) -> Self {
        Rat::int(v)
    }
}

impl From<BigRational> for Rat {
    fn from(v: BigRational) -> Self {
        Rat(v)
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Accepts `7`, `-5/6`, `+3/2` and finite decimals such as `0.25` (read
/// exactly as 1/4). Whitespace around the slash is tolerated.
impl FromStr for Rat {
    type Err = ParseRatError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = |reason| ParseRatError {
            input: s.to_string(),
            reason,
        };
        let t = s.trim();
        if t.is_empty() {
            return Err(err("empty input"));
        }
        if let Some((n, d)) = t.split_once('/') {
            let num: BigInt = parse_int(n.trim()).ok_or_else(|| err("bad numerator"))?;
            let den: BigInt = parse_int(d.trim()).ok_or_else(|| err("bad denominator"))?;
            if den.is_zero() {
                return Err(err("zero denominator"));
            }
            return Ok(Rat(BigRational::new(num, den)));
        }
        if let Some((ip, fp)) = t.split_once('.') {
            let (neg, ip) = match ip.strip_prefix('-') {
                Some(rest) => (true, rest),
                None => (false, ip.strip_prefix('+').unwrap_or(ip)),
            };
            if fp.is_empty() && ip.is_empty() {
                return Err(err("no digits"));
            }
            if !fp.chars().all(|c| c.is_ascii_digit()) || !ip.chars().all(|c| c.is_ascii_digit()) {
                return Err(err("bad decimal"));
            }
            let digits = format!("{ip}{fp}");
            let num: BigInt = digits.parse().map_err(|_| err("bad decimal"))?;
            let den = num_traits::pow(BigInt::from(10), fp.len());
            let v = BigRational::new(num, den);
            return Ok(Rat(if neg { -v } else { v }));
        }
        parse_int(t)
            .map(|n| Rat(BigRational::from_integer(n)))
            .ok_or_else(|| err("not a number"))
    }
}

fn parse_int(s: &str) -> Option<BigInt> {
    let body = s.strip_prefix('+').unwrap_or(s);
    let digits = body.strip_prefix('-').unwrap_or(body);
    if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    body.parse().ok()
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<&Rat> for &Rat {
            type Output = Rat;
            fn $m(self, rhs: &Rat) -> Rat {
                Rat((&self.0).$m(&rhs.0))
            }
        }
        impl $tr<Rat> for Rat {
            type Output = Rat;
            fn $m(self, rhs: Rat) -> Rat {
                Rat(self.0.$m(rhs.0))
            }
        }
        impl $tr<&Rat> for Rat {
            type Output = Rat;
            fn $m(self, rhs: &Rat) -> Rat {
                Rat(self.0.$m(&rhs.0))
            }
        }
        impl $tr<Rat> for &Rat {
            type Output = Rat;
            fn $m(self, rhs: Rat) -> Rat {
                Rat((&self.0).$m(rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-self.0)
    }
}

impl Neg for &Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-&self.0)
    }
}

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A rational or `+∞`, used for time-integrability exponents
/// (`L^∞(0,T; ·)` is a legitimate membership claim).
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum ExtRat {
    Finite(Rat),
    Infinity,
}

impl ExtRat {
    pub fn finite(&self) -> Option<&Rat> {
        match self {
            ExtRat::Finite(r) => Some(r),
            ExtRat::Infinity => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtRat::Infinity)
    }

    /// `1/self`, with `1/∞ = 0`. Panics on zero.
    pub fn recip(&self) -> Rat {
        match self {
            ExtRat::Finite(r) => r.recip(),
            ExtRat::Infinity => Rat::zero(),
        }
    }
}

impl PartialOrd for ExtRat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtRat {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExtRat::Finite(a), ExtRat::Finite(b)) => a.cmp(b),
            (ExtRat::Finite(_), ExtRat::Infinity) => Ordering::Less,
            (ExtRat::Infinity, ExtRat::Finite(_)) => Ordering::Greater,
            (ExtRat::Infinity, ExtRat::Infinity) => Ordering::Equal,
        }
    }
}

impl From<Rat> for ExtRat {
    fn from(r: Rat) -> Self {
        ExtRat::Finite(r)
    }
}

impl fmt::Display for ExtRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtRat::Finite(r) => fmt::Display::fmt(r, f),
            ExtRat::Infinity => f.write_str("inf"),
        }
    }
}

impl fmt::Debug for ExtRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for ExtRat {
    type Err = ParseRatError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "inf" | "+inf" | "infinity" | "+infinity" | "∞" => Ok(ExtRat::Infinity),
            _ => s.parse().map(ExtRat::Finite),
        }
    }
}

impl Serialize for ExtRat {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ExtRat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_integers_and_decimals() {
        assert_eq!("5/6".parse::<Rat>().unwrap(), Rat::new(5, 6));
        assert_eq!("-10/4".parse::<Rat>().unwrap(), Rat::new(-5, 2));
        assert_eq!("3".parse::<Rat>().unwrap(), Rat::int(3));
        assert_eq!("0.25".parse::<Rat>().unwrap(), Rat::new(1, 4));
        assert_eq!("-1.5".parse::<Rat>().unwrap(), Rat::new(-3, 2));
        assert!("1/0".parse::<Rat>().is_err());
        assert!("abc".parse::<Rat>().is_err());
        assert!("".parse::<Rat>().is_err());
        assert!("1e3".parse::<Rat>().is_err());
    }

    #[test]
    fn canonical_display() {
        assert_eq!(Rat::new(10, -4).to_string(), "-5/2");
        assert_eq!(Rat::new(6, 3).to_string(), "2");
        assert_eq!(ExtRat::Infinity.to_string(), "inf");
    }

    #[test]
    fn infinity_dominates() {
        let big = ExtRat::Finite(Rat::int(1_000_000_000));
        assert!(ExtRat::Infinity > big);
        assert_eq!("inf".parse::<ExtRat>().unwrap(), ExtRat::Infinity);
        assert_eq!(ExtRat::Infinity.recip(), Rat::zero());
    }

    #[test]
    fn serde_as_strings() {
        let v = serde_json::to_string(&Rat::new(5, 6)).unwrap();
        assert_eq!(v, "\"5/6\"");
        let back: Rat = serde_json::from_str(&v).unwrap();
        assert_eq!(back, Rat::new(5, 6));
    }

    #[test]
    fn natural_numbers() {
        assert!(Rat::int(0).is_natural());
        assert!(Rat::int(2).is_natural());
        assert!(!Rat::int(-1).is_natural());
        assert!(!Rat::new(1, 2).is_natural());
    }
}

//! Closed intervals with rational endpoints.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::Rational;

/// A closed interval `[lo, hi]` with exact rational endpoints.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Interval {
    pub lo: Rational,
    pub hi: Rational,
}

impl Interval {
    pub fn new(lo: Rational, hi: Rational) -> Self {
        debug_assert!(lo <= hi, "interval endpoints out of order");
        Interval { lo, hi }
    }

    pub fn point(x: Rational) -> Self {
        Interval { lo: x.clone(), hi: x }
    }

    pub fn zero() -> Self {
        Self::point(Rational::zero())
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn mid(&self) -> Rational {
        (&self.lo + &self.hi) / BigInt::from(2)
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn is_subset_of(&self, other: &Interval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    pub fn intersects(&self, other: &Interval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = if self.lo > other.lo { &self.lo } else { &other.lo };
        let hi = if self.hi < other.hi { &self.hi } else { &other.hi };
        (lo <= hi).then(|| Interval::new(lo.clone(), hi.clone()))
    }

    /// Sign of every point in the interval, if it is uniform.
    pub fn sign(&self) -> Option<std::cmp::Ordering> {
        use std::cmp::Ordering::*;
        if self.lo.is_positive() {
            Some(Greater)
        } else if self.hi.is_negative() {
            Some(Less)
        } else if self.lo.is_zero() && self.hi.is_zero() {
            Some(Equal)
        } else {
            None
        }
    }

    pub fn add(&self, other: &Interval) -> Interval {
        Interval::new(&self.lo + &other.lo, &self.hi + &other.hi)
    }

    pub fn sub(&self, other: &Interval) -> Interval {
        Interval::new(&self.lo - &other.hi, &self.hi - &other.lo)
    }

    pub fn neg(&self) -> Interval {
        Interval::new(-&self.hi, -&self.lo)
    }

    pub fn mul(&self, other: &Interval) -> Interval {
        let products = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let mut lo = products[0].clone();
        let mut hi = products[0].clone();
        for p in &products[1..] {
            if *p < lo {
                lo = p.clone();
            }
            if *p > hi {
                hi = p.clone();
            }
        }
        Interval::new(lo, hi)
    }

    pub fn scale(&self, c: &Rational) -> Interval {
        let a = &self.lo * c;
        let b = &self.hi * c;
        if a <= b {
            Interval::new(a, b)
        } else {
            Interval::new(b, a)
        }
    }

    /// Reciprocal; `None` when the interval contains zero.
    pub fn recip(&self) -> Option<Interval> {
        if self.contains_zero() {
            return None;
        }
        Some(Interval::new(self.hi.recip(), self.lo.recip()))
    }

    pub fn div(&self, other: &Interval) -> Option<Interval> {
        other.recip().map(|r| self.mul(&r))
    }

    pub fn abs(&self) -> Interval {
        if !self.lo.is_negative() {
            self.clone()
        } else if !self.hi.is_positive() {
            self.neg()
        } else {
            let hi = if -&self.lo > self.hi {
                -&self.lo
            } else {
                self.hi.clone()
            };
            Interval::new(Rational::zero(), hi)
        }
    }

    pub fn pow(&self, n: u32) -> Interval {
        let mut acc = Interval::point(Rational::one());
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        let lo = if self.lo < other.lo { &self.lo } else { &other.lo };
        let hi = if self.hi > other.hi { &self.hi } else { &other.hi };
        Interval::new(lo.clone(), hi.clone())
    }

    /// Enclosure of `sqrt` over a nonnegative interval, to within `2^-64`.
    pub fn sqrt(&self) -> Interval {
        assert!(!self.lo.is_negative(), "square root of a negative interval");
        let bits = 64usize;
        let scale = BigInt::one() << (2 * bits);
        let den = Rational::from_integer(BigInt::one() << bits);
        let lo = (&self.lo * &scale).floor().to_integer().sqrt();
        let hi_scaled = (&self.hi * &scale).ceil().to_integer();
        let mut hi = hi_scaled.sqrt();
        if &hi * &hi < hi_scaled {
            hi += 1;
        }
        Interval::new(Rational::from_integer(lo) / &den, Rational::from_integer(hi) / &den)
    }

    /// Enclosure of the natural logarithm over a positive interval.
    pub fn ln(&self) -> Interval {
        let lo = ln_enclosure(&self.lo);
        let hi = ln_enclosure(&self.hi);
        Interval::new(lo.lo, hi.hi)
    }

    pub fn to_f64_mid(&self) -> f64 {
        rational_to_f64(&self.mid())
    }

    /// Decimal endpoints rounded outward to `digits` places.
    pub fn decimal_bounds(&self, digits: usize) -> (String, String) {
        (decimal_floor(&self.lo, digits), decimal_ceil(&self.hi, digits))
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (lo, hi) = self.decimal_bounds(12);
        write!(f, "[{lo}, {hi}]")
    }
}

pub fn rational_to_f64(x: &Rational) -> f64 {
    // Scale through integers so huge numerators and denominators do not overflow.
    if let Some(v) = x.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    let bits = 64i64;
    let n = x.numer().bits() as i64;
    let d = x.denom().bits() as i64;
    let shift = n - d - bits;
    let scaled = if shift >= 0 {
        x.numer() / (x.denom() << shift as usize)
    } else {
        (x.numer() << (-shift) as usize) / x.denom()
    };
    scaled.to_f64().unwrap_or(0.0) * 2f64.powi(shift as i32)
}

/// Best rational approximation interval of an `f64` (exact conversion).
pub fn rational_from_f64(v: f64) -> Rational {
    BigRational::from_float(v).expect("finite float")
}

fn scaled_floor(x: &Rational, digits: usize) -> BigInt {
    let scale = BigInt::from(10).pow(digits as u32);
    let scaled = x * &scale;
    scaled.numer().div_floor(scaled.denom())
}

fn format_scaled(v: BigInt, digits: usize) -> String {
    let negative = v.is_negative();
    let s = v.abs().to_string();
    let s = if s.len() <= digits {
        format!("{}{}", "0".repeat(digits + 1 - s.len()), s)
    } else {
        s
    };
    let (int, frac) = s.split_at(s.len() - digits);
    let sign = if negative { "-" } else { "" };
    if digits == 0 {
        format!("{sign}{int}")
    } else {
        format!("{sign}{int}.{frac}")
    }
}

pub fn decimal_floor(x: &Rational, digits: usize) -> String {
    format_scaled(scaled_floor(x, digits), digits)
}

pub fn decimal_ceil(x: &Rational, digits: usize) -> String {
    let neg = -x;
    let f = scaled_floor(&neg, digits);
    format_scaled(-f, digits)
}

const LN_TERMS_PRECISION: u32 = 96;

/// `2 atanh(z)` for `0 <= z < 1/2`, enclosed to within `2^-96`.
fn two_atanh(z: &Rational) -> Interval {
    let eps = Rational::new(BigInt::one(), BigInt::one() << LN_TERMS_PRECISION);
    let z2 = z * z;
    let mut term = z.clone();
    let mut sum = Rational::zero();
    let mut k = 1u64;
    loop {
        sum += &term / BigInt::from(k);
        term *= &z2;
        k += 2;
        // remaining terms are bounded by term / (k (1 - z^2))
        let tail = &term / ((Rational::one() - &z2) * BigInt::from(k));
        if tail < eps || term.is_zero() {
            let two = BigInt::from(2);
            return Interval::new(&sum * &two, (sum + tail) * two);
        }
    }
}

/// Enclosure of `ln(x)` for rational `x > 0`.
pub fn ln_enclosure(x: &Rational) -> Interval {
    assert!(x.is_positive(), "logarithm of a nonpositive number");
    if x.is_one() {
        return Interval::zero();
    }
    // x = 2^e * y with y in [1, 2)
    let two = Rational::from_integer(BigInt::from(2));
    let mut e = x.numer().bits() as i64 - x.denom().bits() as i64;
    let mut y = if e >= 0 {
        x / Rational::from_integer(BigInt::one() << e as usize)
    } else {
        x * Rational::from_integer(BigInt::one() << (-e) as usize)
    };
    while y >= two {
        y /= BigInt::from(2);
        e += 1;
    }
    while y < Rational::one() {
        y *= BigInt::from(2);
        e -= 1;
    }
    let z = (&y - Rational::one()) / (&y + Rational::one());
    let ln2 = two_atanh(&Rational::new(BigInt::one(), BigInt::from(3)));
    let scaled = ln2.scale(&Rational::from_integer(BigInt::from(e)));
    scaled.add(&two_atanh(&z))
}

/// Serde form `[lo, hi]` with each endpoint as an exact `"p/q"` string.
impl Serialize for Interval {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [self.lo.to_string(), self.hi.to_string()].serialize(s)
    }
}

impl<'de> Deserialize<'de> for Interval {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let [lo, hi]: [String; 2] = Deserialize::deserialize(d)?;
        let lo = parse_rational(&lo).map_err(serde::de::Error::custom)?;
        let hi = parse_rational(&hi).map_err(serde::de::Error::custom)?;
        if lo > hi {
            return Err(serde::de::Error::custom("interval endpoints out of order"));
        }
        Ok(Interval { lo, hi })
    }
}

/// Parses `"p"`, `"p/q"` or a finite decimal such as `"-1.25"`.
pub fn parse_rational(s: &str) -> Result<Rational, String> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| format!("bad numerator in {s:?}"))?;
        let d: BigInt = d.trim().parse().map_err(|_| format!("bad denominator in {s:?}"))?;
        if d.is_zero() {
            return Err(format!("zero denominator in {s:?}"));
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let negative = int.trim_start().starts_with('-');
        let int_part: BigInt = if int.is_empty() || int == "-" || int == "+" {
            BigInt::zero()
        } else {
            int.parse().map_err(|_| format!("bad decimal {s:?}"))?
        };
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(format!("bad decimal {s:?}"));
        }
        let scale = BigInt::from(10).pow(frac.len() as u32);
        let frac_part: BigInt = frac.parse().map_err(|_| format!("bad decimal {s:?}"))?;
        let magnitude = Rational::from_integer(int_part.abs()) + Rational::new(frac_part, scale);
        return Ok(if negative { -magnitude } else { magnitude });
    }
    let n: BigInt = s.parse().map_err(|_| format!("bad rational {s:?}"))?;
    Ok(Rational::from_integer(n))
}

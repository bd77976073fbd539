//! Univariate polynomials over the integers and the rationals, with Sturm
//! sequences and certified real root isolation.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::Rational;

/// Monic polynomial with integer coefficients, constant term first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(coeffs: Vec<BigInt>) -> Result<Self> {
        let mut coeffs = coeffs;
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        if coeffs.len() < 2 {
            return Err(Error::DegreeZero);
        }
        if !coeffs.last().unwrap().is_one() {
            return Err(Error::NotMonic);
        }
        Ok(IntPolynomial { coeffs })
    }

    pub fn from_i64(coeffs: &[i64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn to_qpoly(&self) -> QPoly {
        QPoly::new(self.coeffs.iter().map(|c| Rational::from_integer(c.clone())).collect())
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        use num_traits::ToPrimitive;
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + c.to_f64().unwrap_or(f64::NAN))
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_poly(f, self.coeffs.iter().cloned().map(Rational::from_integer), "z")
    }
}

fn write_poly(
    f: &mut fmt::Formatter<'_>,
    coeffs: impl DoubleEndedIterator<Item = Rational> + ExactSizeIterator,
    var: &str,
) -> fmt::Result {
    let n = coeffs.len();
    let mut first = true;
    for (i, c) in coeffs.enumerate().collect::<Vec<_>>().into_iter().rev() {
        if c.is_zero() {
            continue;
        }
        let negative = c.is_negative();
        let mag = c.abs();
        if first {
            if negative {
                write!(f, "-")?;
            }
        } else {
            write!(f, " {} ", if negative { "-" } else { "+" })?;
        }
        first = false;
        let show_coeff = !mag.is_one() || i == 0;
        if show_coeff {
            write!(f, "{mag}")?;
        }
        match i {
            0 => {}
            1 => write!(f, "{var}")?,
            _ => write!(f, "{var}^{i}")?,
        }
    }
    if first || n == 0 {
        write!(f, "0")?;
    }
    Ok(())
}

#[derive(Serialize, Deserialize)]
struct CoeffsForm {
    coeffs: Vec<String>,
}

impl Serialize for IntPolynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CoeffsForm {
            coeffs: self.coeffs.iter().map(|c| c.to_string()).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntPolynomial {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let form = CoeffsForm::deserialize(d)?;
        let coeffs = form
            .coeffs
            .iter()
            .map(|c| c.trim().parse::<BigInt>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(serde::de::Error::custom)?;
        IntPolynomial::new(coeffs).map_err(serde::de::Error::custom)
    }
}

/// Polynomial with rational coefficients, constant term first, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct QPoly {
    coeffs: Vec<Rational>,
}

impl QPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        QPoly { coeffs }
    }

    pub fn zero() -> Self {
        QPoly { coeffs: vec![] }
    }

    pub fn constant(c: Rational) -> Self {
        QPoly::new(vec![c])
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        QPoly::new(coeffs.iter().map(|&c| Rational::from_integer(c.into())).collect())
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add(&self, other: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = Rational::zero();
        QPoly::new(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&zero) + other.coeffs.get(i).unwrap_or(&zero))
                .collect(),
        )
    }

    pub fn sub(&self, other: &QPoly) -> QPoly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> QPoly {
        QPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> QPoly {
        QPoly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn mul(&self, other: &QPoly) -> QPoly {
        if self.is_zero() || other.is_zero() {
            return QPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        QPoly::new(out)
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn divrem(&self, divisor: &QPoly) -> (QPoly, QPoly) {
        let dd = divisor.degree().expect("division by zero polynomial");
        let lead_inv = divisor.lead().recip();
        let mut rem = self.coeffs.clone();
        let Some(nd) = self.degree() else {
            return (QPoly::zero(), QPoly::zero());
        };
        if nd < dd {
            return (QPoly::zero(), self.clone());
        }
        let mut quot = vec![Rational::zero(); nd - dd + 1];
        for k in (0..=nd - dd).rev() {
            let c = &rem[k + dd] * &lead_inv;
            if !c.is_zero() {
                for (j, dc) in divisor.coeffs.iter().enumerate() {
                    rem[k + j] -= &c * dc;
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (QPoly::new(quot), QPoly::new(rem))
    }

    pub fn rem(&self, divisor: &QPoly) -> QPoly {
        self.divrem(divisor).1
    }

    pub fn monic(&self) -> QPoly {
        if self.is_zero() {
            return QPoly::zero();
        }
        let inv = self.lead().recip();
        self.scale(&inv)
    }

    /// Monic greatest common divisor (zero if both are zero).
    pub fn gcd(a: &QPoly, b: &QPoly) -> QPoly {
        let (mut x, mut y) = (a.clone(), b.clone());
        while !y.is_zero() {
            let r = x.rem(&y);
            x = y;
            y = r;
        }
        x.monic()
    }

    /// Returns `(g, s, t)` with `s*a + t*b = g`, `g` monic.
    pub fn ext_gcd(a: &QPoly, b: &QPoly) -> (QPoly, QPoly, QPoly) {
        let (mut r0, mut r1) = (a.clone(), b.clone());
        let (mut s0, mut s1) = (QPoly::constant(Rational::one()), QPoly::zero());
        let (mut t0, mut t1) = (QPoly::zero(), QPoly::constant(Rational::one()));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            let s = s0.sub(&q.mul(&s1));
            let t = t0.sub(&q.mul(&t1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
            t0 = std::mem::replace(&mut t1, t);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = r0.lead().recip();
        (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
    }

    pub fn derivative(&self) -> QPoly {
        QPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
    }

    /// Horner evaluation in interval arithmetic.
    pub fn eval_interval(&self, x: &Interval) -> Interval {
        let mut acc = Interval::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x);
            acc = Interval::new(&acc.lo + c, &acc.hi + c);
        }
        acc
    }

    pub fn is_squarefree(&self) -> bool {
        match self.degree() {
            None => false,
            Some(0) => true,
            Some(_) => QPoly::gcd(self, &self.derivative()).degree() == Some(0),
        }
    }

    /// `p / gcd(p, p')`, monic.
    pub fn squarefree_part(&self) -> QPoly {
        let g = QPoly::gcd(self, &self.derivative());
        self.divrem(&g).0.monic()
    }

    /// Yun's algorithm: factors `f_1, f_2, ...` with `p = c * prod f_i^i`,
    /// each `f_i` monic squarefree and pairwise coprime.
    pub fn squarefree_decomposition(&self) -> Vec<QPoly> {
        let mut out = Vec::new();
        let p = self.monic();
        if p.degree().unwrap_or(0) == 0 {
            return out;
        }
        let dp = p.derivative();
        let a0 = QPoly::gcd(&p, &dp);
        let mut b = p.divrem(&a0).0;
        let mut c = dp.divrem(&a0).0;
        let mut d = c.sub(&b.derivative());
        loop {
            let a = QPoly::gcd(&b, &d);
            out.push(a.clone());
            b = b.divrem(&a).0;
            if b.degree() == Some(0) {
                break;
            }
            c = d.divrem(&a).0;
            d = c.sub(&b.derivative());
        }
        while out.last().is_some_and(|f| f.degree() == Some(0)) {
            out.pop();
        }
        out
    }

    /// Canonical Sturm sequence `p, p', -rem(p, p'), ...`.
    pub fn sturm_sequence(&self) -> SturmSequence {
        let mut seq = vec![self.clone(), self.derivative()];
        while !seq.last().unwrap().is_zero() {
            let n = seq.len();
            let r = seq[n - 2].rem(&seq[n - 1]).neg();
            if r.is_zero() {
                break;
            }
            seq.push(r);
        }
        seq.retain(|p| !p.is_zero());
        SturmSequence { seq }
    }

    /// Upper bound `2^k` on the modulus of every root (Cauchy bound).
    pub fn root_bound_pow2(&self) -> Rational {
        let lead = self.lead().abs();
        let mut max = Rational::zero();
        for c in &self.coeffs[..self.coeffs.len().saturating_sub(1)] {
            let r = c.abs() / &lead;
            if r > max {
                max = r;
            }
        }
        let bound = max + Rational::one();
        let mut p = Rational::one();
        while p <= bound {
            p *= BigInt::from(2);
        }
        p
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_poly(f, self.coeffs.iter().cloned(), "z")
    }
}

#[derive(Clone, Debug)]
pub struct SturmSequence {
    seq: Vec<QPoly>,
}

impl SturmSequence {
    fn variations(&self, x: &Rational) -> usize {
        let mut count = 0;
        let mut last: Option<bool> = None;
        for p in &self.seq {
            let v = p.eval(x);
            if v.is_zero() {
                continue;
            }
            let pos = v.is_positive();
            if last.is_some_and(|l| l != pos) {
                count += 1;
            }
            last = Some(pos);
        }
        count
    }

    /// Number of distinct real roots in the half-open interval `(a, b]`.
    pub fn count_roots(&self, a: &Rational, b: &Rational) -> usize {
        self.variations(a).saturating_sub(self.variations(b))
    }
}

/// An isolating interval for one real root of a squarefree polynomial.
///
/// Either `lo == hi` (the root is exactly `lo`) or the polynomial takes
/// nonzero values of opposite sign at the endpoints and has exactly one root
/// strictly between them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealRoot {
    pub lo: Rational,
    pub hi: Rational,
}

impl RealRoot {
    pub fn interval(&self) -> Interval {
        Interval::new(self.lo.clone(), self.hi.clone())
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    /// Bisects until the width is at most `eps`.
    pub fn refine(&mut self, p: &QPoly, eps: &Rational) {
        if self.is_exact() {
            return;
        }
        let lo_positive = p.eval(&self.lo).is_positive();
        while &(&self.hi - &self.lo) > eps {
            let mid = (&self.lo + &self.hi) / BigInt::from(2);
            let v = p.eval(&mid);
            if v.is_zero() {
                self.lo = mid.clone();
                self.hi = mid;
                return;
            }
            if v.is_positive() == lo_positive {
                self.lo = mid;
            } else {
                self.hi = mid;
            }
        }
    }
}

/// Isolates every real root of a squarefree polynomial, ascending, with
/// dyadic endpoints.
pub fn isolate_real_roots(p: &QPoly) -> Vec<RealRoot> {
    let Some(deg) = p.degree() else {
        return vec![];
    };
    if deg == 0 {
        return vec![];
    }
    let sturm = p.sturm_sequence();
    let bound = p.root_bound_pow2();
    let mut out = Vec::new();
    let mut stack = vec![(-bound.clone(), bound)];
    while let Some((a, b)) = stack.pop() {
        match sturm.count_roots(&a, &b) {
            0 => {}
            1 => out.push(tidy_isolating_interval(p, &sturm, a, b)),
            _ => {
                let mid = (&a + &b) / BigInt::from(2);
                stack.push((a, mid.clone()));
                stack.push((mid, b));
            }
        }
    }
    out.sort_by(|x, y| x.lo.cmp(&y.lo));
    out
}

fn tidy_isolating_interval(p: &QPoly, sturm: &SturmSequence, mut a: Rational, b: Rational) -> RealRoot {
    if p.eval(&b).is_zero() {
        return RealRoot { lo: b.clone(), hi: b };
    }
    // The root is strictly inside (a, b); move `a` off any root it sits on.
    let mut hi = b;
    while p.eval(&a).is_zero() {
        let mid = (&a + &hi) / BigInt::from(2);
        if p.eval(&mid).is_zero() {
            return RealRoot {
                lo: mid.clone(),
                hi: mid,
            };
        }
        if sturm.count_roots(&a, &mid) == 1 {
            hi = mid;
        } else {
            a = mid;
        }
    }
    RealRoot { lo: a, hi }
}

/// Integer content-free version of a rational polynomial (positive leading coefficient).
pub fn primitive_integer_coeffs(p: &QPoly) -> Vec<BigInt> {
    let lcm = p.coeffs().iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = p
        .coeffs()
        .iter()
        .map(|c| (c * Rational::from_integer(lcm.clone())).to_integer())
        .collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if g.is_zero() {
        return ints;
    }
    let sign = if p.lead().is_negative() {
        -BigInt::one()
    } else {
        BigInt::one()
    };
    ints.into_iter().map(|c| c / &g * &sign).collect()
}

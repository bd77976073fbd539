//! Exact arithmetic in `Q(b)` for a real algebraic number `b`, given by a
//! monic integer polynomial and the rank of the chosen real root.
//!
//! Elements are coefficient vectors reduced modulo the polynomial. Equality
//! is exact; ordering is decided by evaluating on a cached dyadic enclosure
//! of `b`, narrowed by bisection until the sign is certain.

mod complex;
mod element;

use std::cmp::Ordering;
use std::sync::RwLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

pub use complex::{count_roots_in_box, isolate_complex_roots, refine_box, ComplexBox};
pub use element::FieldElement;

use crate::error::{Error, Result};
use crate::interval::{rational_to_f64, Interval};
use crate::poly::{isolate_real_roots, IntPolynomial, QPoly, RealRoot};
use crate::Rational;

/// Rounds of halving allowed in a single comparison before giving up.
pub const CMP_REFINEMENT_CAP: usize = 4096;
/// Initial enclosure width of `b` is at most `2^-INITIAL_PRECISION_BITS`.
const INITIAL_PRECISION_BITS: u32 = 64;
const COMPLEX_BOX_BUDGET: usize = 20_000;
/// Box subdivisions per conjugate allowed by [`NumberField::is_pisot`].
pub const PISOT_REFINEMENT_BUDGET: usize = 200;

/// Enclosure `[lo / 2^shift, hi / 2^shift]` of the chosen root.
#[derive(Clone, Debug)]
struct DyadicEnclosure {
    lo: BigInt,
    hi: BigInt,
    shift: u32,
}

impl DyadicEnclosure {
    fn from_root(root: &RealRoot) -> Self {
        let shift = root.lo.denom().bits().max(root.hi.denom().bits()).saturating_sub(1) as u32;
        let scale = BigInt::one() << shift as usize;
        let lo = (&root.lo * &scale).to_integer();
        let hi = (&root.hi * &scale).to_integer();
        debug_assert_eq!(Rational::new(lo.clone(), scale.clone()), root.lo);
        DyadicEnclosure { lo, hi, shift }
    }

    fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    fn interval(&self) -> Interval {
        let d = BigInt::one() << self.shift as usize;
        Interval::new(
            Rational::new(self.lo.clone(), d.clone()),
            Rational::new(self.hi.clone(), d),
        )
    }

    fn width(&self) -> Rational {
        Rational::new(&self.hi - &self.lo, BigInt::one() << self.shift as usize)
    }
}

/// Integer Horner evaluation of `sum p_i N^i 2^{s(d-1-i)}` over `N` in
/// `[lo, hi]`, where `lo > 0`. The result has the sign of `sum p_i x^i` for
/// `x = N / 2^s`.
fn eval_scaled(ints: &[BigInt], enc: &DyadicEnclosure) -> (BigInt, BigInt) {
    let n = ints.len();
    let mut lo = ints[n - 1].clone();
    let mut hi = lo.clone();
    for (j, c) in ints[..n - 1].iter().enumerate().rev() {
        let scale = BigInt::one() << (enc.shift as usize * (n - 1 - j));
        let add = c * &scale;
        let (a, b) = if lo.is_negative() {
            (&lo * &enc.hi, &lo * &enc.lo)
        } else {
            (&lo * &enc.lo, &lo * &enc.hi)
        };
        let (c2, d2) = if hi.is_negative() {
            (&hi * &enc.hi, &hi * &enc.lo)
        } else {
            (&hi * &enc.lo, &hi * &enc.hi)
        };
        let new_lo = if a < c2 { a } else { c2 };
        let new_hi = if b > d2 { b } else { d2 };
        lo = new_lo + &add;
        hi = new_hi + &add;
    }
    (lo, hi)
}

/// Clears denominators: returns integer coefficients and the positive common
/// denominator.
fn clear_denominators(coeffs: &[Rational]) -> (Vec<BigInt>, BigInt) {
    let l = coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints = coeffs.iter().map(|c| c.numer() * (&l / c.denom())).collect();
    (ints, l)
}

/// Outcome of the Pisot test.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PisotStatus {
    Pisot,
    NotPisot,
    Unknown,
}

/// Certificate produced by [`NumberField::is_pisot`].
#[derive(Clone, Debug, Serialize)]
pub struct PisotCertificate {
    pub status: PisotStatus,
    pub is_pisot: bool,
    #[serde(serialize_with = "ser_rational")]
    pub beta_lower: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub beta_upper: Rational,
    /// Upper bound on the largest conjugate modulus over the final boxes.
    #[serde(serialize_with = "ser_rational")]
    pub max_conjugate_modulus_upper: Rational,
    /// Index of a conjugate certified to have modulus at least 1.
    pub witness_conjugate: Option<usize>,
    pub refinement_budget: usize,
}

fn ser_rational<S: serde::Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

/// Rational upper bound on `sqrt(s)`, strictly below 1 whenever `s < 1`.
fn sqrt_upper(s: &Rational) -> Rational {
    if s.is_zero() {
        return Rational::zero();
    }
    let approx = rational_to_f64(s).sqrt() * (1.0 + 1e-12) + 1e-300;
    let mut r = Rational::from_float(approx).unwrap_or_else(|| s + Rational::one());
    while &(&r * &r) < s {
        r = &r * Rational::new(1001.into(), 1000.into());
    }
    let am = (Rational::one() + s) / BigInt::from(2);
    if am < r {
        am
    } else {
        r
    }
}

/// A real number field `Q(b)`.
#[derive(Debug)]
pub struct NumberField {
    min_poly: IntPolynomial,
    poly: QPoly,
    degree: usize,
    root_rank: usize,
    /// `b^d, ..., b^{2d-2}` reduced to the power basis.
    reduction: Vec<Vec<BigInt>>,
    enclosure: RwLock<DyadicEnclosure>,
    /// Isolating boxes of the other roots, computed on first use.
    conjugates: RwLock<Option<Vec<ComplexBox>>>,
}

impl NumberField {
    /// Builds `Q(b)` where `b` is the `root_rank`-th largest real root of
    /// `min_poly` (0 = largest). The root must exceed 1.
    pub fn new(min_poly: IntPolynomial, root_rank: usize) -> Result<Self> {
        let poly = min_poly.to_qpoly();
        let degree = min_poly.degree();
        if !poly.is_squarefree() {
            return Err(Error::NotSquarefree);
        }
        let mut roots = isolate_real_roots(&poly);
        let real_roots = roots.len();
        if root_rank >= real_roots {
            return Err(Error::NoRealRootAboveOne {
                rank: root_rank,
                real_roots,
            });
        }
        let mut root = roots.remove(real_roots - 1 - root_rank);
        let one = Rational::one();
        while !root.is_exact() && root.lo < one && one < root.hi {
            let w = (&root.hi - &root.lo) / BigInt::from(2);
            root.refine(&poly, &w);
        }
        let above_one = if root.is_exact() { root.lo > one } else { root.lo >= one };
        if !above_one {
            return Err(Error::NoRealRootAboveOne {
                rank: root_rank,
                real_roots,
            });
        }
        let eps = Rational::new(BigInt::one(), BigInt::one() << INITIAL_PRECISION_BITS as usize);
        root.refine(&poly, &eps);

        let reduction = reduction_table(&min_poly);
        Ok(NumberField {
            min_poly,
            poly,
            degree,
            root_rank,
            reduction,
            enclosure: RwLock::new(DyadicEnclosure::from_root(&root)),
            conjugates: RwLock::new(None),
        })
    }

    /// Isolates all complex roots and drops the box holding `b`.
    fn locate_conjugates(&self) -> Vec<ComplexBox> {
        let mut boxes = isolate_complex_roots(&self.poly, COMPLEX_BOX_BUDGET)
            .expect("complex root isolation failed for a squarefree polynomial");
        for _ in 0..COMPLEX_BOX_BUDGET {
            let beta = self.beta_interval();
            let hits: Vec<usize> = boxes
                .iter()
                .enumerate()
                .filter(|(_, b)| b.im.contains_zero() && b.re.intersects(&beta))
                .map(|(i, _)| i)
                .collect();
            if hits.len() == 1 {
                boxes.remove(hits[0]);
                return boxes;
            }
            for i in hits {
                boxes[i] = refine_box(&self.poly, &boxes[i]).expect("refinement of an isolated root failed");
            }
            self.refine_beta();
        }
        panic!("could not separate the chosen root from its conjugates");
    }

    pub fn min_poly(&self) -> &IntPolynomial {
        &self.min_poly
    }

    pub fn poly(&self) -> &QPoly {
        &self.poly
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn root_rank(&self) -> usize {
        self.root_rank
    }

    /// Current enclosure of `b` (narrows monotonically over time).
    pub fn beta_interval(&self) -> Interval {
        self.enclosure.read().unwrap().interval()
    }

    /// Current enclosures of the other roots.
    pub fn conjugate_boxes(&self) -> Vec<ComplexBox> {
        if let Some(b) = self.conjugates.read().unwrap().as_ref() {
            return b.clone();
        }
        let boxes = self.locate_conjugates();
        self.conjugates.write().unwrap().get_or_insert(boxes).clone()
    }

    pub fn beta_f64(&self) -> f64 {
        self.beta_interval().to_f64_mid()
    }

    /// Halves the cached enclosure of `b` unless another caller already did.
    fn refine_beta_below(&self, width: &Rational) {
        let mut enc = self.enclosure.write().unwrap();
        while !enc.is_exact() && &enc.width() >= width {
            let mid = &enc.lo + &enc.hi;
            let shift = enc.shift + 1;
            let lo = &enc.lo << 1usize;
            let hi = &enc.hi << 1usize;
            let probe = DyadicEnclosure {
                lo: mid.clone(),
                hi: mid.clone(),
                shift,
            };
            let (v, _) = eval_scaled(self.min_poly.coeffs(), &probe);
            let lo_probe = DyadicEnclosure {
                lo: lo.clone(),
                hi: lo.clone(),
                shift,
            };
            let (vlo, _) = eval_scaled(self.min_poly.coeffs(), &lo_probe);
            *enc = if v.is_zero() {
                DyadicEnclosure {
                    lo: mid.clone(),
                    hi: mid,
                    shift,
                }
            } else if v.is_positive() == vlo.is_positive() {
                DyadicEnclosure { lo: mid, hi, shift }
            } else {
                DyadicEnclosure { lo, hi: mid, shift }
            };
        }
    }

    fn refine_beta(&self) {
        let w = self.enclosure.read().unwrap().width();
        self.refine_beta_below(&w);
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement::zero(self.degree)
    }

    pub fn one(&self) -> FieldElement {
        FieldElement::one(self.degree)
    }

    pub fn from_rational(&self, c: Rational) -> FieldElement {
        FieldElement::from_rational(self.degree, c)
    }

    pub fn from_int(&self, c: i64) -> FieldElement {
        self.from_rational(Rational::from_integer(c.into()))
    }

    /// The element `b` itself.
    pub fn generator(&self) -> FieldElement {
        if self.degree == 1 {
            self.from_rational(-Rational::from_integer(self.min_poly.coeffs()[0].clone()))
        } else {
            let mut e = self.zero();
            e.coeffs[1] = Rational::one();
            e
        }
    }

    /// Validates the coefficient count of an element built elsewhere.
    pub fn element(&self, coeffs: Vec<Rational>) -> Result<FieldElement> {
        if coeffs.len() != self.degree {
            return Err(Error::DegreeMismatch {
                expected: self.degree,
                got: coeffs.len(),
            });
        }
        Ok(FieldElement::from_vec(coeffs))
    }

    pub fn check(&self, e: &FieldElement) -> Result<()> {
        if e.degree() != self.degree {
            return Err(Error::DegreeMismatch {
                expected: self.degree,
                got: e.degree(),
            });
        }
        Ok(())
    }

    /// Reduces an arbitrary polynomial in `b` into the power basis.
    pub fn reduce(&self, p: &QPoly) -> FieldElement {
        let r = p.rem(&self.poly);
        let mut coeffs = r.coeffs().to_vec();
        coeffs.resize(self.degree, Rational::zero());
        FieldElement::from_vec(coeffs)
    }

    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        a + b
    }

    pub fn sub(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        a - b
    }

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let d = self.degree;
        let mut prod = vec![Rational::zero(); 2 * d - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    prod[i + j] += x * y;
                }
            }
        }
        let (low, high) = prod.split_at_mut(d);
        for (k, c) in high.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (slot, r) in low.iter_mut().zip(&self.reduction[k]) {
                if !r.is_zero() {
                    *slot += c * r;
                }
            }
        }
        prod.truncate(d);
        FieldElement::from_vec(prod)
    }

    /// `b * a`, by a shift and one reduction step.
    pub fn mul_beta(&self, a: &FieldElement) -> FieldElement {
        let d = self.degree;
        let top = a.coeffs[d - 1].clone();
        let mut out = Vec::with_capacity(d);
        out.push(Rational::zero());
        out.extend(a.coeffs[..d - 1].iter().cloned());
        if !top.is_zero() {
            for (slot, r) in out.iter_mut().zip(&self.reduction[0]) {
                if !r.is_zero() {
                    *slot += &top * r;
                }
            }
        }
        FieldElement::from_vec(out)
    }

    /// Multiplicative inverse via the extended Euclidean algorithm.
    pub fn inv(&self, a: &FieldElement) -> Result<FieldElement> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let ap = QPoly::new(a.coeffs.clone());
        let (g, s, _) = QPoly::ext_gcd(&ap, &self.poly);
        if g.degree() != Some(0) {
            return Err(Error::NotInvertible);
        }
        Ok(self.reduce(&s))
    }

    pub fn div(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    /// `a^e` for any integer exponent (negative exponents invert).
    pub fn pow(&self, a: &FieldElement, e: i64) -> Result<FieldElement> {
        let base = if e < 0 { self.inv(a)? } else { a.clone() };
        let mut n = e.unsigned_abs();
        let mut acc = self.one();
        let mut sq = base;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(&acc, &sq);
            }
            n >>= 1;
            if n > 0 {
                sq = self.mul(&sq, &sq);
            }
        }
        Ok(acc)
    }

    /// Sign of the real value of `a`.
    pub fn sign(&self, a: &FieldElement) -> Ordering {
        if a.is_zero() {
            return Ordering::Equal;
        }
        if let Some(r) = a.as_rational() {
            return r.cmp(&Rational::zero());
        }
        let (ints, _) = clear_denominators(&a.coeffs);
        for _ in 0..CMP_REFINEMENT_CAP {
            let enc = self.enclosure.read().unwrap().clone();
            let (lo, hi) = eval_scaled(&ints, &enc);
            if lo.is_positive() {
                return Ordering::Greater;
            }
            if hi.is_negative() {
                return Ordering::Less;
            }
            if enc.is_exact() {
                // Only reachable with a reducible polynomial and a rational root.
                return Ordering::Equal;
            }
            let half = enc.width() / BigInt::from(2);
            self.refine_beta_below(&half);
        }
        panic!(
            "{}: element {a} has no certified sign; is the polynomial reducible?",
            Error::RefinementCap(CMP_REFINEMENT_CAP)
        );
    }

    pub fn cmp(&self, a: &FieldElement, b: &FieldElement) -> Ordering {
        if a == b {
            return Ordering::Equal;
        }
        self.sign(&(a - b))
    }

    /// Enclosure of the real value of `a` with width at most `eps`.
    pub fn approx(&self, a: &FieldElement, eps: &Rational) -> Interval {
        assert!(eps.is_positive(), "approximation width must be positive");
        if let Some(r) = a.as_rational() {
            return Interval::point(r.clone());
        }
        let (ints, l) = clear_denominators(&a.coeffs);
        loop {
            let enc = self.enclosure.read().unwrap().clone();
            let (lo, hi) = eval_scaled(&ints, &enc);
            let denom = &l << (enc.shift as usize * (self.degree - 1));
            let out = Interval::new(Rational::new(lo, denom.clone()), Rational::new(hi, denom));
            if &out.width() <= eps || enc.is_exact() {
                return out;
            }
            let half = enc.width() / BigInt::from(2);
            self.refine_beta_below(&half);
        }
    }

    /// Approximate value for display; never used for decisions.
    pub fn to_f64(&self, a: &FieldElement) -> f64 {
        let eps = Rational::new(BigInt::one(), BigInt::one() << 60usize);
        let i = self.approx(a, &eps);
        i.to_f64_mid()
    }

    /// `floor(a)` exactly.
    pub fn floor(&self, a: &FieldElement) -> BigInt {
        let i = self.approx(a, &Rational::new(1.into(), 4.into()));
        let mut k = i.lo.floor().to_integer();
        // The answer is k or k+1; settle it with exact comparisons.
        loop {
            let next = self.from_rational(Rational::from_integer(&k + 1));
            if self.cmp(a, &next) == Ordering::Less {
                let cur = self.from_rational(Rational::from_integer(k.clone()));
                if self.cmp(a, &cur) != Ordering::Less {
                    return k;
                }
                k -= 1;
            } else {
                k += 1;
            }
        }
    }

    /// Sorts ascending by real value, comparing interval approximations first
    /// and falling back to exact comparison on overlap.
    pub fn sort(&self, elems: &mut [FieldElement]) {
        let eps = Rational::new(BigInt::one(), BigInt::one() << 80usize);
        let approx: Vec<Interval> = elems.iter().map(|e| self.approx(e, &eps)).collect();
        let mut idx: Vec<usize> = (0..elems.len()).collect();
        idx.sort_by(|&i, &j| {
            let (a, b) = (&approx[i], &approx[j]);
            if a.hi < b.lo {
                Ordering::Less
            } else if b.hi < a.lo {
                Ordering::Greater
            } else {
                self.cmp(&elems[i], &elems[j])
            }
        });
        let sorted: Vec<FieldElement> = idx.iter().map(|&i| elems[i].clone()).collect();
        elems.clone_from_slice(&sorted);
    }

    /// Tests whether `b` is a Pisot number by refining the conjugate boxes.
    pub fn is_pisot(&self) -> PisotCertificate {
        let mut boxes = self.conjugate_boxes();
        let one = Rational::one();
        let mut status = PisotStatus::Pisot;
        let mut witness = None;
        for (i, b) in boxes.iter_mut().enumerate() {
            let mut rounds = 0;
            loop {
                if b.max_modulus_sq() < one {
                    break;
                }
                if b.min_modulus_sq() >= one {
                    status = PisotStatus::NotPisot;
                    witness = Some(i);
                    break;
                }
                if rounds >= PISOT_REFINEMENT_BUDGET {
                    if status == PisotStatus::Pisot {
                        status = PisotStatus::Unknown;
                    }
                    break;
                }
                *b = refine_box(&self.poly, b).expect("refinement of an isolated root failed");
                rounds += 1;
            }
            if status == PisotStatus::NotPisot {
                break;
            }
        }
        {
            let mut cache = self.conjugates.write().unwrap();
            for (slot, b) in cache.iter_mut().flatten().zip(&boxes) {
                if b.width() < slot.width() {
                    *slot = b.clone();
                }
            }
        }
        let max_sq = boxes
            .iter()
            .map(|b| b.max_modulus_sq())
            .max()
            .unwrap_or_else(Rational::zero);
        let beta = self.beta_interval();
        PisotCertificate {
            status,
            is_pisot: status == PisotStatus::Pisot,
            beta_lower: beta.lo,
            beta_upper: beta.hi,
            max_conjugate_modulus_upper: sqrt_upper(&max_sq),
            witness_conjugate: witness,
            refinement_budget: PISOT_REFINEMENT_BUDGET,
        }
    }
}

fn reduction_table(p: &IntPolynomial) -> Vec<Vec<BigInt>> {
    let d = p.degree();
    // b^d = -(a_0 + a_1 b + ... + a_{d-1} b^{d-1})
    let base: Vec<BigInt> = p.coeffs()[..d].iter().map(|c| -c).collect();
    let mut table = vec![base.clone()];
    for _ in 1..d.saturating_sub(1) {
        let prev = table.last().unwrap();
        let top = prev[d - 1].clone();
        let mut next = vec![BigInt::zero(); d];
        next[1..d].clone_from_slice(&prev[..d - 1]);
        for (slot, r) in next.iter_mut().zip(&base) {
            *slot += &top * r;
        }
        table.push(next);
    }
    table
}

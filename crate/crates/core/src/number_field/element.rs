use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::interval::parse_rational;
use crate::Rational;

/// An element `c_0 + c_1 b + ... + c_{d-1} b^{d-1}` of a number field,
/// stored as its exact coefficient vector.
///
/// The coefficient vector is the canonical form: two elements of the same
/// field are equal iff their vectors are equal, so `Eq` and `Hash` can be used
/// for exact deduplication.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement {
    pub(crate) coeffs: Vec<Rational>,
}

impl FieldElement {
    pub(crate) fn from_vec(coeffs: Vec<Rational>) -> Self {
        FieldElement { coeffs }
    }

    pub fn zero(degree: usize) -> Self {
        FieldElement {
            coeffs: vec![Rational::zero(); degree],
        }
    }

    pub fn from_rational(degree: usize, c: Rational) -> Self {
        let mut e = Self::zero(degree);
        e.coeffs[0] = c;
        e
    }

    pub fn one(degree: usize) -> Self {
        Self::from_rational(degree, Rational::one())
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// The rational value when every non-constant coefficient vanishes.
    pub fn as_rational(&self) -> Option<&Rational> {
        self.coeffs[1..].iter().all(|c| c.is_zero()).then(|| &self.coeffs[0])
    }

    pub fn scale(&self, c: &Rational) -> FieldElement {
        FieldElement {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn add_rational(&self, c: &Rational) -> FieldElement {
        let mut out = self.clone();
        out.coeffs[0] += c;
        out
    }
}

impl Add for &FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: &FieldElement) -> FieldElement {
        debug_assert_eq!(self.coeffs.len(), rhs.coeffs.len());
        FieldElement {
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: &FieldElement) -> FieldElement {
        debug_assert_eq!(self.coeffs.len(), rhs.coeffs.len());
        FieldElement {
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement {
            coeffs: self.coeffs.iter().map(|a| -a).collect(),
        }
    }
}

impl fmt::Display for FieldElement {
    /// Polynomial in `b`, e.g. `b^2 - 1/2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use num_traits::Signed;
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c.is_negative() { "-" } else { "+" })?;
            }
            first = false;
            if !mag.is_one() || i == 0 {
                if i > 0 && !mag.is_integer() {
                    write!(f, "({mag})")?;
                } else {
                    write!(f, "{mag}")?;
                }
                if i > 0 {
                    write!(f, "*")?;
                }
            }
            match i {
                0 => {}
                1 => write!(f, "b")?,
                _ => write!(f, "b^{i}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct ElementForm {
    coeffs: Vec<String>,
}

impl Serialize for FieldElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ElementForm {
            coeffs: self.coeffs.iter().map(|c| c.to_string()).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FieldElement {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let form = ElementForm::deserialize(d)?;
        if form.coeffs.is_empty() {
            return Err(serde::de::Error::custom("element needs at least one coefficient"));
        }
        let coeffs = form
            .coeffs
            .iter()
            .map(|c| parse_rational(c))
            .collect::<Result<Vec<_>, _>>()
            .map_err(serde::de::Error::custom)?;
        Ok(FieldElement { coeffs })
    }
}

#![allow(dead_code)]

use std::sync::Arc;

use betadim::{ExpansionParams, FieldElement, IntPolynomial, NumberField, Rational};

pub fn field(coeffs: &[i64]) -> Arc<NumberField> {
    Arc::new(NumberField::new(IntPolynomial::from_i64(coeffs).unwrap(), 0).unwrap())
}

pub fn params(coeffs: &[i64], m: u32) -> ExpansionParams {
    ExpansionParams::new(field(coeffs), m).unwrap()
}

pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

pub const GOLDEN: &[i64] = &[-1, -1, 1];
pub const PLASTIC: &[i64] = &[-1, -1, 0, 1];
pub const TRIBONACCI: &[i64] = &[-1, -1, -1, 1];
pub const QUARTIC: &[i64] = &[-1, 0, 0, -1, 1];
pub const SILVER: &[i64] = &[-1, -2, 1];
pub const CUBIC: &[i64] = &[-1, 1, -2, 1];
pub const QUINTIC: &[i64] = &[-1, -1, -1, -1, 0, 1];
pub const TETRANACCI: &[i64] = &[-1, -1, -1, -1, 1];

/// Pisot bases of degree at most 5 paired with digit bounds.
pub fn pisot_cases() -> Vec<(&'static str, &'static [i64], u32)> {
    vec![
        ("z^2-z-1", GOLDEN, 1),
        ("z^2-z-1", GOLDEN, 2),
        ("z^3-z-1", PLASTIC, 1),
        ("z^3-z^2-z-1", TRIBONACCI, 1),
        ("z^4-z^3-1", QUARTIC, 1),
        ("z^2-2z-1", SILVER, 2),
        ("z^3-2z^2+z-1", CUBIC, 1),
        ("z^5-z^3-z^2-z-1", QUINTIC, 1),
        ("z^4-z^3-z^2-z-1", TETRANACCI, 1),
    ]
}

/// `1/(b^2 - 1)`.
pub fn worked_point(f: &NumberField) -> FieldElement {
    let b = f.generator();
    f.inv(&f.sub(&f.mul(&b, &b), &f.one())).unwrap()
}

/// Sample points of `Q(b)` inside `[0, m/(b-1)]`: `1`, `1/2`, `b - 1`, `1/(b^2-1)`.
pub fn sample_points(p: &ExpansionParams) -> Vec<FieldElement> {
    let f = p.field();
    let b = f.generator();
    [f.one(), f.from_rational(q(1, 2)), f.sub(&b, &f.one()), worked_point(f)]
        .into_iter()
        .filter(|x| p.in_interval(x))
        .collect()
}

//! Shared fixtures for the criterion benchmarks.

use std::sync::Arc;

use betadim::{ExpansionParams, FieldElement, IntPolynomial, NumberField};

/// `b^5 = b^3 + b^2 + b + 1`, a Pisot base near 1.5342.
pub const QUINTIC: [i64; 6] = [-1, -1, -1, -1, 0, 1];

/// `b^2 = b + 1`.
pub const GOLDEN: [i64; 3] = [-1, -1, 1];

pub fn field(coeffs: &[i64]) -> NumberField {
    NumberField::new(IntPolynomial::from_i64(coeffs).unwrap(), 0).unwrap()
}

pub fn params(coeffs: &[i64], m: u32) -> ExpansionParams {
    ExpansionParams::new(Arc::new(field(coeffs)), m).unwrap()
}

/// `1 / (b^2 - 1)`.
pub fn start_point(params: &ExpansionParams) -> FieldElement {
    let f = params.field();
    let b = f.generator();
    f.inv(&f.sub(&f.mul(&b, &b), &f.one())).unwrap()
}

//! Certified isolation of complex roots in rational rectangles.
//!
//! Roots inside a rectangle are counted with the argument principle. Each
//! edge is split until the image of every piece is certified (by a centred
//! Taylor bound) to lie in an open half-plane; on such a piece the change of
//! argument is the short-way difference of a rational pseudo-angle, so the
//! winding number is computed exactly without floating point.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::interval::Interval;
use crate::poly::QPoly;
use crate::Rational;

const MAX_EDGE_DEPTH: u32 = 48;

/// Axis-aligned closed rectangle in the complex plane.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComplexBox {
    pub re: Interval,
    pub im: Interval,
}

impl ComplexBox {
    pub fn new(re: Interval, im: Interval) -> Self {
        ComplexBox { re, im }
    }

    /// Upper bound on `|z|^2` over the box.
    pub fn max_modulus_sq(&self) -> Rational {
        let x = max_abs(&self.re);
        let y = max_abs(&self.im);
        &x * &x + &y * &y
    }

    /// Lower bound on `|z|^2` over the box (exact minimum).
    pub fn min_modulus_sq(&self) -> Rational {
        let x = min_abs(&self.re);
        let y = min_abs(&self.im);
        &x * &x + &y * &y
    }

    pub fn width(&self) -> Rational {
        let w = self.re.width();
        let h = self.im.width();
        if w > h {
            w
        } else {
            h
        }
    }

    pub fn center_f64(&self) -> (f64, f64) {
        (self.re.to_f64_mid(), self.im.to_f64_mid())
    }

    fn split(&self, fx: &Rational, fy: &Rational) -> [ComplexBox; 4] {
        let xm = &self.re.lo + self.re.width() * fx;
        let ym = &self.im.lo + self.im.width() * fy;
        let left = Interval::new(self.re.lo.clone(), xm.clone());
        let right = Interval::new(xm, self.re.hi.clone());
        let bottom = Interval::new(self.im.lo.clone(), ym.clone());
        let top = Interval::new(ym, self.im.hi.clone());
        [
            ComplexBox::new(left.clone(), bottom.clone()),
            ComplexBox::new(right.clone(), bottom),
            ComplexBox::new(left, top.clone()),
            ComplexBox::new(right, top),
        ]
    }
}

fn max_abs(i: &Interval) -> Rational {
    let a = i.lo.abs();
    let b = i.hi.abs();
    if a > b {
        a
    } else {
        b
    }
}

fn min_abs(i: &Interval) -> Rational {
    if i.contains_zero() {
        Rational::zero()
    } else if i.lo.is_positive() {
        i.lo.clone()
    } else {
        -&i.hi
    }
}

fn q(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Split positions tried in order; off-centre fractions dodge roots that sit
/// exactly on a midpoint line (such as real roots on the axis).
fn split_fractions() -> Vec<(Rational, Rational)> {
    vec![
        (q(1, 2), q(1, 2)),
        (q(17, 32), q(15, 32)),
        (q(15, 32), q(19, 32)),
        (q(9, 16), q(7, 16)),
        (q(29, 64), q(37, 64)),
        (q(5, 11), q(6, 13)),
    ]
}

/// Pseudo-angle in `[0, 4)`, continuous and strictly increasing with the
/// argument, with `psi(-w) = psi(w) + 2 (mod 4)`.
fn pseudo_angle(u: &Rational, v: &Rational) -> Rational {
    let zero = Rational::zero();
    if u > &zero && v >= &zero {
        v / (u + v)
    } else if u <= &zero && v > &zero {
        Rational::one() + (-u) / (v - u)
    } else if u < &zero && v <= &zero {
        Rational::from_integer(2.into()) + (-v) / (-u - v)
    } else {
        Rational::from_integer(3.into()) + u / (u - v)
    }
}

struct EdgePoly {
    re: QPoly,
    im: QPoly,
}

impl EdgePoly {
    /// `p(z0 + t * dz)` split into real and imaginary parts, as polynomials in `t`.
    fn new(p: &QPoly, z0: (&Rational, &Rational), dz: (&Rational, &Rational)) -> Self {
        let a = QPoly::new(vec![z0.0.clone(), dz.0.clone()]);
        let b = QPoly::new(vec![z0.1.clone(), dz.1.clone()]);
        let mut re = QPoly::zero();
        let mut im = QPoly::zero();
        for c in p.coeffs().iter().rev() {
            let nre = re.mul(&a).sub(&im.mul(&b)).add(&QPoly::constant(c.clone()));
            let nim = re.mul(&b).add(&im.mul(&a));
            re = nre;
            im = nim;
        }
        EdgePoly { re, im }
    }

    /// Certifies `Re(conj(wm) * w(t)) > 0` for `|t - tm| <= r`, i.e. the
    /// image of the piece lies in the open half-plane facing `wm`.
    fn in_half_plane(&self, tm: &Rational, r: &Rational, wm: &(Rational, Rational)) -> bool {
        let centre = &wm.0 * &wm.0 + &wm.1 * &wm.1;
        if centre.is_zero() {
            return false;
        }
        let proj = self.re.scale(&wm.0).add(&self.im.scale(&wm.1));
        let taylor = taylor_shift(&proj, tm);
        let mut bound = Rational::zero();
        let mut rk = Rational::one();
        for c in taylor.iter().skip(1) {
            rk *= r;
            bound += c.abs() * &rk;
        }
        bound < centre
    }

    fn at(&self, t: &Rational) -> (Rational, Rational) {
        (self.re.eval(t), self.im.eval(t))
    }

    /// Four times the winding contribution of the edge, or `None` when a
    /// root is on (or too close to resolve from) the edge.
    fn quarter_turns(&self) -> Option<Rational> {
        let t0 = Rational::zero();
        let t1 = Rational::one();
        let w0 = self.at(&t0);
        let w1 = self.at(&t1);
        self.piece(t0, w0, t1, w1, 0)
    }

    fn piece(
        &self,
        t0: Rational,
        w0: (Rational, Rational),
        t1: Rational,
        w1: (Rational, Rational),
        depth: u32,
    ) -> Option<Rational> {
        if (w0.0.is_zero() && w0.1.is_zero()) || (w1.0.is_zero() && w1.1.is_zero()) {
            return None;
        }
        let tm = (&t0 + &t1) / BigInt::from(2);
        let wm = self.at(&tm);
        if self.in_half_plane(&tm, &(&t1 - &tm), &wm) {
            let two = Rational::from_integer(2.into());
            let four = Rational::from_integer(4.into());
            let mut d = pseudo_angle(&w1.0, &w1.1) - pseudo_angle(&w0.0, &w0.1);
            if d > two {
                d -= &four;
            } else if d < -&two {
                d += &four;
            }
            return Some(d);
        }
        if depth >= MAX_EDGE_DEPTH {
            return None;
        }
        let a = self.piece(t0, w0, tm.clone(), wm.clone(), depth + 1)?;
        let b = self.piece(tm, wm, t1, w1, depth + 1)?;
        Some(a + b)
    }
}

/// Coefficients of `p(t + c)` in powers of `t`.
fn taylor_shift(p: &QPoly, c: &Rational) -> Vec<Rational> {
    let mut a = p.coeffs().to_vec();
    let n = a.len();
    for i in 0..n {
        for j in (i..n - 1).rev() {
            let t = &a[j + 1] * c;
            a[j] += t;
        }
    }
    a
}

/// Number of roots of `p` inside the box, or `None` if a root lies on
/// (or numerically on) the boundary.
pub fn count_roots_in_box(p: &QPoly, b: &ComplexBox) -> Option<usize> {
    let corners = [
        (&b.re.lo, &b.im.lo),
        (&b.re.hi, &b.im.lo),
        (&b.re.hi, &b.im.hi),
        (&b.re.lo, &b.im.hi),
    ];
    let mut total = Rational::zero();
    for k in 0..4 {
        let z0 = corners[k];
        let z1 = corners[(k + 1) % 4];
        let dz = (z1.0 - z0.0, z1.1 - z0.1);
        let edge = EdgePoly::new(p, z0, (&dz.0, &dz.1));
        total += edge.quarter_turns()?;
    }
    let turns = total / BigInt::from(4);
    debug_assert!(turns.is_integer(), "winding number must be an integer");
    use num_traits::ToPrimitive;
    turns.to_integer().to_usize()
}

/// Splits a box into four children with root counts, retrying off-centre
/// split lines when a root falls on a line.
fn split_counted(p: &QPoly, b: &ComplexBox, parent_count: usize) -> Option<Vec<(ComplexBox, usize)>> {
    'outer: for (fx, fy) in split_fractions() {
        let children = b.split(&fx, &fy);
        let mut out = Vec::with_capacity(4);
        let mut seen = 0;
        for c in &children {
            let Some(n) = count_roots_in_box(p, c) else {
                continue 'outer;
            };
            seen += n;
            out.push((c.clone(), n));
        }
        if seen != parent_count {
            continue;
        }
        return Some(out);
    }
    None
}

/// Isolates every complex root of a squarefree polynomial into its own box.
/// Returns `None` when the box budget is exhausted.
pub fn isolate_complex_roots(p: &QPoly, budget: usize) -> Option<Vec<ComplexBox>> {
    let deg = p.degree()?;
    if deg == 0 {
        return Some(vec![]);
    }
    let r = p.root_bound_pow2();
    let start = ComplexBox::new(
        Interval::new(-&r - q(1, 3), &r + q(1, 5)),
        Interval::new(-&r - q(1, 7), &r + q(1, 11)),
    );
    let n = count_roots_in_box(p, &start)?;
    if n != deg {
        return None;
    }
    let mut queue = vec![(start, n)];
    let mut out = Vec::new();
    let mut steps = 0;
    while let Some((b, n)) = queue.pop() {
        match n {
            0 => {}
            1 => out.push(b),
            _ => {
                steps += 1;
                if steps > budget {
                    return None;
                }
                queue.extend(split_counted(p, &b, n)?);
            }
        }
    }
    Some(out)
}

/// Shrinks a box known to contain exactly one root to a child containing it.
pub fn refine_box(p: &QPoly, b: &ComplexBox) -> Option<ComplexBox> {
    split_counted(p, b, 1)?
        .into_iter()
        .find(|(_, n)| *n == 1)
        .map(|(c, _)| c)
}

//! Spectral analysis of a transition matrix: exact characteristic
//! polynomial, a certified enclosure of the Perron eigenvalue and a
//! nonnegative eigenvector, the dominance condition needed by the dimension
//! formula, and the resulting dimension and growth-rate enclosures.

use std::collections::VecDeque;

use nalgebra::{DMatrix, Schur};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::interval::{rational_to_f64, Interval};
use crate::orbit::{prefix_count_table, TransitionMatrix};
use crate::poly::{IntPolynomial, QPoly};
use crate::Rational;

/// Default width of the eigenvalue enclosure.
pub fn default_tol() -> Rational {
    Rational::new(1.into(), BigInt::from(10u64.pow(12)))
}

pub const DEFAULT_GAP_TOL: f64 = 1e-9;

/// Largest matrix size for which the primitivity exponent is computed directly.
pub const PRIMITIVITY_SEARCH_LIMIT: usize = 64;

type BigMatrix = Vec<Vec<BigInt>>;

/// Faddeev-LeVerrier over the integers. Returns the coefficients of
/// `det(zI - A)` (constant first) and the matrices `M_1..M_k` with
/// `adj(zI - A) = sum_j M_j z^(k-j)`.
fn faddeev_leverrier(a: &TransitionMatrix) -> (Vec<BigInt>, Vec<BigMatrix>) {
    let k = a.k();
    let rows = a.rows();
    let mut coeffs = vec![BigInt::zero(); k + 1];
    coeffs[k] = BigInt::from(1);
    let mut ms: Vec<BigMatrix> = Vec::with_capacity(k);
    let mut prev: BigMatrix = vec![vec![BigInt::zero(); k]; k];
    for j in 1..=k {
        // M_j = A M_{j-1} + c_{k-j+1} I
        let mut m: BigMatrix = (0..k)
            .map(|r| {
                (0..k)
                    .map(|c| {
                        let mut acc = BigInt::zero();
                        for (l, &e) in rows[r].iter().enumerate() {
                            if e == 1 {
                                acc += &prev[l][c];
                            }
                        }
                        acc
                    })
                    .collect()
            })
            .collect();
        for (i, row) in m.iter_mut().enumerate() {
            row[i] += &coeffs[k - j + 1];
        }
        // c_{k-j} = -tr(A M_j) / j
        let mut tr = BigInt::zero();
        for (r, row) in rows.iter().enumerate() {
            for (l, &e) in row.iter().enumerate() {
                if e == 1 {
                    tr += &m[l][r];
                }
            }
        }
        let (q, rem) = tr.div_rem(&BigInt::from(j));
        debug_assert!(rem.is_zero());
        coeffs[k - j] = -q;
        prev = m.clone();
        ms.push(m);
    }
    (coeffs, ms)
}

/// `det(zI - A)` with exact integer coefficients.
pub fn char_polynomial(a: &TransitionMatrix) -> IntPolynomial {
    let (coeffs, _) = faddeev_leverrier(a);
    IntPolynomial::new(coeffs).expect("characteristic polynomial is monic")
}

fn to_qpoly(coeffs: &[BigInt]) -> QPoly {
    QPoly::new(coeffs.iter().map(|c| Rational::from_integer(c.clone())).collect())
}

/// Certified Perron eigenvalue and eigenvector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PerronResult {
    /// Contains the Perron root and no other root of the characteristic polynomial.
    pub alpha: Interval,
    /// Nonnegative eigenvector, scaled so the largest entry has midpoint 1.
    pub eigenvector: Vec<Interval>,
    pub char_poly: IntPolynomial,
    /// Algebraic multiplicity of the Perron root.
    pub multiplicity: usize,
}

impl PerronResult {
    pub fn alpha_f64(&self) -> f64 {
        self.alpha.to_f64_mid()
    }

    /// Eigenvector enclosure rescaled to unit Euclidean norm.
    pub fn unit_eigenvector(&self) -> Vec<Interval> {
        let norm_sq = self
            .eigenvector
            .iter()
            .fold(Interval::zero(), |acc, v| acc.add(&v.mul(v)));
        let norm = norm_sq.sqrt();
        self.eigenvector
            .iter()
            .map(|v| v.div(&norm).expect("eigenvector is nonzero"))
            .collect()
    }

    pub fn unit_eigenvector_f64(&self) -> Vec<f64> {
        self.unit_eigenvector().iter().map(Interval::to_f64_mid).collect()
    }
}

/// Enclosure of the largest real root of `sqf` known to lie in `[lo, hi]`.
fn largest_root(sqf: &QPoly, mut lo: Rational, mut hi: Rational, tol: &Rational) -> Interval {
    let sturm = sqf.sturm_sequence();
    if sturm.count_roots(&lo, &hi) == 0 {
        debug_assert!(sqf.eval(&lo).is_zero());
        return Interval::point(lo);
    }
    // invariant: the largest root lies in (lo, hi]
    let two = BigInt::from(2);
    loop {
        if sqf.eval(&hi).is_zero() {
            return Interval::point(hi);
        }
        if &(&hi - &lo) <= tol && sturm.count_roots(&lo, &hi) == 1 {
            return Interval::new(lo, hi);
        }
        let mid = (&lo + &hi) / &two;
        if sturm.count_roots(&mid, &hi) >= 1 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
}

/// Whether `p` vanishes at the unique root of `sqf` in `alpha`.
fn vanishes_at(p: &QPoly, sqf: &QPoly, alpha: &Interval) -> bool {
    if p.is_zero() {
        return true;
    }
    if alpha.is_point() {
        return p.eval(&alpha.lo).is_zero();
    }
    let g = QPoly::gcd(p, sqf);
    if g.degree().unwrap_or(0) == 0 {
        return false;
    }
    g.sturm_sequence().count_roots(&alpha.lo, &alpha.hi) > 0
}

fn root_in(p: &QPoly, alpha: &Interval) -> bool {
    if p.degree().unwrap_or(0) == 0 {
        return false;
    }
    if alpha.is_point() {
        p.eval(&alpha.lo).is_zero()
    } else {
        p.sturm_sequence().count_roots(&alpha.lo, &alpha.hi) > 0
    }
}

fn nth_derivative(p: &QPoly, n: usize) -> QPoly {
    (0..n).fold(p.clone(), |acc, _| acc.derivative())
}

/// Isolates the Perron root to width at most `tol`, starting from the
/// row- and column-sum bounds, and extracts a nonnegative eigenvector from
/// the adjugate of `zI - A`.
#[allow(clippy::needless_range_loop)]
pub fn perron_eigenvalue(a: &TransitionMatrix, tol: &Rational) -> Result<PerronResult> {
    if a.is_zero() {
        return Err(Error::ZeroMatrix);
    }
    let k = a.k();
    let (coeffs, ms) = faddeev_leverrier(a);
    let p = to_qpoly(&coeffs);
    let sqf = p.squarefree_part();

    let rows = a.row_sums();
    let cols = a.col_sums();
    let lo = (*rows.iter().min().unwrap()).max(*cols.iter().min().unwrap());
    let hi = (*rows.iter().max().unwrap()).min(*cols.iter().max().unwrap());
    let alpha = largest_root(
        &sqf,
        Rational::from_integer(lo.into()),
        Rational::from_integer(hi.into()),
        tol,
    );

    let multiplicity = p
        .squarefree_decomposition()
        .iter()
        .position(|f| root_in(f, &alpha))
        .map(|i| i + 1)
        .expect("Perron root is a root of the characteristic polynomial");

    // adj(zI - A)[i][l] as a polynomial in z
    let entry = |i: usize, l: usize| -> QPoly {
        let mut c = vec![Rational::zero(); k];
        for (j, m) in ms.iter().enumerate() {
            c[k - 1 - j] = Rational::from_integer(m[i][l].clone());
        }
        QPoly::new(c)
    };
    let adj: Vec<Vec<QPoly>> = (0..k).map(|i| (0..k).map(|l| entry(i, l)).collect()).collect();

    // The lowest derivative of adj(zI - A) not vanishing at the root has
    // nonnegative columns in the kernel of (root I - A).
    let mut column = None;
    for order in 0..=k {
        let mut best: Option<(f64, usize, Vec<Option<QPoly>>)> = None;
        for l in 0..k {
            let col: Vec<Option<QPoly>> = (0..k)
                .map(|i| {
                    let d = nth_derivative(&adj[i][l], order);
                    (!vanishes_at(&d, &sqf, &alpha)).then_some(d)
                })
                .collect();
            let weight: f64 = col
                .iter()
                .flatten()
                .map(|d| d.eval_interval(&alpha).to_f64_mid().abs())
                .sum();
            if weight > 0.0 && best.as_ref().is_none_or(|b| weight > b.0) {
                best = Some((weight, l, col));
            }
        }
        if let Some(b) = best {
            column = Some(b.2);
            break;
        }
    }
    let column = column.expect("adjugate derivative of order below the multiplicity is nonzero");
    let zero = Rational::zero();
    let mut v: Vec<Interval> = column
        .iter()
        .map(|d| match d {
            None => Interval::zero(),
            Some(d) => {
                let e = d.eval_interval(&alpha);
                Interval::new(if e.lo < zero { zero.clone() } else { e.lo }, e.hi)
            }
        })
        .collect();
    let top = v.iter().map(|e| e.mid()).max().expect("nonempty eigenvector");
    for e in v.iter_mut() {
        *e = e.scale(&(Rational::from_integer(1.into()) / &top));
    }

    Ok(PerronResult {
        alpha,
        eigenvector: v,
        char_poly: IntPolynomial::new(coeffs).expect("monic"),
        multiplicity,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Condition1Status {
    VerifiedPrimitive,
    /// Numerical, not certified.
    VerifiedSpectralGap,
    FailedPeripheralSpectrum,
    Unknown,
}

impl Condition1Status {
    pub fn is_established(self) -> bool {
        matches!(
            self,
            Condition1Status::VerifiedPrimitive | Condition1Status::VerifiedSpectralGap
        )
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Condition1Report {
    pub status: Condition1Status,
    pub strongly_connected: bool,
    pub cycle_gcd: Option<u64>,
    /// Least `t` with `A^t` entrywise positive.
    pub primitivity_exponent: Option<usize>,
    pub perron_multiplicity: usize,
    /// Numerical moduli of all eigenvalues with multiplicity, descending;
    /// empty if the numeric iteration did not converge.
    pub moduli: Vec<f64>,
    /// Largest modulus after removing one copy of the Perron root.
    pub second_modulus: Option<f64>,
    pub numeric: bool,
}

fn successors(a: &TransitionMatrix) -> Vec<Vec<usize>> {
    a.rows()
        .iter()
        .map(|r| (0..r.len()).filter(|&j| r[j] == 1).collect())
        .collect()
}

fn reachable(adj: &[Vec<usize>]) -> Vec<Option<u64>> {
    let mut level = vec![None; adj.len()];
    level[0] = Some(0);
    let mut queue = VecDeque::from([0usize]);
    while let Some(u) = queue.pop_front() {
        let lu = level[u].unwrap();
        for &v in &adj[u] {
            if level[v].is_none() {
                level[v] = Some(lu + 1);
                queue.push_back(v);
            }
        }
    }
    level
}

pub fn is_strongly_connected(a: &TransitionMatrix) -> bool {
    let fwd = successors(a);
    let mut back = vec![Vec::new(); a.k()];
    for (u, vs) in fwd.iter().enumerate() {
        for &v in vs {
            back[v].push(u);
        }
    }
    reachable(&fwd).iter().all(Option::is_some) && reachable(&back).iter().all(Option::is_some)
}

/// Gcd of all cycle lengths, for a strongly connected graph.
pub fn cycle_gcd(a: &TransitionMatrix) -> u64 {
    let adj = successors(a);
    let level = reachable(&adj);
    let mut g = 0u64;
    for (u, vs) in adj.iter().enumerate() {
        for &v in vs {
            let (lu, lv) = (level[u].unwrap(), level[v].unwrap());
            g = g.gcd(&(lu + 1).abs_diff(lv));
        }
    }
    g
}

/// Least `t <= (k-1)^2 + 1` with `A^t > 0`, by boolean powers.
pub fn primitivity_exponent(a: &TransitionMatrix) -> Option<usize> {
    let k = a.k();
    assert!(k <= PRIMITIVITY_SEARCH_LIMIT);
    let full = if k == 64 { u64::MAX } else { (1u64 << k) - 1 };
    let base: Vec<u64> = a
        .rows()
        .iter()
        .map(|r| {
            r.iter()
                .enumerate()
                .fold(0u64, |acc, (j, &e)| acc | (u64::from(e) << j))
        })
        .collect();
    let mut power = base.clone();
    for t in 1..=(k - 1) * (k - 1) + 1 {
        if power.iter().all(|&r| r == full) {
            return Some(t);
        }
        power = power
            .iter()
            .map(|&r| (0..k).filter(|&l| r >> l & 1 == 1).fold(0u64, |acc, l| acc | base[l]))
            .collect();
    }
    None
}

/// Iteration cap for the numeric Schur decomposition, which can otherwise
/// cycle forever on some inputs.
const SCHUR_MAX_ITER: usize = 10_000;

/// Eigenvalue moduli of `m`, or `None` if the QR iteration does not converge
/// on `m` or its transpose.
pub fn eigenvalue_moduli(m: &DMatrix<f64>) -> Option<Vec<f64>> {
    let schur = Schur::try_new(m.clone(), f64::EPSILON, SCHUR_MAX_ITER)
        .or_else(|| Schur::try_new(m.transpose(), f64::EPSILON, SCHUR_MAX_ITER))?;
    Some(schur.complex_eigenvalues().iter().map(|z| z.norm()).collect())
}

fn companion_moduli(f: &QPoly) -> Option<Vec<f64>> {
    let n = f.degree().unwrap_or(0);
    if n == 0 {
        return Some(vec![]);
    }
    let f = f.monic();
    let c: Vec<f64> = f.coeffs().iter().map(rational_to_f64).collect();
    let m = DMatrix::<f64>::from_fn(n, n, |i, j| {
        if i == 0 {
            -c[n - 1 - j]
        } else if i == j + 1 {
            1.0
        } else {
            0.0
        }
    });
    eigenvalue_moduli(&m)
}

/// Decides whether the Perron root strictly dominates every other
/// eigenvalue in modulus.
pub fn check_condition1(a: &TransitionMatrix, pr: &PerronResult, numeric_gap_tol: f64) -> Condition1Report {
    let strongly_connected = is_strongly_connected(a);
    let cycle_gcd = strongly_connected.then(|| cycle_gcd(a));
    let primitive = cycle_gcd == Some(1);
    let primitivity_exponent = (primitive && a.k() <= PRIMITIVITY_SEARCH_LIMIT)
        .then(|| primitivity_exponent(a))
        .flatten();

    let alpha = pr.alpha_f64();
    let mut moduli = Vec::new();
    let mut rest = Vec::new();
    let mut converged = true;
    let factors = pr.char_poly.to_qpoly().squarefree_decomposition();
    for (i, f) in factors.iter().enumerate() {
        let Some(mut mods) = companion_moduli(f) else {
            converged = false;
            break;
        };
        for _ in 0..=i {
            moduli.extend(mods.iter().copied());
        }
        if i + 1 == pr.multiplicity && root_in(f, &pr.alpha) {
            let closest = (0..mods.len())
                .min_by(|&x, &y| (mods[x] - alpha).abs().total_cmp(&(mods[y] - alpha).abs()))
                .expect("factor has the Perron root");
            let perron = mods.remove(closest);
            for _ in 0..i {
                rest.push(perron);
            }
        }
        for _ in 0..=i {
            rest.extend(mods.iter().copied());
        }
    }
    if !converged {
        moduli.clear();
        rest.clear();
    }
    moduli.sort_by(|x, y| y.total_cmp(x));
    let second_modulus = rest.iter().copied().reduce(f64::max);

    let (status, numeric) = if primitive {
        (Condition1Status::VerifiedPrimitive, false)
    } else if pr.multiplicity > 1 {
        (Condition1Status::FailedPeripheralSpectrum, false)
    } else if !converged {
        (Condition1Status::Unknown, true)
    } else {
        match second_modulus {
            None => (Condition1Status::VerifiedSpectralGap, true),
            Some(s) if !s.is_finite() => (Condition1Status::Unknown, true),
            Some(s) if s < alpha - numeric_gap_tol => (Condition1Status::VerifiedSpectralGap, true),
            Some(s) if s <= alpha + numeric_gap_tol => (Condition1Status::FailedPeripheralSpectrum, true),
            Some(_) => (Condition1Status::Unknown, true),
        }
    };
    Condition1Report {
        status,
        strongly_connected,
        cycle_gcd,
        primitivity_exponent,
        perron_multiplicity: pr.multiplicity,
        moduli,
        second_modulus,
        numeric,
    }
}

/// `log_{m+1}(alpha)`: the Hausdorff dimension of the expansion set and
/// the exponential growth rate of prefix counts in base `m+1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DimensionResult {
    pub dim: Interval,
    pub growth_rate: Interval,
    pub condition1: Condition1Status,
}

/// `ln(alpha) / ln(m+1)` as a certified enclosure (no condition check).
pub fn log_base(alpha: &Interval, m: u32) -> Interval {
    let base = Interval::point(Rational::from_integer((m + 1).into())).ln();
    let l = alpha.ln();
    let d = l.div(&base).expect("log of base is positive");
    d.intersect(&Interval::new(Rational::zero(), Rational::from_integer(1.into())))
        .unwrap_or(d)
}

pub fn dimension(m: u32, pr: &PerronResult, c1: &Condition1Report) -> Result<DimensionResult> {
    if !c1.status.is_established() {
        return Err(Error::Condition1NotEstablished(format!("{:?}", c1.status)));
    }
    if !pr.alpha.lo.is_positive() {
        return Err(Error::Condition1NotEstablished("Perron root is zero".into()));
    }
    let dim = log_base(&pr.alpha, m);
    Ok(DimensionResult {
        growth_rate: dim.clone(),
        dim,
        condition1: c1.status,
    })
}

/// Ratios `N_n(q) / alpha^n` over a range of `n`: empirical witnesses for
/// the lower and upper growth constants.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GrowthBand {
    pub n_lo: usize,
    pub n_hi: usize,
    /// Over every state.
    pub min_ratio: f64,
    pub max_ratio: f64,
    /// For state 0 (the starting point) only.
    pub start_min_ratio: f64,
    pub start_max_ratio: f64,
}

impl GrowthBand {
    pub fn spread(&self) -> f64 {
        self.max_ratio / self.min_ratio
    }
}

pub(crate) fn ln_biguint(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().unwrap().ln();
    }
    let shift = bits - 64;
    (x >> shift).to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
}

/// Band over the tail `n in [n_max/2, n_max]`.
pub fn growth_band(a: &TransitionMatrix, pr: &PerronResult, c1: &Condition1Report, n_max: usize) -> Result<GrowthBand> {
    growth_band_range(a, pr, c1, n_max / 2, n_max)
}

pub fn growth_band_range(
    a: &TransitionMatrix,
    pr: &PerronResult,
    c1: &Condition1Report,
    n_lo: usize,
    n_hi: usize,
) -> Result<GrowthBand> {
    if !c1.status.is_established() {
        return Err(Error::Condition1NotEstablished(format!("{:?}", c1.status)));
    }
    let ln_alpha = pr.alpha_f64().ln();
    let table = prefix_count_table(a, n_hi);
    let mut band = GrowthBand {
        n_lo,
        n_hi,
        min_ratio: f64::INFINITY,
        max_ratio: 0.0,
        start_min_ratio: f64::INFINITY,
        start_max_ratio: 0.0,
    };
    for (n, row) in table.iter().enumerate().skip(n_lo) {
        for (q, count) in row.iter().enumerate() {
            let r = (ln_biguint(count) - n as f64 * ln_alpha).exp();
            band.min_ratio = band.min_ratio.min(r);
            band.max_ratio = band.max_ratio.max(r);
            if q == 0 {
                band.start_min_ratio = band.start_min_ratio.min(r);
                band.start_max_ratio = band.start_max_ratio.max(r);
            }
        }
    }
    Ok(band)
}

fn ints<S: Serializer>(v: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
    let vals: Vec<serde_json::Value> = v
        .iter()
        .map(|c| match c.to_i64() {
            Some(i) => serde_json::Value::from(i),
            None => serde_json::Value::from(c.to_string()),
        })
        .collect();
    vals.serialize(s)
}

/// Machine-readable summary of the spectral pipeline.
#[derive(Clone, Debug, Serialize)]
pub struct SpectralReport {
    pub alpha: Interval,
    pub dim: Option<Interval>,
    pub condition1: Condition1Status,
    #[serde(serialize_with = "ints")]
    pub char_poly: Vec<BigInt>,
    pub eigenvector: Vec<Interval>,
    pub alpha_approx: f64,
    pub dim_approx: Option<f64>,
    pub eigenvector_approx: Vec<f64>,
    pub condition1_details: Condition1Report,
}

impl SpectralReport {
    pub fn new(pr: &PerronResult, c1: &Condition1Report, dim: Option<&DimensionResult>) -> Self {
        let unit = pr.unit_eigenvector();
        SpectralReport {
            alpha: pr.alpha.clone(),
            dim: dim.map(|d| d.dim.clone()),
            condition1: c1.status,
            char_poly: pr.char_poly.coeffs().to_vec(),
            eigenvector_approx: unit.iter().map(Interval::to_f64_mid).collect(),
            eigenvector: unit,
            alpha_approx: pr.alpha_f64(),
            dim_approx: dim.map(|d| d.dim.to_f64_mid()),
            condition1_details: c1.clone(),
        }
    }
}

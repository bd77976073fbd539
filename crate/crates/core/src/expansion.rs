//! The maps `T_i(x) = b*x - i` on `I = [0, m/(b-1)]`, branch sets, prefix
//! words and expansion generating functions.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::One;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::number_field::{FieldElement, NumberField};
use crate::Rational;

pub type Digit = u32;

/// A finite word over `{0, ..., m}`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DigitWord(pub Vec<Digit>);

impl DigitWord {
    pub fn new(digits: Vec<Digit>) -> Self {
        DigitWord(digits)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn digits(&self) -> &[Digit] {
        &self.0
    }

    /// Digits run together when `m <= 9`, comma separated otherwise.
    pub fn to_text(&self, m: u32) -> String {
        let parts: Vec<String> = self.0.iter().map(|d| d.to_string()).collect();
        if m <= 9 {
            parts.concat()
        } else {
            parts.join(",")
        }
    }

    pub fn parse(s: &str, m: u32) -> Result<Self> {
        let s = s.trim();
        let digits: Vec<Digit> = if s.contains(',') || m > 9 {
            s.split(',')
                .filter(|p| !p.trim().is_empty())
                .map(|p| p.trim().parse::<Digit>().map_err(|e| Error::Parse(e.to_string())))
                .collect::<Result<_>>()?
        } else {
            s.chars()
                .map(|c| c.to_digit(10).ok_or_else(|| Error::Parse(format!("bad digit {c:?}"))))
                .collect::<Result<_>>()?
        };
        if let Some(d) = digits.iter().find(|&&d| d > m) {
            return Err(Error::Parse(format!("digit {d} exceeds m = {m}")));
        }
        Ok(DigitWord(digits))
    }
}

/// Admissible digits at a point: those `i` with `T_i(x)` in `I`, ascending.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BranchSet {
    digits: Vec<Digit>,
}

impl BranchSet {
    pub fn digits(&self) -> &[Digit] {
        &self.digits
    }

    pub fn contains(&self, d: Digit) -> bool {
        self.digits.binary_search(&d).is_ok()
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    pub fn max(&self) -> Digit {
        *self.digits.last().expect("branch set is never empty on I")
    }

    pub fn min(&self) -> Digit {
        self.digits[0]
    }
}

/// The dynamical system fixed by a base `b` and a digit bound `m`.
#[derive(Clone, Debug)]
pub struct ExpansionParams {
    field: Arc<NumberField>,
    beta: FieldElement,
    m: u32,
    right_endpoint: FieldElement,
}

impl ExpansionParams {
    /// Requires `1 < b <= m + 1`.
    pub fn new(field: Arc<NumberField>, m: u32) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidDigitBound);
        }
        let beta = field.generator();
        let one = field.one();
        let top = field.from_int(i64::from(m) + 1);
        if field.cmp(&beta, &one) != Ordering::Greater || field.cmp(&beta, &top) == Ordering::Greater {
            return Err(Error::BaseOutOfRange { m });
        }
        let right_endpoint = field.inv(&(&beta - &one))?.scale(&Rational::from_integer(m.into()));
        Ok(ExpansionParams {
            field,
            beta,
            m,
            right_endpoint,
        })
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn beta(&self) -> &FieldElement {
        &self.beta
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// `m / (b - 1)`.
    pub fn right_endpoint(&self) -> &FieldElement {
        &self.right_endpoint
    }

    /// Membership in the closed interval `[0, m/(b-1)]`.
    pub fn in_interval(&self, x: &FieldElement) -> bool {
        self.field.sign(x) != Ordering::Less && self.field.cmp(x, &self.right_endpoint) != Ordering::Greater
    }

    /// Membership in the open interval `(0, m/(b-1))`.
    pub fn in_open_interval(&self, x: &FieldElement) -> bool {
        self.field.sign(x) == Ordering::Greater && self.field.cmp(x, &self.right_endpoint) == Ordering::Less
    }

    fn require_in_interval(&self, x: &FieldElement) -> Result<()> {
        self.field.check(x)?;
        if self.in_interval(x) {
            Ok(())
        } else {
            Err(Error::OutsideInterval)
        }
    }

    /// `T_i(x) = b*x - i`.
    pub fn apply_map(&self, digit: Digit, x: &FieldElement) -> FieldElement {
        self.field
            .mul_beta(x)
            .add_rational(&-Rational::from_integer(digit.into()))
    }

    fn admissible(&self, x: &FieldElement) -> Vec<Digit> {
        let y = self.field.mul_beta(x);
        let over = &y - &self.right_endpoint;
        (0..=self.m)
            .filter(|&i| {
                let c = self.field.from_int(i64::from(i));
                // 0 <= y - i  and  y - i <= R
                self.field.cmp(&y, &c) != Ordering::Less && self.field.cmp(&over, &c) != Ordering::Greater
            })
            .collect()
    }

    /// Digits whose map keeps `x` inside the interval.
    pub fn branch_digits(&self, x: &FieldElement) -> Result<BranchSet> {
        self.require_in_interval(x)?;
        let digits = self.admissible(x);
        debug_assert!(!digits.is_empty());
        Ok(BranchSet { digits })
    }

    /// Whether applying the maps of `w` in order keeps every point in `I`.
    pub fn is_prefix(&self, x: &FieldElement, w: &DigitWord) -> Result<bool> {
        self.require_in_interval(x)?;
        let mut cur = x.clone();
        for &d in w.digits() {
            if d > self.m {
                return Ok(false);
            }
            cur = self.apply_map(d, &cur);
            if !self.in_interval(&cur) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Number of `n`-prefixes of `x`, by exhaustive branching.
    pub fn count_prefixes_bruteforce(&self, x: &FieldElement, n: usize) -> Result<BigUint> {
        Ok(self.count_prefixes_bruteforce_upto(x, n)?.pop().unwrap())
    }

    /// Prefix counts for every length `0..=n` in one depth-first pass.
    pub fn count_prefixes_bruteforce_upto(&self, x: &FieldElement, n: usize) -> Result<Vec<BigUint>> {
        self.require_in_interval(x)?;
        // Breadth-first until there is enough work to share, then depth-first per subtree.
        let mut counts = vec![0u128; n + 1];
        let mut frontier = vec![x.clone()];
        let mut depth = 0;
        counts[0] = 1;
        while depth < n && frontier.len() < 64 {
            let next: Vec<FieldElement> = frontier
                .iter()
                .flat_map(|s| {
                    self.admissible(s)
                        .into_iter()
                        .map(|d| self.apply_map(d, s))
                        .collect::<Vec<_>>()
                })
                .collect();
            depth += 1;
            counts[depth] = next.len() as u128;
            frontier = next;
        }
        if depth < n {
            let remaining = n - depth;
            let sub = frontier
                .par_iter()
                .map(|s| {
                    let mut local = vec![0u128; remaining + 1];
                    self.dfs_count(s, remaining, &mut local);
                    local
                })
                .reduce(
                    || vec![0u128; remaining + 1],
                    |mut a, b| {
                        a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                        a
                    },
                );
            for (k, c) in sub.into_iter().enumerate().skip(1) {
                counts[depth + k] = c;
            }
        }
        Ok(counts.into_iter().map(BigUint::from).collect())
    }

    fn dfs_count(&self, root: &FieldElement, depth: usize, counts: &mut [u128]) {
        let mut stack = vec![(root.clone(), 0usize)];
        while let Some((s, k)) = stack.pop() {
            if k == depth {
                continue;
            }
            for d in self.admissible(&s) {
                counts[k + 1] += 1;
                stack.push((self.apply_map(d, &s), k + 1));
            }
        }
    }

    /// Iterates the expansion generating function of `rule` from `x`,
    /// stopping at the first exact recurrence of the state.
    pub fn generate_expansion(&self, x: &FieldElement, rule: &ExpansionRule, max_steps: usize) -> Result<ExpansionRun> {
        self.require_in_interval(x)?;
        if let ExpansionRule::IntervalTable(t) = rule {
            t.validate(self)?;
        }
        let mut seen: HashMap<(FieldElement, u8), usize> = HashMap::new();
        let mut digits = Vec::new();
        let mut states = Vec::new();
        let mut cur = x.clone();
        for step in 0..=max_steps {
            let phase = rule.phase(step);
            if let Some(&start) = seen.get(&(cur.clone(), phase)) {
                let mut run = ExpansionRun {
                    digits: DigitWord(digits),
                    preperiod_length: start,
                    period_length: Some(step - start),
                    states,
                };
                run.normalize();
                return Ok(run);
            }
            if step == max_steps {
                break;
            }
            seen.insert((cur.clone(), phase), step);
            let d = match rule {
                ExpansionRule::Greedy => self.branch_digits(&cur)?.max(),
                ExpansionRule::Lazy => self.branch_digits(&cur)?.min(),
                ExpansionRule::Alternating => {
                    let b = self.branch_digits(&cur)?;
                    if phase == 0 {
                        b.max()
                    } else {
                        b.min()
                    }
                }
                ExpansionRule::IntervalTable(t) => t.lookup(self, &cur),
            };
            digits.push(d);
            states.push(cur.clone());
            cur = self.apply_map(d, &cur);
        }
        Ok(ExpansionRun {
            digits: DigitWord(digits),
            preperiod_length: max_steps,
            period_length: None,
            states,
        })
    }

    /// Exact residual `x - sum_{i<=n} e_i b^{-i}`.
    pub fn residual(&self, x: &FieldElement, digits: &DigitWord) -> FieldElement {
        let f = &self.field;
        let inv_beta = f.inv(&self.beta).expect("b is nonzero");
        let mut power = f.one();
        let mut sum = f.zero();
        for &d in digits.digits() {
            power = f.mul(&power, &inv_beta);
            sum = &sum + &power.scale(&Rational::from_integer(d.into()));
        }
        x - &sum
    }

    /// Enclosure of `|x - sum_{i<=n} e_i b^{-i}|`.
    pub fn verify_expansion(&self, x: &FieldElement, digits: &DigitWord) -> Interval {
        let r = self.residual(x, digits);
        let eps = Rational::new(1.into(), num_bigint::BigInt::one() << 128usize);
        self.field.approx(&r, &eps).abs()
    }

    /// `(m/(b-1)) * b^{-n}`, the largest residual an `n`-prefix can leave.
    pub fn prefix_residual_bound(&self, n: usize) -> FieldElement {
        let f = &self.field;
        let p = f.pow(&self.beta, -(n as i64)).expect("b is nonzero");
        f.mul(&self.right_endpoint, &p)
    }
}

/// One piece of an interval-table rule.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RulePiece {
    pub lo: FieldElement,
    pub hi: FieldElement,
    pub lo_closed: bool,
    pub hi_closed: bool,
    pub digit: Digit,
}

/// A rule given by finitely many intervals partitioning `I`, each with a
/// fixed digit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntervalTable {
    pieces: Vec<RulePiece>,
}

impl IntervalTable {
    /// Validates disjointness, coverage of `I` and admissibility of each
    /// digit on its piece. Pieces may be given in any order.
    pub fn new(params: &ExpansionParams, mut pieces: Vec<RulePiece>) -> Result<Self> {
        let f = params.field();
        pieces.sort_by(|a, b| f.cmp(&a.lo, &b.lo).then(b.lo_closed.cmp(&a.lo_closed)));
        let t = IntervalTable { pieces };
        t.validate(params)?;
        Ok(t)
    }

    pub fn pieces(&self) -> &[RulePiece] {
        &self.pieces
    }

    fn validate(&self, params: &ExpansionParams) -> Result<()> {
        let f = params.field();
        let bad = |msg: String| Err(Error::InvalidRule(msg));
        let (Some(first), Some(last)) = (self.pieces.first(), self.pieces.last()) else {
            return bad("no pieces".into());
        };
        if !first.lo.is_zero() || !first.lo_closed {
            return bad("first piece must start at the closed endpoint 0".into());
        }
        if &last.hi != params.right_endpoint() || !last.hi_closed {
            return bad("last piece must end at the closed right endpoint".into());
        }
        for (k, p) in self.pieces.iter().enumerate() {
            f.check(&p.lo)?;
            f.check(&p.hi)?;
            match f.cmp(&p.lo, &p.hi) {
                Ordering::Greater => return bad(format!("piece {k} has lo > hi")),
                Ordering::Equal if !(p.lo_closed && p.hi_closed) => return bad(format!("piece {k} is empty")),
                _ => {}
            }
            if p.digit > params.m() {
                return bad(format!("piece {k} digit {} exceeds m", p.digit));
            }
            // T_d is increasing, so admissibility on the piece reduces to its endpoints.
            let at_lo = params.apply_map(p.digit, &p.lo);
            let at_hi = params.apply_map(p.digit, &p.hi);
            if f.sign(&at_lo) == Ordering::Less || f.cmp(&at_hi, params.right_endpoint()) == Ordering::Greater {
                return bad(format!("digit {} is not admissible on piece {k}", p.digit));
            }
            if let Some(next) = self.pieces.get(k + 1) {
                if p.hi != next.lo || p.hi_closed == next.lo_closed {
                    return bad(format!("pieces {k} and {} do not tile the interval", k + 1));
                }
            }
        }
        Ok(())
    }

    fn lookup(&self, params: &ExpansionParams, x: &FieldElement) -> Digit {
        let f = params.field();
        for p in &self.pieces {
            let above = match f.cmp(x, &p.lo) {
                Ordering::Greater => true,
                Ordering::Equal => p.lo_closed,
                Ordering::Less => false,
            };
            let below = match f.cmp(x, &p.hi) {
                Ordering::Less => true,
                Ordering::Equal => p.hi_closed,
                Ordering::Greater => false,
            };
            if above && below {
                return p.digit;
            }
        }
        unreachable!("validated table covers the interval")
    }
}

/// How the next digit is chosen among the admissible ones.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExpansionRule {
    /// Largest admissible digit.
    Greedy,
    /// Smallest admissible digit.
    Lazy,
    /// Largest on even steps, smallest on odd steps. Not a function of the
    /// point alone, so recurrence is tracked on (point, step parity).
    Alternating,
    IntervalTable(IntervalTable),
}

impl ExpansionRule {
    fn phase(&self, step: usize) -> u8 {
        match self {
            ExpansionRule::Alternating => (step % 2) as u8,
            _ => 0,
        }
    }
}

impl std::str::FromStr for ExpansionRule {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "greedy" => Ok(ExpansionRule::Greedy),
            "lazy" => Ok(ExpansionRule::Lazy),
            "alternating" => Ok(ExpansionRule::Alternating),
            other => Err(Error::Parse(format!("unknown rule {other:?}"))),
        }
    }
}

/// Output of [`ExpansionParams::generate_expansion`]: the preperiod followed
/// by one period, or the first `max_steps` digits if no recurrence was seen.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpansionRun {
    pub digits: DigitWord,
    pub preperiod_length: usize,
    pub period_length: Option<usize>,
    /// The state before each emitted digit.
    pub states: Vec<FieldElement>,
}

impl ExpansionRun {
    /// Shortest preperiod and period describing the same digits and states.
    /// Phase-tracking rules can detect a recurrence later than the point
    /// sequence alone would.
    fn normalize(&mut self) {
        let Some(mut q) = self.period_length else {
            return;
        };
        let mut pre = self.preperiod_length;
        let d = &self.digits.0;
        let s = &self.states;
        while pre > 0 && d[pre - 1] == d[pre - 1 + q] && s[pre - 1] == s[pre - 1 + q] {
            pre -= 1;
        }
        for p in 1..q {
            if q % p == 0 && (pre..pre + q - p).all(|i| d[i] == d[i + p] && s[i] == s[i + p]) {
                q = p;
                break;
            }
        }
        self.preperiod_length = pre;
        self.period_length = Some(q);
        self.digits.0.truncate(pre + q);
        self.states.truncate(pre + q);
    }

    pub fn is_periodic(&self) -> bool {
        self.period_length.is_some()
    }

    pub fn preperiod(&self) -> &[Digit] {
        &self.digits.0[..self.preperiod_length.min(self.digits.len())]
    }

    pub fn period(&self) -> Option<&[Digit]> {
        self.period_length.map(|_| &self.digits.0[self.preperiod_length..])
    }

    /// `11(0)` style text; unfinished runs end in `...`.
    pub fn to_text(&self, m: u32) -> String {
        let pre = DigitWord(self.preperiod().to_vec()).to_text(m);
        match self.period() {
            Some(p) => {
                let sep = if m > 9 && !pre.is_empty() { "," } else { "" };
                format!("{pre}{sep}({})", DigitWord(p.to_vec()).to_text(m))
            }
            None => format!("{pre}..."),
        }
    }

    /// Sums the eventually periodic digit sequence in closed form:
    /// `sum_{i<=p} e_i b^{-i} + b^{-p} S / (1 - b^{-q})`.
    pub fn value(&self, params: &ExpansionParams) -> Option<FieldElement> {
        let period = self.period()?;
        let f = params.field();
        let inv_beta = f.inv(params.beta()).ok()?;
        let partial = |digits: &[Digit]| {
            let mut power = f.one();
            let mut sum = f.zero();
            for &d in digits {
                power = f.mul(&power, &inv_beta);
                sum = &sum + &power.scale(&Rational::from_integer(d.into()));
            }
            (sum, power)
        };
        let (head, head_power) = partial(self.preperiod());
        let (cycle, cycle_power) = partial(period);
        let denom = &f.one() - &cycle_power;
        let tail = f.mul(&head_power, &f.div(&cycle, &denom).ok()?);
        Some(&head + &tail)
    }
}

#[derive(Serialize, Deserialize)]
struct RunForm {
    preperiod: Vec<Digit>,
    period: Option<Vec<Digit>>,
    states: Vec<FieldElement>,
}

impl Serialize for ExpansionRun {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RunForm {
            preperiod: self.preperiod().to_vec(),
            period: self.period().map(|p| p.to_vec()),
            states: self.states.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ExpansionRun {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let form = RunForm::deserialize(d)?;
        let preperiod_length = form.preperiod.len();
        let period_length = form.period.as_ref().map(|p| p.len());
        if period_length == Some(0) {
            return Err(serde::de::Error::custom("period must be nonempty"));
        }
        let mut digits = form.preperiod;
        digits.extend(form.period.unwrap_or_default());
        Ok(ExpansionRun {
            digits: DigitWord(digits),
            preperiod_length,
            period_length,
            states: form.states,
        })
    }
}

impl fmt::Display for DigitWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = self.0.iter().copied().max().unwrap_or(0);
        write!(f, "{}", self.to_text(m))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::IntPolynomial;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn params(coeffs: &[i64], m: u32) -> ExpansionParams {
        let f = NumberField::new(IntPolynomial::from_i64(coeffs).unwrap(), 0).unwrap();
        ExpansionParams::new(Arc::new(f), m).unwrap()
    }

    fn golden() -> ExpansionParams {
        params(&[-1, -1, 1], 1)
    }

    fn quintic() -> ExpansionParams {
        params(&[-1, -1, -1, -1, 0, 1], 1)
    }

    fn quintic_x(p: &ExpansionParams) -> FieldElement {
        let f = p.field();
        let b2 = f.mul(p.beta(), p.beta());
        f.inv(&(&b2 - &f.one())).unwrap()
    }

    #[test]
    fn base_range_is_checked() {
        let f = Arc::new(NumberField::new(IntPolynomial::from_i64(&[-1, -2, 1]).unwrap(), 0).unwrap());
        // 1 + sqrt(2) > 2
        assert_eq!(
            ExpansionParams::new(f.clone(), 1).unwrap_err(),
            Error::BaseOutOfRange { m: 1 }
        );
        assert!(ExpansionParams::new(f.clone(), 2).is_ok());
        assert_eq!(ExpansionParams::new(f, 0).unwrap_err(), Error::InvalidDigitBound);
        let two = Arc::new(NumberField::new(IntPolynomial::from_i64(&[-2, 1]).unwrap(), 0).unwrap());
        // b = m + 1 is allowed
        let p = ExpansionParams::new(two, 1).unwrap();
        assert_eq!(p.right_endpoint(), &p.field().one());
    }

    #[test]
    fn golden_interval_membership() {
        let p = golden();
        assert_eq!(p.right_endpoint(), p.beta());
        assert!(p.in_interval(p.beta()));
        assert!(!p.in_interval(&p.field().from_int(-1)));
        assert!(!p.in_open_interval(p.beta()));
    }

    #[test]
    fn maps() {
        let p = golden();
        let f = p.field();
        // b*b - 1 = b
        assert_eq!(p.apply_map(1, p.beta()), p.beta().clone());
        assert_eq!(p.apply_map(1, &f.one()), p.beta() - &f.one());
        assert_eq!(p.apply_map(0, &f.zero()), f.zero());
        let qp = quintic();
        let x = quintic_x(&qp);
        assert!(qp.in_interval(&x));
        let qf = qp.field();
        let expected = qf.mul(qp.beta(), &x);
        assert_eq!(qp.apply_map(0, &x), expected);
    }

    #[test]
    fn branch_sets() {
        let p = golden();
        let f = p.field();
        assert_eq!(p.branch_digits(&f.one()).unwrap().digits(), &[0, 1]);
        assert_eq!(p.branch_digits(&f.zero()).unwrap().digits(), &[0]);
        assert_eq!(p.branch_digits(p.right_endpoint()).unwrap().digits(), &[1]);
        assert_eq!(p.branch_digits(&f.from_int(5)), Err(Error::OutsideInterval));
    }

    #[test]
    fn prefixes() {
        let p = golden();
        let f = p.field();
        assert!(p.is_prefix(&f.one(), &DigitWord(vec![1, 0])).unwrap());
        assert!(p.is_prefix(&f.one(), &DigitWord(vec![])).unwrap());
        assert!(!p.is_prefix(&f.zero(), &DigitWord(vec![1])).unwrap());
    }

    #[test]
    fn golden_counts() {
        let p = golden();
        let one = p.field().one();
        let counts = p.count_prefixes_bruteforce_upto(&one, 3).unwrap();
        assert_eq!(counts, [1u32, 2, 3, 4].map(BigUint::from).to_vec());
        assert_eq!(p.count_prefixes_bruteforce(&one, 0).unwrap(), BigUint::from(1u32));
    }

    #[test]
    fn greedy_golden() {
        let p = golden();
        let run = p
            .generate_expansion(&p.field().one(), &ExpansionRule::Greedy, 100)
            .unwrap();
        assert_eq!(run.digits.digits(), &[1, 1, 0]);
        assert_eq!(run.preperiod_length, 2);
        assert_eq!(run.period_length, Some(1));
        assert_eq!(run.to_text(1), "11(0)");
        assert_eq!(run.value(&p).unwrap(), p.field().one());
    }

    #[test]
    fn zero_is_fixed() {
        let p = quintic();
        for rule in [ExpansionRule::Greedy, ExpansionRule::Lazy, ExpansionRule::Alternating] {
            let run = p.generate_expansion(&p.field().zero(), &rule, 10).unwrap();
            assert_eq!(run.to_text(1), "(0)", "{rule:?}");
        }
    }

    #[test]
    fn max_steps_without_period() {
        let p = golden();
        let run = p
            .generate_expansion(&p.field().from_rational(q(1, 7)), &ExpansionRule::Greedy, 1)
            .unwrap();
        assert!(!run.is_periodic());
        assert_eq!(run.digits.len(), 1);
        assert!(run.to_text(1).ends_with("..."));
    }

    #[test]
    fn residuals() {
        let p = golden();
        let f = p.field();
        assert_eq!(p.verify_expansion(&f.zero(), &DigitWord(vec![0; 5])), Interval::zero());
        assert!(p.residual(&f.one(), &DigitWord(vec![1, 1])).is_zero());
        let w = DigitWord(vec![1, 0, 1, 0, 1, 0, 1, 0]);
        assert!(p.is_prefix(&f.one(), &w).unwrap());
        let r = p.verify_expansion(&f.one(), &w);
        let bound = f.approx(&p.prefix_residual_bound(8), &q(1, 1 << 40));
        assert!(r.hi <= bound.hi);
    }

    #[test]
    fn interval_table_rule() {
        let p = golden();
        let f = p.field();
        let half = f.from_rational(q(1, 2));
        // [0, 1/2) -> 0, [1/2, b] -> 1 : digit 0 needs b*x <= b, digit 1 needs b*x >= 1.
        let bad = IntervalTable::new(
            &p,
            vec![
                RulePiece {
                    lo: f.zero(),
                    hi: half.clone(),
                    lo_closed: true,
                    hi_closed: false,
                    digit: 0,
                },
                RulePiece {
                    lo: half.clone(),
                    hi: p.right_endpoint().clone(),
                    lo_closed: true,
                    hi_closed: true,
                    digit: 1,
                },
            ],
        );
        assert!(matches!(bad, Err(Error::InvalidRule(_))));
        let cut = f.inv(p.beta()).unwrap();
        let table = IntervalTable::new(
            &p,
            vec![
                RulePiece {
                    lo: cut.clone(),
                    hi: p.right_endpoint().clone(),
                    lo_closed: true,
                    hi_closed: true,
                    digit: 1,
                },
                RulePiece {
                    lo: f.zero(),
                    hi: cut.clone(),
                    lo_closed: true,
                    hi_closed: false,
                    digit: 0,
                },
            ],
        )
        .unwrap();
        let rule = ExpansionRule::IntervalTable(table);
        let run = p.generate_expansion(&f.one(), &rule, 100).unwrap();
        assert!(run.is_periodic());
        assert_eq!(run.value(&p).unwrap(), f.one());
        let gap = IntervalTable::new(
            &p,
            vec![RulePiece {
                lo: f.zero(),
                hi: cut,
                lo_closed: true,
                hi_closed: true,
                digit: 0,
            }],
        );
        assert!(matches!(gap, Err(Error::InvalidRule(_))));
    }

    #[test]
    fn digit_word_text() {
        assert_eq!(DigitWord(vec![1, 0, 2]).to_text(2), "102");
        assert_eq!(DigitWord(vec![10, 0]).to_text(10), "10,0");
        assert_eq!(DigitWord::parse("102", 2).unwrap(), DigitWord(vec![1, 0, 2]));
        assert_eq!(DigitWord::parse("10,0", 10).unwrap(), DigitWord(vec![10, 0]));
        assert!(DigitWord::parse("3", 2).is_err());
    }

    #[test]
    fn run_json_round_trip() {
        let p = golden();
        let run = p
            .generate_expansion(&p.field().one(), &ExpansionRule::Lazy, 50)
            .unwrap();
        let s = serde_json::to_string(&run).unwrap();
        assert!(s.starts_with(r#"{"preperiod":"#));
        let back: ExpansionRun = serde_json::from_str(&s).unwrap();
        assert_eq!(back, run);
    }
}

//! Finite levels of the spectrum `{ sum_{i=1..n} e_i b^i : e_i in 0..=m }`
//! and statistics of the gaps between consecutive points.

use std::cmp::Ordering;
use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::number_field::{FieldElement, NumberField};
use crate::Rational;

/// Largest number of digit words enumerated for one level.
pub const ENUMERATION_LIMIT: u128 = 10_000_000;

/// Levels whose minimum gaps must agree for the sequence to count as stable.
pub const STABLE_WINDOW: usize = 3;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpectrumLevel {
    pub n: usize,
    /// Distinct values, strictly increasing.
    pub values: Vec<FieldElement>,
}

impl SpectrumLevel {
    pub fn count(&self) -> usize {
        self.values.len()
    }
}

fn check_size(m: u32, n: usize) -> Result<()> {
    let base = u128::from(m) + 1;
    let mut count: u128 = 1;
    for _ in 0..n {
        count = count.saturating_mul(base);
        if count > ENUMERATION_LIMIT {
            return Err(Error::TooLarge {
                count,
                limit: ENUMERATION_LIMIT,
            });
        }
    }
    Ok(())
}

/// Every level `1..=n_max`, each built from the previous one.
pub fn enumerate_levels(field: &NumberField, m: u32, n_max: usize) -> Result<Vec<SpectrumLevel>> {
    if m == 0 {
        return Err(Error::InvalidDigitBound);
    }
    check_size(m, n_max)?;
    let beta = field.generator();
    let mut power = field.one();
    let mut current: Vec<FieldElement> = vec![field.zero()];
    let mut out = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        power = field.mul(&power, &beta);
        let shifts: Vec<FieldElement> = (0..=m)
            .map(|e| power.scale(&Rational::from_integer(e.into())))
            .collect();
        let next: HashSet<FieldElement> = current
            .par_iter()
            .flat_map_iter(|y| shifts.iter().map(move |s| y + s))
            .collect();
        let mut values: Vec<FieldElement> = next.into_iter().collect();
        field.sort(&mut values);
        current = values.clone();
        out.push(SpectrumLevel { n, values });
    }
    Ok(out)
}

/// The level using exponents `1..=n`.
pub fn enumerate_spectrum(field: &NumberField, m: u32, n: usize) -> Result<SpectrumLevel> {
    if n == 0 {
        return Ok(SpectrumLevel {
            n,
            values: vec![field.zero()],
        });
    }
    Ok(enumerate_levels(field, m, n)?.pop().unwrap())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GapBucket {
    pub gap: FieldElement,
    pub enclosure: Interval,
    pub multiplicity: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GapStats {
    pub min_gap: Interval,
    pub max_gap: Interval,
    /// Distinct gaps in increasing order.
    pub histogram: Vec<GapBucket>,
    /// Extremes over gaps whose left point lies in the upper half of the
    /// level's range; a heuristic stand-in for the asymptotic quantities.
    pub tail_min_gap: Option<Interval>,
    pub tail_max_gap: Option<Interval>,
}

impl GapStats {
    pub fn min_gap_exact(&self) -> &FieldElement {
        &self.histogram.first().unwrap().gap
    }

    pub fn max_gap_exact(&self) -> &FieldElement {
        &self.histogram.last().unwrap().gap
    }
}

fn enclose(field: &NumberField, x: &FieldElement) -> Interval {
    field.approx(x, &Rational::new(1.into(), BigInt::from(1u128 << 64)))
}

pub fn gap_stats(field: &NumberField, level: &SpectrumLevel) -> Result<GapStats> {
    let v = &level.values;
    if v.len() < 2 {
        return Err(Error::TooFewPoints);
    }
    let top = v.last().unwrap();
    let mut counts: HashMap<FieldElement, usize> = HashMap::new();
    let mut tail: Vec<FieldElement> = Vec::new();
    for w in v.windows(2) {
        let g = &w[1] - &w[0];
        // left point in the upper half: 2 y > max
        if field.cmp(&(&w[0] + &w[0]), top) == Ordering::Greater {
            tail.push(g.clone());
        }
        *counts.entry(g).or_default() += 1;
    }
    let mut gaps: Vec<FieldElement> = counts.keys().cloned().collect();
    field.sort(&mut gaps);
    let histogram: Vec<GapBucket> = gaps
        .into_iter()
        .map(|g| GapBucket {
            enclosure: enclose(field, &g),
            multiplicity: counts[&g],
            gap: g,
        })
        .collect();
    let extreme = |ord: Ordering| {
        tail.iter()
            .cloned()
            .reduce(|a, b| if field.cmp(&b, &a) == ord { b } else { a })
            .map(|g| enclose(field, &g))
    };
    Ok(GapStats {
        min_gap: histogram.first().unwrap().enclosure.clone(),
        max_gap: histogram.last().unwrap().enclosure.clone(),
        tail_min_gap: extreme(Ordering::Less),
        tail_max_gap: extreme(Ordering::Greater),
        histogram,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LevelSummary {
    pub n: usize,
    pub count: usize,
    pub min_gap: Interval,
    pub max_gap: Interval,
}

/// Minimum gaps per level. Finite enumeration can only overestimate the
/// infimum of the gaps, so the last minimum is an upper bound on the
/// separation constant, never a lower bound.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SeparationEvidence {
    pub m: u32,
    pub levels: Vec<LevelSummary>,
    /// The last `STABLE_WINDOW` levels share the same exact minimum gap.
    pub stabilized: bool,
    pub separation_upper_bound: Interval,
}

impl SeparationEvidence {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("level,count,min_gap_lo,min_gap_hi,max_gap_lo,max_gap_hi\n");
        for l in &self.levels {
            let (a, b) = l.min_gap.decimal_bounds(12);
            let (c, d) = l.max_gap.decimal_bounds(12);
            let _ = writeln!(s, "{},{},{a},{b},{c},{d}", l.n, l.count);
        }
        s
    }
}

pub fn separation_evidence(field: &NumberField, m: u32, n_max: usize) -> Result<SeparationEvidence> {
    if n_max == 0 {
        return Err(Error::TooFewPoints);
    }
    let levels = enumerate_levels(field, m, n_max)?;
    let mut summaries = Vec::with_capacity(levels.len());
    let mut mins = Vec::with_capacity(levels.len());
    for level in &levels {
        let st = gap_stats(field, level)?;
        mins.push(st.min_gap_exact().clone());
        summaries.push(LevelSummary {
            n: level.n,
            count: level.count(),
            min_gap: st.min_gap.clone(),
            max_gap: st.max_gap.clone(),
        });
    }
    let stabilized = mins.len() >= STABLE_WINDOW && mins[mins.len() - STABLE_WINDOW..].windows(2).all(|w| w[0] == w[1]);
    Ok(SeparationEvidence {
        m,
        separation_upper_bound: summaries.last().unwrap().min_gap.clone(),
        levels: summaries,
        stabilized,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::IntPolynomial;

    fn field(c: &[i64]) -> NumberField {
        NumberField::new(IntPolynomial::from_i64(c).unwrap(), 0).unwrap()
    }

    #[test]
    fn base_two() {
        let f = field(&[-2, 1]);
        let l = enumerate_spectrum(&f, 1, 2).unwrap();
        let want: Vec<FieldElement> = [0, 2, 4, 6].iter().map(|&v| f.from_int(v)).collect();
        assert_eq!(l.values, want);
        let st = gap_stats(&f, &l).unwrap();
        assert_eq!(st.histogram.len(), 1);
        assert_eq!(st.histogram[0].gap, f.from_int(2));
        assert_eq!(st.histogram[0].multiplicity, 3);
        let ev = separation_evidence(&f, 1, 6).unwrap();
        assert!(ev.stabilized);
        assert!(ev
            .levels
            .iter()
            .all(|l| l.min_gap == Interval::point(Rational::from_integer(2.into()))));
    }

    #[test]
    fn golden_level_two() {
        let f = field(&[-1, -1, 1]);
        let b = f.generator();
        let b2 = f.mul(&b, &b);
        let l = enumerate_spectrum(&f, 1, 2).unwrap();
        assert_eq!(l.values, vec![f.zero(), b.clone(), b2.clone(), &b + &b2]);
        let st = gap_stats(&f, &l).unwrap();
        assert_eq!(st.min_gap_exact(), &f.one());
        assert_eq!(st.max_gap_exact(), &b);
        assert_eq!(
            st.histogram.iter().map(|h| h.multiplicity).collect::<Vec<_>>(),
            vec![1, 2]
        );
    }

    #[test]
    fn levels_grow_and_gaps_shrink() {
        let f = field(&[-1, -1, 1]);
        let levels = enumerate_levels(&f, 1, 10).unwrap();
        for w in levels.windows(2) {
            let next: HashSet<_> = w[1].values.iter().collect();
            assert!(w[0].values.iter().all(|v| next.contains(v)));
            let a = gap_stats(&f, &w[0]).unwrap();
            let b = gap_stats(&f, &w[1]).unwrap();
            assert_ne!(f.cmp(b.min_gap_exact(), a.min_gap_exact()), Ordering::Greater);
        }
        let ev = separation_evidence(&f, 1, 12).unwrap();
        assert!(ev.stabilized);
        assert!(ev.separation_upper_bound.lo > Rational::from_integer(0.into()));
    }

    #[test]
    fn guard_and_errors() {
        let f = field(&[-2, 1]);
        assert!(matches!(enumerate_spectrum(&f, 1, 24), Err(Error::TooLarge { .. })));
        let single = enumerate_spectrum(&f, 1, 0).unwrap();
        assert_eq!(gap_stats(&f, &single).unwrap_err(), Error::TooFewPoints);
    }

    #[test]
    fn csv_header_and_rows() {
        let f = field(&[-2, 1]);
        let csv = separation_evidence(&f, 1, 2).unwrap().to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "level,count,min_gap_lo,min_gap_hi,max_gap_lo,max_gap_hi");
        assert_eq!(
            lines[2],
            "2,4,2.000000000000,2.000000000000,2.000000000000,2.000000000000"
        );
    }
}

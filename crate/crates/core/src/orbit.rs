//! Orbit graphs: the closure of a point under the admissible branch maps,
//! the 0/1 transition matrix between its states, prefix counting by matrix
//! powers, and a coarse covering diagnostic.

use std::cmp::Ordering;
use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt::Write as _;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expansion::{Digit, ExpansionParams};
use crate::number_field::{FieldElement, NumberField};
use crate::poly::IntPolynomial;
use crate::Rational;

pub const DEFAULT_STATE_CAP: usize = 100_000;
pub const DEFAULT_DEPTH_CAP: usize = 1_000;

/// Transition `to = b * from - digit`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub from: usize,
    pub digit: Digit,
    pub to: usize,
}

/// A closed orbit. State 0 is the starting point; states are in
/// breadth-first discovery order with digits explored in ascending order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitGraph {
    states: Vec<FieldElement>,
    edges: Vec<Edge>,
    discovery_depth: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Cap {
    States,
    Depth,
}

/// Evidence that the orbit did not close within the caps.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DivergenceReport {
    pub states_found: usize,
    pub cap_hit: Cap,
    pub depth_reached: usize,
    pub sample_new_states: Vec<FieldElement>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OrbitOutcome {
    Closed(OrbitGraph),
    Diverged(DivergenceReport),
}

impl OrbitOutcome {
    pub fn closed(self) -> Option<OrbitGraph> {
        match self {
            OrbitOutcome::Closed(g) => Some(g),
            OrbitOutcome::Diverged(_) => None,
        }
    }
}

const SAMPLE_SIZE: usize = 8;

/// Breadth-first closure of `x` under the admissible maps.
pub fn compute_orbit(
    params: &ExpansionParams,
    x: &FieldElement,
    state_cap: usize,
    depth_cap: usize,
) -> Result<OrbitOutcome> {
    params.branch_digits(x)?;
    let mut index: HashMap<FieldElement, usize> = HashMap::new();
    let mut states = vec![x.clone()];
    let mut depth = vec![0usize];
    let mut edges = Vec::new();
    index.insert(x.clone(), 0);
    let mut queue = VecDeque::from([0usize]);
    let mut recent: VecDeque<FieldElement> = VecDeque::new();

    while let Some(q) = queue.pop_front() {
        let here = states[q].clone();
        let digits = params.branch_digits(&here)?;
        let mut targets = HashSet::new();
        for &d in digits.digits() {
            let y = params.apply_map(d, &here);
            let j = match index.get(&y) {
                Some(&j) => j,
                None => {
                    let j = states.len();
                    let dj = depth[q] + 1;
                    if dj > depth_cap || j >= state_cap {
                        recent.push_back(y);
                        if recent.len() > SAMPLE_SIZE {
                            recent.pop_front();
                        }
                        return Ok(OrbitOutcome::Diverged(DivergenceReport {
                            states_found: states.len(),
                            cap_hit: if dj > depth_cap { Cap::Depth } else { Cap::States },
                            depth_reached: depth[q],
                            sample_new_states: recent.into_iter().collect(),
                        }));
                    }
                    index.insert(y.clone(), j);
                    recent.push_back(y.clone());
                    if recent.len() > SAMPLE_SIZE {
                        recent.pop_front();
                    }
                    states.push(y);
                    depth.push(dj);
                    queue.push_back(j);
                    j
                }
            };
            assert!(targets.insert(j), "distinct digits reached the same state");
            edges.push(Edge {
                from: q,
                digit: d,
                to: j,
            });
        }
    }
    Ok(OrbitOutcome::Closed(OrbitGraph {
        states,
        edges,
        discovery_depth: depth,
    }))
}

/// Upper bound `floor(R / delta) + 1` on the number of states of any orbit,
/// given a lower bound `delta` on the separation of the spectrum.
pub fn orbit_size_bound(params: &ExpansionParams, delta: &Rational) -> Result<BigInt> {
    if *delta <= Rational::zero() {
        return Err(Error::InvalidGraph("separation bound must be positive".into()));
    }
    let field = params.field();
    let r = field.approx(
        params.right_endpoint(),
        &Rational::new(1.into(), BigInt::from(1u64 << 32)),
    );
    Ok((r.hi / delta).floor().to_integer() + BigInt::one())
}

/// The level set `S_n(x)`: images of `x` under all admissible words of
/// length `n`, deduplicated and sorted ascending.
pub fn orbit_level(params: &ExpansionParams, x: &FieldElement, n: usize) -> Result<Vec<FieldElement>> {
    params.branch_digits(x)?;
    let mut level: HashSet<FieldElement> = HashSet::from([x.clone()]);
    for _ in 0..n {
        let mut next = HashSet::new();
        for s in &level {
            for &d in params.branch_digits(s)?.digits() {
                next.insert(params.apply_map(d, s));
            }
        }
        level = next;
    }
    let mut out: Vec<FieldElement> = level.into_iter().collect();
    params.field().sort(&mut out);
    Ok(out)
}

impl OrbitGraph {
    pub fn states(&self) -> &[FieldElement] {
        &self.states
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn discovery_depth(&self) -> &[usize] {
        &self.discovery_depth
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn index_of(&self, s: &FieldElement) -> Option<usize> {
        self.states.iter().position(|t| t == s)
    }

    /// `perm[i]` is the index in this graph of `order[i]`, or `None` if the
    /// two state sets differ.
    pub fn permutation_to(&self, order: &[FieldElement]) -> Option<Vec<usize>> {
        if order.len() != self.states.len() {
            return None;
        }
        let perm: Option<Vec<usize>> = order.iter().map(|s| self.index_of(s)).collect();
        let perm = perm?;
        let distinct: HashSet<_> = perm.iter().collect();
        (distinct.len() == perm.len()).then_some(perm)
    }

    /// Checks every stated invariant: distinct states, all in the interval,
    /// correct edge images, and closure under all admissible digits.
    pub fn validate(&self, params: &ExpansionParams) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidGraph(m.to_string()));
        if self.states.is_empty() {
            return bad("no states");
        }
        if self.discovery_depth.len() != self.states.len() {
            return bad("depth list length differs from state count");
        }
        let mut seen = HashSet::new();
        for s in &self.states {
            params.field().check(s)?;
            if !params.in_interval(s) {
                return bad("state outside the interval");
            }
            if !seen.insert(s) {
                return bad("duplicate state");
            }
        }
        let k = self.states.len();
        let mut out: Vec<Vec<Digit>> = vec![Vec::new(); k];
        for e in &self.edges {
            if e.from >= k || e.to >= k {
                return bad("edge index out of range");
            }
            if params.apply_map(e.digit, &self.states[e.from]) != self.states[e.to] {
                return bad("edge target is not the image of its source");
            }
            out[e.from].push(e.digit);
        }
        for (q, s) in self.states.iter().enumerate() {
            let mut got = out[q].clone();
            got.sort_unstable();
            if got != params.branch_digits(s)?.digits() {
                return bad("orbit is not closed under the admissible maps");
            }
        }
        Ok(())
    }

    pub fn to_document(&self, params: &ExpansionParams) -> OrbitDocument {
        OrbitDocument {
            min_poly: params.field().min_poly().clone(),
            root_rank: params.field().root_rank(),
            m: params.m(),
            states: self.states.clone(),
            edges: self.edges.iter().map(|e| (e.from, e.digit, e.to)).collect(),
            discovery_depth: self.discovery_depth.clone(),
        }
    }

    /// Graphviz rendering; nodes show their index and a 5-place value.
    pub fn to_dot(&self, params: &ExpansionParams) -> String {
        let field = params.field();
        let eps = Rational::new(1.into(), BigInt::from(10u64.pow(9)));
        let mut s = String::from("digraph orbit {\n");
        for (j, st) in self.states.iter().enumerate() {
            let v = field.approx(st, &eps).to_f64_mid();
            let _ = writeln!(s, "  {j} [label=\"{j}: {v:.5}\"];");
        }
        for e in &self.edges {
            let _ = writeln!(s, "  {} -> {} [label=\"{}\"];", e.from, e.to, e.digit);
        }
        s.push_str("}\n");
        s
    }
}

/// Serialized orbit, self-describing so it can be reloaded without the
/// original command line.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitDocument {
    pub min_poly: IntPolynomial,
    pub root_rank: usize,
    pub m: u32,
    pub states: Vec<FieldElement>,
    pub edges: Vec<(usize, Digit, usize)>,
    #[serde(default)]
    pub discovery_depth: Vec<usize>,
}

impl OrbitDocument {
    pub fn params(&self) -> Result<ExpansionParams> {
        let field = NumberField::new(self.min_poly.clone(), self.root_rank)?;
        ExpansionParams::new(Arc::new(field), self.m)
    }

    /// Rebuilds the graph against `params`, validating all invariants.
    pub fn into_graph(self, params: &ExpansionParams) -> Result<OrbitGraph> {
        let discovery_depth = if self.discovery_depth.is_empty() {
            vec![0; self.states.len()]
        } else {
            self.discovery_depth
        };
        let g = OrbitGraph {
            states: self.states,
            edges: self
                .edges
                .into_iter()
                .map(|(from, digit, to)| Edge { from, digit, to })
                .collect(),
            discovery_depth,
        };
        g.validate(params)?;
        Ok(g)
    }
}

/// Square 0/1 matrix: entry `(q, j)` is 1 iff some map sends state `q` to `j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransitionMatrix {
    entries: Vec<Vec<u8>>,
}

impl TransitionMatrix {
    pub fn from_rows(entries: Vec<Vec<u8>>) -> Result<Self> {
        let k = entries.len();
        if k == 0 {
            return Err(Error::ZeroMatrix);
        }
        if entries.iter().any(|r| r.len() != k) {
            return Err(Error::InvalidGraph("matrix is not square".into()));
        }
        if entries.iter().flatten().any(|&v| v > 1) {
            return Err(Error::InvalidGraph("matrix entries must be 0 or 1".into()));
        }
        Ok(TransitionMatrix { entries })
    }

    pub fn k(&self) -> usize {
        self.entries.len()
    }

    pub fn rows(&self) -> &[Vec<u8>] {
        &self.entries
    }

    pub fn get(&self, q: usize, j: usize) -> u8 {
        self.entries[q][j]
    }

    pub fn row_sums(&self) -> Vec<usize> {
        self.entries
            .iter()
            .map(|r| r.iter().map(|&v| v as usize).sum())
            .collect()
    }

    pub fn col_sums(&self) -> Vec<usize> {
        (0..self.k())
            .map(|j| self.entries.iter().map(|r| r[j] as usize).sum())
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(|&v| v == 0)
    }

    /// `P A P^T` where row `i` of the result is row `perm[i]` of `self`.
    pub fn permuted(&self, perm: &[usize]) -> TransitionMatrix {
        let entries = perm
            .iter()
            .map(|&pi| perm.iter().map(|&pj| self.entries[pi][pj]).collect())
            .collect();
        TransitionMatrix { entries }
    }

    pub fn to_bigint_rows(&self) -> Vec<Vec<BigInt>> {
        self.entries
            .iter()
            .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
            .collect()
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        for r in &self.entries {
            let line: Vec<String> = r.iter().map(|v| v.to_string()).collect();
            s.push_str(&line.join(","));
            s.push('\n');
        }
        s
    }
}

pub fn transition_matrix(g: &OrbitGraph) -> TransitionMatrix {
    let k = g.len();
    let mut entries = vec![vec![0u8; k]; k];
    for e in g.edges() {
        assert_eq!(entries[e.from][e.to], 0, "two digits lead to the same state");
        entries[e.from][e.to] = 1;
    }
    TransitionMatrix { entries }
}

fn big_matmul(a: &[Vec<BigUint>], b: &[Vec<BigUint>]) -> Vec<Vec<BigUint>> {
    let k = a.len();
    (0..k)
        .map(|i| {
            (0..k)
                .map(|j| {
                    let mut acc = BigUint::zero();
                    for (l, ail) in a[i].iter().enumerate() {
                        if !ail.is_zero() && !b[l][j].is_zero() {
                            acc += ail * &b[l][j];
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

/// `A^n` over big integers by repeated squaring.
pub fn matrix_power(a: &TransitionMatrix, mut n: usize) -> Vec<Vec<BigUint>> {
    let k = a.k();
    let mut result: Vec<Vec<BigUint>> = (0..k)
        .map(|i| (0..k).map(|j| BigUint::from(u8::from(i == j))).collect())
        .collect();
    let mut base: Vec<Vec<BigUint>> = a
        .rows()
        .iter()
        .map(|r| r.iter().map(|&v| BigUint::from(v)).collect())
        .collect();
    while n > 0 {
        if n.is_odd() {
            result = big_matmul(&result, &base);
        }
        n >>= 1;
        if n > 0 {
            base = big_matmul(&base, &base);
        }
    }
    result
}

/// Above this size prefix counts iterate `A * v` instead of squaring `A`.
const SQUARING_LIMIT: usize = 64;

/// Number of length-`n` prefixes of state `q`: the `q`-th row sum of `A^n`.
pub fn count_prefixes_matrix(a: &TransitionMatrix, q: usize, n: usize) -> BigUint {
    if a.k() <= SQUARING_LIMIT {
        matrix_power(a, n)[q].iter().sum()
    } else {
        prefix_count_table(a, n).pop().unwrap().swap_remove(q)
    }
}

/// Row sums of `A^n` for every `n` in `0..=n_max`; entry `[n][q]` counts the
/// length-`n` prefixes of state `q`.
pub fn prefix_count_table(a: &TransitionMatrix, n_max: usize) -> Vec<Vec<BigUint>> {
    let succ: Vec<Vec<usize>> = a
        .rows()
        .iter()
        .map(|r| (0..r.len()).filter(|&j| r[j] == 1).collect())
        .collect();
    let mut v = vec![BigUint::one(); a.k()];
    let mut out = vec![v.clone()];
    for _ in 0..n_max {
        v = succ.iter().map(|js| js.iter().map(|&j| &v[j]).sum()).collect();
        out.push(v.clone());
    }
    out
}

/// Which of `N = ceil(R / eps)` equal cells of `[0, R]` hold an orbit state.
/// A finite orbit is never dense; this only measures coverage at one scale.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DensityReport {
    pub cells: usize,
    pub hit_cells: Vec<usize>,
    pub covering_fraction: f64,
    /// States in the open interval `(0, R)`.
    pub interior_states: usize,
}

pub fn density_diagnostic(params: &ExpansionParams, g: &OrbitGraph, eps: &FieldElement) -> Result<DensityReport> {
    let field = params.field();
    if field.sign(eps) != Ordering::Greater {
        return Err(Error::InvalidGraph("cell width must be positive".into()));
    }
    let r = params.right_endpoint();
    let ratio = field.div(r, eps)?;
    let cells = (-field.floor(&-&ratio)).max(BigInt::one());
    let cells: usize = cells.try_into().map_err(|_| Error::TooLarge {
        count: u128::MAX,
        limit: usize::MAX as u128,
    })?;
    let scale = field.div(&field.from_int(cells as i64), r)?;
    let mut hit = vec![false; cells];
    for s in g.states() {
        let c: usize = field.floor(&field.mul(s, &scale)).try_into().unwrap_or(0);
        hit[c.min(cells - 1)] = true;
    }
    let hit_cells: Vec<usize> = (0..cells).filter(|&c| hit[c]).collect();
    Ok(DensityReport {
        cells,
        covering_fraction: hit_cells.len() as f64 / cells as f64,
        hit_cells,
        interior_states: g.states().iter().filter(|s| params.in_open_interval(s)).count(),
    })
}

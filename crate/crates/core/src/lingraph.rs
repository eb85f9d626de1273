//! Pointed finite linear graphs and the morphisms between them.
//!
//! A graph with `n` vertices is always the labelled path `0 - 1 - ... - n-1`
//! with a loop at every vertex and `0` as its designated end vertex, so a
//! graph is fully described by its vertex count. A morphism is stored as its
//! value string `f(0), f(1), ..., f(n-1)`.
//!
//! A value string is a morphism when it starts at `0`, moves by at most one
//! per step, and splits into alternating monotone sweeps that run from one
//! end vertex of the codomain to the other. The number of sweeps is the
//! degree.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MorphismError {
    #[error("graph size {0} is below the minimum of 2 vertices")]
    GraphTooSmall(usize),
    #[error("value string has length {len}, expected domain size {dom}")]
    LengthMismatch { dom: usize, len: usize },
    #[error("value {value} at index {index} is not a vertex of a {cod}-vertex codomain")]
    ValueOutOfRange { index: usize, value: usize, cod: usize },
    #[error("zero vertex maps to {0}, not 0")]
    ZeroVertexViolation(usize),
    #[error("step from index {index} to {next} jumps by more than one vertex", next = .index + 1)]
    NotHomomorphism { index: usize },
    #[error("vertex or edge {0} of the codomain is not covered")]
    NotSurjective(String),
    #[error("no decomposition into alternating monotone sweeps between end vertices")]
    NoFold,
    #[error("codomain of the inner map ({inner_cod}) differs from domain of the outer map ({outer_dom})")]
    DomainMismatch { outer_dom: usize, inner_cod: usize },
    #[error("vertex {vertex} is out of range for a {n}-vertex graph")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("index range [{i}, {j}] is invalid for a string of length {len}")]
    IndexOutOfRange { i: usize, j: usize, len: usize },
}

impl MorphismError {
    pub fn name(&self) -> &'static str {
        match self {
            MorphismError::GraphTooSmall(_) => "GraphTooSmall",
            MorphismError::LengthMismatch { .. } => "LengthMismatch",
            MorphismError::ValueOutOfRange { .. } => "ValueOutOfRange",
            MorphismError::ZeroVertexViolation(_) => "ZeroVertexViolation",
            MorphismError::NotHomomorphism { .. } => "NotHomomorphism",
            MorphismError::NotSurjective(_) => "NotSurjective",
            MorphismError::NoFold => "NoFold",
            MorphismError::DomainMismatch { .. } => "DomainMismatch",
            MorphismError::VertexOutOfRange { .. } => "VertexOutOfRange",
            MorphismError::IndexOutOfRange { .. } => "IndexOutOfRange",
        }
    }
}

/// The pointed linear graph with `n` vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "usize", into = "usize")]
pub struct PointedLinearGraph {
    n: usize,
}

impl PointedLinearGraph {
    pub fn new(n: usize) -> Result<Self, MorphismError> {
        if n < 2 {
            return Err(MorphismError::GraphTooSmall(n));
        }
        Ok(Self { n })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    /// Label of the end vertex opposite the zero vertex.
    pub fn top(&self) -> usize {
        self.n - 1
    }

    pub fn is_edge(&self, x: usize, y: usize) -> bool {
        x < self.n && y < self.n && x.abs_diff(y) <= 1
    }

    pub fn end_vertices(&self) -> [usize; 2] {
        [0, self.n - 1]
    }
}

impl TryFrom<usize> for PointedLinearGraph {
    type Error = MorphismError;
    fn try_from(n: usize) -> Result<Self, Self::Error> {
        Self::new(n)
    }
}

impl From<PointedLinearGraph> for usize {
    fn from(g: PointedLinearGraph) -> usize {
        g.n
    }
}

impl fmt::Display for PointedLinearGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}]]", self.n)
    }
}

/// Length of the shortest edge path between two vertices.
pub fn graph_distance(g: PointedLinearGraph, x: usize, y: usize) -> Result<usize, MorphismError> {
    for v in [x, y] {
        if v >= g.n {
            return Err(MorphismError::VertexOutOfRange { vertex: v, n: g.n });
        }
    }
    Ok(x.abs_diff(y))
}

pub fn reverse(s: &[usize]) -> Vec<usize> {
    s.iter().rev().copied().collect()
}

/// The substring `s[i..=j]`.
pub fn restrict(s: &[usize], i: usize, j: usize) -> Result<Vec<usize>, MorphismError> {
    if i > j || j >= s.len() {
        return Err(MorphismError::IndexOutOfRange { i, j, len: s.len() });
    }
    Ok(s[i..=j].to_vec())
}

/// Turning indices `0 = i_0 < i_1 < ... < i_k = n-1` witnessing that a value
/// string is a morphism. The value at `i_j` is `0` for even `j` and the top
/// vertex for odd `j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FoldDecomposition {
    pub turning_indices: Vec<usize>,
}

impl FoldDecomposition {
    pub fn degree(&self) -> usize {
        self.turning_indices.len() - 1
    }

    /// Checks the three defining conditions against a value string.
    pub fn witnesses(&self, values: &[usize], cod: usize) -> bool {
        let t = &self.turning_indices;
        if t.len() < 2 || t[0] != 0 || *t.last().unwrap() + 1 != values.len() {
            return false;
        }
        if t.windows(2).any(|w| w[0] >= w[1]) {
            return false;
        }
        for (j, &i) in t.iter().enumerate() {
            let want = if j % 2 == 0 { 0 } else { cod - 1 };
            if values[i] != want {
                return false;
            }
        }
        t.windows(2).all(|w| {
            let seg = &values[w[0]..=w[1]];
            seg.windows(2).all(|p| p[0] <= p[1]) || seg.windows(2).all(|p| p[0] >= p[1])
        })
    }
}

/// Leftmost fold decomposition, or `None` when the string has none.
///
/// Each turning index is the first position where the current sweep reaches
/// the opposite end vertex; a constant tail after the final sweep is absorbed
/// into it so that the last turning index is `n - 1`.
pub(crate) fn canonical_fold(values: &[usize], cod: usize) -> Option<FoldDecomposition> {
    let n = values.len();
    let top = cod - 1;
    let mut turning = vec![0];
    let mut i = 0;
    loop {
        let here = values[i];
        if i + 1 == n {
            break;
        }
        if turning.len() >= 2 && values[i..].iter().all(|&v| v == here) {
            *turning.last_mut().unwrap() = n - 1;
            break;
        }
        let target = if here == 0 { top } else { 0 };
        let rising = target == top;
        let mut hit = None;
        for t in i + 1..n {
            let ok = if rising {
                values[t] >= values[t - 1]
            } else {
                values[t] <= values[t - 1]
            };
            if !ok {
                return None;
            }
            if values[t] == target {
                hit = Some(t);
                break;
            }
        }
        let t = hit?;
        turning.push(t);
        i = t;
    }
    if turning.len() < 2 {
        return None;
    }
    Some(FoldDecomposition {
        turning_indices: turning,
    })
}

/// A morphism between pointed linear graphs, stored as its value string.
///
/// Instances only come out of [`validate`] (or operations that preserve
/// validity), so every `Morphism` satisfies all of the defining conditions.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawMorphism", into = "RawMorphism")]
pub struct Morphism {
    cod: usize,
    values: Vec<usize>,
    fold: FoldDecomposition,
}

/// Wire form: `{"dom": n, "cod": m, "values": [...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawMorphism {
    pub dom: usize,
    pub cod: usize,
    pub values: Vec<usize>,
}

impl TryFrom<RawMorphism> for Morphism {
    type Error = MorphismError;
    fn try_from(raw: RawMorphism) -> Result<Self, Self::Error> {
        validate(raw.dom, raw.cod, &raw.values)
    }
}

impl From<Morphism> for RawMorphism {
    fn from(m: Morphism) -> Self {
        RawMorphism {
            dom: m.values.len(),
            cod: m.cod,
            values: m.values,
        }
    }
}

/// Checks every defining condition of a morphism `[[dom_size]] -> [[cod_size]]`
/// and returns it with its leftmost fold decomposition.
pub fn validate(dom_size: usize, cod_size: usize, values: &[usize]) -> Result<Morphism, MorphismError> {
    PointedLinearGraph::new(dom_size)?;
    PointedLinearGraph::new(cod_size)?;
    if values.len() != dom_size {
        return Err(MorphismError::LengthMismatch {
            dom: dom_size,
            len: values.len(),
        });
    }
    if let Some((index, &value)) = values.iter().enumerate().find(|(_, &v)| v >= cod_size) {
        return Err(MorphismError::ValueOutOfRange {
            index,
            value,
            cod: cod_size,
        });
    }
    if values[0] != 0 {
        return Err(MorphismError::ZeroVertexViolation(values[0]));
    }
    if let Some(index) = values.windows(2).position(|w| w[0].abs_diff(w[1]) > 1) {
        return Err(MorphismError::NotHomomorphism { index });
    }
    let mut seen = vec![false; cod_size];
    for &v in values {
        seen[v] = true;
    }
    if let Some(v) = seen.iter().position(|s| !s) {
        return Err(MorphismError::NotSurjective(format!("vertex {v}")));
    }
    let mut edge_seen = vec![false; cod_size - 1];
    for w in values.windows(2) {
        if w[0] != w[1] {
            edge_seen[w[0].min(w[1])] = true;
        }
    }
    if let Some(e) = edge_seen.iter().position(|s| !s) {
        return Err(MorphismError::NotSurjective(format!("edge {{{e}, {}}}", e + 1)));
    }
    let fold = canonical_fold(values, cod_size).ok_or(MorphismError::NoFold)?;
    Ok(Morphism {
        cod: cod_size,
        values: values.to_vec(),
        fold,
    })
}

impl Morphism {
    pub fn identity(n: usize) -> Result<Self, MorphismError> {
        validate(n, n, &(0..n).collect::<Vec<_>>())
    }

    pub fn dom(&self) -> PointedLinearGraph {
        PointedLinearGraph { n: self.values.len() }
    }

    pub fn cod(&self) -> PointedLinearGraph {
        PointedLinearGraph { n: self.cod }
    }

    pub fn dom_size(&self) -> usize {
        self.values.len()
    }

    pub fn cod_size(&self) -> usize {
        self.cod
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn apply(&self, i: usize) -> usize {
        self.values[i]
    }

    pub fn fold(&self) -> &FoldDecomposition {
        &self.fold
    }

    pub fn degree(&self) -> usize {
        self.fold.degree()
    }

    pub fn is_identity(&self) -> bool {
        self.cod == self.values.len() && self.values.iter().enumerate().all(|(i, &v)| i == v)
    }

    pub fn is_non_decreasing(&self) -> bool {
        self.values.windows(2).all(|w| w[0] <= w[1])
    }

    /// Positions `j >= 1` with `f(j) != f(j-1)`, in increasing order.
    pub fn change_positions(&self) -> Vec<usize> {
        (1..self.values.len())
            .filter(|&j| self.values[j] != self.values[j - 1])
            .collect()
    }

    /// Vertices of the domain that map onto `v`.
    pub fn fiber(&self, v: usize) -> Vec<usize> {
        (0..self.values.len()).filter(|&i| self.values[i] == v).collect()
    }

    pub fn to_raw(&self) -> RawMorphism {
        self.clone().into()
    }
}

impl fmt::Display for Morphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.values.iter().map(|v| v.to_string()).collect();
        write!(f, "[{}]: [[{}]] -> [[{}]]", s.join(","), self.values.len(), self.cod)
    }
}

/// `outer ∘ inner`, i.e. `i -> outer(inner(i))`.
pub fn compose(outer: &Morphism, inner: &Morphism) -> Result<Morphism, MorphismError> {
    if inner.cod != outer.values.len() {
        return Err(MorphismError::DomainMismatch {
            outer_dom: outer.values.len(),
            inner_cod: inner.cod,
        });
    }
    let values: Vec<usize> = inner.values.iter().map(|&v| outer.values[v]).collect();
    let out = validate(values.len(), outer.cod, &values)?;
    debug_assert_eq!(out.degree(), outer.degree() * inner.degree());
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct SweepState {
    value: usize,
    rising: bool,
    sweeps: usize,
}

impl SweepState {
    const START: SweepState = SweepState {
        value: 0,
        rising: true,
        sweeps: 0,
    };

    fn step(self, next: usize, top: usize) -> Option<SweepState> {
        if next > top || next.abs_diff(self.value) > 1 {
            return None;
        }
        if (self.rising && next < self.value) || (!self.rising && next > self.value) {
            return None;
        }
        let target = if self.rising { top } else { 0 };
        Some(if next == target {
            SweepState {
                value: next,
                rising: !self.rising,
                sweeps: self.sweeps + 1,
            }
        } else {
            SweepState { value: next, ..self }
        })
    }

    /// True when the string may stop here: at least one sweep is done and the
    /// current value is the end vertex the last sweep reached.
    fn accepting(self, top: usize) -> bool {
        let last_end = if self.rising { 0 } else { top };
        self.sweeps >= 1 && self.value == last_end
    }

    /// Whether `remaining` more steps can still end in an accepting state with
    /// exactly `degree` sweeps (any number of sweeps when `degree` is `None`).
    fn feasible(self, remaining: usize, top: usize, degree: Option<usize>) -> bool {
        let target = if self.rising { top } else { 0 };
        let to_target = self.value.abs_diff(target);
        match degree {
            None => self.accepting(top) || to_target <= remaining,
            Some(k) => {
                if self.sweeps > k {
                    false
                } else if self.sweeps == k {
                    self.accepting(top)
                } else {
                    to_target + (k - self.sweeps - 1) * top <= remaining
                }
            }
        }
    }
}

/// Lazy lexicographic enumeration of the morphisms `[[dom]] -> [[cod]]`,
/// optionally restricted to one degree.
pub struct EpiIter {
    dom: usize,
    cod: usize,
    degree: Option<usize>,
    values: Vec<usize>,
    states: Vec<SweepState>,
    // next candidate offset (0, 1, 2 -> value - 1, value, value + 1) per depth
    choice: Vec<u8>,
    started: bool,
    done: bool,
}

impl EpiIter {
    pub fn new(dom: PointedLinearGraph, cod: PointedLinearGraph, degree: Option<usize>) -> Self {
        let n = dom.size();
        let mut it = EpiIter {
            dom: n,
            cod: cod.size(),
            degree,
            values: vec![0; n],
            states: vec![SweepState::START; n],
            choice: vec![0; n],
            started: false,
            done: false,
        };
        if !SweepState::START.feasible(n - 1, it.cod - 1, degree) {
            it.done = true;
        }
        it
    }
}

impl Iterator for EpiIter {
    type Item = Morphism;

    fn next(&mut self) -> Option<Morphism> {
        if self.done {
            return None;
        }
        let top = self.cod - 1;
        let n = self.dom;
        // depth = index of the position currently being chosen
        let mut depth = if self.started { n - 1 } else { 1 };
        self.started = true;
        loop {
            if depth == 0 {
                self.done = true;
                return None;
            }
            if depth == n {
                let last = self.states[n - 1];
                // a finished string leaves the cursor on the last position
                if last.accepting(top) && self.degree.is_none_or(|k| last.sweeps == k) {
                    let m = Morphism {
                        cod: self.cod,
                        fold: canonical_fold(&self.values, self.cod)
                            .expect("accepted strings have a fold decomposition"),
                        values: self.values.clone(),
                    };
                    return Some(m);
                }
                depth -= 1;
                continue;
            }
            let prev = self.states[depth - 1];
            let mut advanced = false;
            while self.choice[depth] < 3 {
                let c = self.choice[depth];
                self.choice[depth] += 1;
                let Some(next) = (prev.value + c as usize).checked_sub(1) else {
                    continue;
                };
                if let Some(s) = prev.step(next, top) {
                    if s.feasible(n - 1 - depth, top, self.degree) {
                        self.values[depth] = next;
                        self.states[depth] = s;
                        advanced = true;
                        break;
                    }
                }
            }
            if advanced {
                depth += 1;
                if depth < n {
                    self.choice[depth] = 0;
                }
            } else {
                self.choice[depth] = 0;
                depth -= 1;
                if depth == 0 {
                    self.done = true;
                    return None;
                }
            }
        }
    }
}

/// All morphisms `b -> a` in lexicographic order of value strings.
pub fn enumerate_epi(b: PointedLinearGraph, a: PointedLinearGraph) -> Vec<Morphism> {
    EpiIter::new(b, a, None).collect()
}

/// All morphisms `b -> a` of the given degree, in lexicographic order.
pub fn enumerate_epi_of_degree(b: PointedLinearGraph, a: PointedLinearGraph, degree: usize) -> Vec<Morphism> {
    EpiIter::new(b, a, Some(degree)).collect()
}

// Accepted completions from every (position, value, rising, started) state.
struct CountTable {
    top: usize,
    // counts[i][v][rising][started]
    counts: Vec<Vec<[[u128; 2]; 2]>>,
}

impl CountTable {
    #[allow(clippy::needless_range_loop)]
    fn build(n: usize, top: usize) -> Option<Self> {
        let mut counts = vec![vec![[[0u128; 2]; 2]; top + 1]; n];
        for v in 0..=top {
            for rising in 0..2 {
                for started in 0..2 {
                    let s = SweepState {
                        value: v,
                        rising: rising == 1,
                        sweeps: started,
                    };
                    counts[n - 1][v][rising][started] = u128::from(s.accepting(top));
                }
            }
        }
        for i in (0..n - 1).rev() {
            for v in 0..=top {
                for rising in 0..2 {
                    for started in 0..2 {
                        let s = SweepState {
                            value: v,
                            rising: rising == 1,
                            sweeps: started,
                        };
                        let mut total: u128 = 0;
                        for next in v.saturating_sub(1)..=(v + 1).min(top) {
                            if let Some(t) = s.step(next, top) {
                                let c = counts[i + 1][t.value][t.rising as usize][t.sweeps.min(1)];
                                total = total.checked_add(c)?;
                            }
                        }
                        counts[i][v][rising][started] = total;
                    }
                }
            }
        }
        Some(CountTable { top, counts })
    }
}

/// `|Epi(b, a)|` by dynamic programming over sweep states, or `None` when the
/// count does not fit in a `u128`.
pub fn count_epi(b: PointedLinearGraph, a: PointedLinearGraph) -> Option<u128> {
    let t = CountTable::build(b.size(), a.top())?;
    Some(t.counts[0][0][1][0])
}

/// A uniformly random morphism `b -> a`, or `None` when there is none (or the
/// morphism count overflows `u128`).
pub fn sample_epi<R: Rng + ?Sized>(b: PointedLinearGraph, a: PointedLinearGraph, rng: &mut R) -> Option<Morphism> {
    let n = b.size();
    let table = CountTable::build(n, a.top())?;
    let top = table.top;
    if table.counts[0][0][1][0] == 0 {
        return None;
    }
    let mut state = SweepState::START;
    let mut values = vec![0usize; n];
    for (i, slot) in values.iter_mut().enumerate().skip(1) {
        let options: Vec<(SweepState, u128)> = (state.value.saturating_sub(1)..=(state.value + 1).min(top))
            .filter_map(|next| state.step(next, top))
            .map(|t| (t, table.counts[i][t.value][t.rising as usize][t.sweeps.min(1)]))
            .filter(|(_, c)| *c > 0)
            .collect();
        let total: u128 = options.iter().map(|(_, c)| c).sum();
        let mut pick = rng.gen_range(0..total);
        let mut chosen = options[0].0;
        for (t, c) in options {
            if pick < c {
                chosen = t;
                break;
            }
            pick -= c;
        }
        state = chosen;
        *slot = chosen.value;
    }
    Some(validate(n, a.size(), &values).expect("sampled strings are accepted"))
}

/// The morphism `[[dom]] -> [[cod]]` made of `degree` full sweeps followed by
/// a constant tail, when `dom >= degree * (cod - 1) + 1`.
pub fn zigzag(dom: usize, cod: usize, degree: usize) -> Result<Morphism, MorphismError> {
    let top = cod.saturating_sub(1);
    let mut values = Vec::with_capacity(dom);
    values.push(0);
    for sweep in 0..degree {
        for step in 1..=top {
            values.push(if sweep % 2 == 0 { step } else { top - step });
        }
    }
    let last = *values.last().unwrap();
    while values.len() < dom {
        values.push(last);
    }
    if values.len() > dom || degree == 0 {
        return Err(MorphismError::NoFold);
    }
    validate(dom, cod, &values)
}

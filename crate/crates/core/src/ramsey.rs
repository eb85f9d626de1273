//! Finite Ramsey statements for the weighted category, reduced to increasing
//! injections, and the 2-adic degree coloring with unboundedly many colors.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fraisse::AnnotatedObject;
use crate::lingraph::{compose, sample_epi, validate, zigzag, EpiIter, Morphism, MorphismError, PointedLinearGraph};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RamseyError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("not an increasing injection: {0}")]
    InvalidInjection(String),
    #[error("the injection forces g(0) != 0")]
    Infeasible,
    #[error("coloring is missing the morphism {0:?}")]
    ColoringNotTotal(Vec<usize>),
    #[error("color {color} is out of range for {d} colors")]
    ColorOutOfRange { color: usize, d: usize },
    #[error("no g makes the composed copies monochromatic")]
    NoWitness,
    #[error("there is no morphism [[{dom}]] -> [[{cod}]]")]
    NoMorphism { dom: usize, cod: usize },
    #[error("argument must be positive")]
    Zero,
    #[error(transparent)]
    Morphism(#[from] MorphismError),
}

impl RamseyError {
    pub fn name(&self) -> &'static str {
        match self {
            RamseyError::InvalidParams(_) => "InvalidParams",
            RamseyError::InvalidInjection(_) => "InvalidInjection",
            RamseyError::Infeasible => "Infeasible",
            RamseyError::ColoringNotTotal(_) => "ColoringNotTotal",
            RamseyError::ColorOutOfRange { .. } => "ColorOutOfRange",
            RamseyError::NoWitness => "NoWitness",
            RamseyError::NoMorphism { .. } => "NoMorphism",
            RamseyError::Zero => "Zero",
            RamseyError::Morphism(e) => e.name(),
        }
    }
}

/// A strictly increasing map `[k] -> [n]`, `k = values.len()`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct IncreasingInjection {
    n: usize,
    values: Vec<usize>,
}

impl IncreasingInjection {
    pub fn new(n: usize, values: Vec<usize>) -> Result<Self, RamseyError> {
        if values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(RamseyError::InvalidInjection("values must increase strictly".into()));
        }
        if values.last().is_some_and(|&v| v >= n) {
            return Err(RamseyError::InvalidInjection(format!("values must be below {n}")));
        }
        Ok(IncreasingInjection { n, values })
    }

    pub fn k(&self) -> usize {
        self.values.len()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &IncreasingInjection) -> Result<IncreasingInjection, RamseyError> {
        if inner.n != self.k() {
            return Err(RamseyError::InvalidParams(format!(
                "cannot compose II([{}],[{}]) after II([{}],[{}])",
                self.k(),
                self.n,
                inner.k(),
                inner.n
            )));
        }
        Ok(IncreasingInjection {
            n: self.n,
            values: inner.values.iter().map(|&i| self.values[i]).collect(),
        })
    }
}

/// All of `II([k], [n])` in lexicographic order; there are `C(n, k)`.
pub fn increasing_injections(k: usize, n: usize) -> Vec<IncreasingInjection> {
    subsets(k, n)
        .into_iter()
        .map(|values| IncreasingInjection { n, values })
        .collect()
}

fn subsets(k: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        let Some(i) = (0..k).rev().find(|&i| cur[i] < n - k + i) else {
            return out;
        };
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// A `d`-coloring of morphisms, keyed by value string.
///
/// Serialized as `{"d": d, "assignment": [[values, color], ...]}` in key order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "ColoringRepr", try_from = "ColoringRepr")]
pub struct Coloring {
    d: usize,
    assignment: BTreeMap<Vec<usize>, usize>,
}

#[derive(Serialize, Deserialize)]
struct ColoringRepr {
    d: usize,
    assignment: Vec<(Vec<usize>, usize)>,
}

impl From<Coloring> for ColoringRepr {
    fn from(c: Coloring) -> Self {
        ColoringRepr {
            d: c.d,
            assignment: c.assignment.into_iter().collect(),
        }
    }
}

impl TryFrom<ColoringRepr> for Coloring {
    type Error = RamseyError;
    fn try_from(r: ColoringRepr) -> Result<Self, Self::Error> {
        Coloring::new(r.d, r.assignment.into_iter().collect())
    }
}

impl Coloring {
    pub fn new(d: usize, assignment: BTreeMap<Vec<usize>, usize>) -> Result<Self, RamseyError> {
        if let Some(&color) = assignment.values().find(|&&c| c >= d) {
            return Err(RamseyError::ColorOutOfRange { color, d });
        }
        Ok(Coloring { d, assignment })
    }

    /// Colors every morphism yielded by `domain` with `color`.
    pub fn from_fn<I, F>(d: usize, domain: I, mut color: F) -> Result<Self, RamseyError>
    where
        I: IntoIterator<Item = Morphism>,
        F: FnMut(&Morphism) -> usize,
    {
        let assignment = domain
            .into_iter()
            .map(|f| {
                let c = color(&f);
                (f.values().to_vec(), c)
            })
            .collect();
        Coloring::new(d, assignment)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    pub fn color(&self, f: &Morphism) -> Option<usize> {
        self.assignment.get(f.values()).copied()
    }

    pub fn assignment(&self) -> &BTreeMap<Vec<usize>, usize> {
        &self.assignment
    }
}

/// Uniformly random `d`-coloring of the morphisms `c -> a` of one degree.
pub fn random_coloring<R: Rng + ?Sized>(
    c: PointedLinearGraph,
    a: PointedLinearGraph,
    degree: usize,
    d: usize,
    rng: &mut R,
) -> Result<Coloring, RamseyError> {
    if d == 0 {
        return Err(RamseyError::Zero);
    }
    Coloring::from_fn(d, EpiIter::new(c, a, Some(degree)), |_| rng.gen_range(0..d))
}

/// The change positions of `f`, read as an increasing injection into its
/// domain: the `i`-th entry is the least `j` with `f(j) != f(j-1)` preceded
/// by exactly `i` such positions.
pub fn to_injection(f: &Morphism) -> IncreasingInjection {
    IncreasingInjection {
        n: f.dom_size(),
        values: f.change_positions(),
    }
}

/// The non-decreasing `g: [[n]] -> [[m]]` with `min g^-1(j) = p(j)` for
/// `j = 1..m-1`; `p(0)` plays no role.
pub fn monotone_from_injection(p: &IncreasingInjection, m: usize, n: usize) -> Result<Morphism, RamseyError> {
    if p.n != n || p.k() != m {
        return Err(RamseyError::InvalidInjection(format!(
            "expected an element of II([{m}],[{n}]), got II([{}],[{}])",
            p.k(),
            p.n
        )));
    }
    if m < 2 {
        return Err(RamseyError::InvalidParams("the target graph needs 2 vertices".into()));
    }
    if p.values[1] == 0 {
        return Err(RamseyError::Infeasible);
    }
    let mut values = vec![0; n];
    for j in 1..m {
        let end = if j + 1 < m { p.values[j + 1] } else { n };
        values[p.values[j]..end].iter_mut().for_each(|v| *v = j);
    }
    Ok(validate(n, m, &values)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum RamseyBound {
    Exact(usize),
    /// No answer up to and including the cap.
    Unknown(usize),
}

/// Search nodes allowed per graph size before a size is declared undecided.
pub const SEARCH_NODE_LIMIT: u64 = 200_000_000;

/// `R(k, m; d)`: the least `n` such that every `d`-coloring of
/// `II([k], [n])` has some `g ∈ II([m], [n])` with `g ∘ II([k], [m])`
/// monochromatic.
///
/// Sizes `n = m, m + 1, ...` are tried in turn; each one is settled by an
/// exhaustive search for a coloring with no monochromatic copy, where colors
/// are introduced in order of first use.
pub fn ramsey_number(k: usize, m: usize, d: usize, cap: usize) -> Result<RamseyBound, RamseyError> {
    if k > m {
        return Err(RamseyError::InvalidParams(format!("k = {k} exceeds m = {m}")));
    }
    if d == 0 {
        return Err(RamseyError::InvalidParams("need at least one color".into()));
    }
    for n in m..=cap {
        match bad_coloring(k, m, d, n) {
            Some(false) => return Ok(RamseyBound::Exact(n)),
            Some(true) => {}
            None => return Ok(RamseyBound::Unknown(cap)),
        }
    }
    Ok(RamseyBound::Unknown(cap))
}

/// Whether some coloring of `II([k],[n])` avoids monochromatic copies, or
/// `None` when the node limit runs out.
fn bad_coloring(k: usize, m: usize, d: usize, n: usize) -> Option<bool> {
    // colex order: a k-set comes after all k-sets of smaller maximum
    let mut ksets = subsets(k, n);
    ksets.sort_by(|a, b| a.iter().rev().cmp(b.iter().rev()));
    let index: HashMap<&[usize], usize> = ksets.iter().enumerate().map(|(i, s)| (s.as_slice(), i)).collect();
    let inner = subsets(k, m);
    // each m-set is checked once its last k-subset is colored
    let mut closing: Vec<Vec<Vec<usize>>> = vec![Vec::new(); ksets.len()];
    for mset in subsets(m, n) {
        let members: Vec<usize> = inner
            .iter()
            .map(|s| {
                let image: Vec<usize> = s.iter().map(|&i| mset[i]).collect();
                index[image.as_slice()]
            })
            .collect();
        let last = *members.iter().max().unwrap();
        closing[last].push(members);
    }
    let total = ksets.len();
    let mut colors = vec![0usize; total];
    let mut next = vec![0usize; total + 1];
    let mut used = vec![0usize; total + 1];
    let mut depth = 0;
    let mut nodes: u64 = 0;
    loop {
        if depth == total {
            return Some(true);
        }
        let limit = d.min(used[depth] + 1);
        if next[depth] >= limit {
            if depth == 0 {
                return Some(false);
            }
            next[depth] = 0;
            depth -= 1;
            continue;
        }
        nodes += 1;
        if nodes > SEARCH_NODE_LIMIT {
            return None;
        }
        let c = next[depth];
        next[depth] += 1;
        colors[depth] = c;
        let mono = closing[depth]
            .iter()
            .any(|members| members.iter().all(|&i| colors[i] == c));
        if mono {
            continue;
        }
        used[depth + 1] = used[depth].max(c + 1);
        depth += 1;
        next[depth] = 0;
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum WitnessOutcome {
    Object(AnnotatedObject),
    /// No `K*`-morphism `B -> A` exists, so any object witnesses the property.
    Vacuous,
    Unknown(usize),
}

/// For `A = ([[k]], p)` and `B = ([[m]], q)`, the object `([[n]], q)` with
/// `n = R((q/p)(k-1), m; d)`.
pub fn witness(a: &AnnotatedObject, b: &AnnotatedObject, d: usize, cap: usize) -> Result<WitnessOutcome, RamseyError> {
    let Some(ratio) = (b.weight / a.weight).as_integer() else {
        return Ok(WitnessOutcome::Vacuous);
    };
    let len = ratio as usize * a.graph.top();
    if len > b.graph.top() {
        return Ok(WitnessOutcome::Vacuous);
    }
    Ok(match ramsey_number(len, b.graph.size(), d, cap)? {
        RamseyBound::Exact(n) => WitnessOutcome::Object(AnnotatedObject {
            graph: PointedLinearGraph::new(n.max(2))?,
            weight: b.weight,
        }),
        RamseyBound::Unknown(cap) => WitnessOutcome::Unknown(cap),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchRoute {
    /// Through the induced coloring of increasing injections.
    Injections,
    /// Direct search over the morphisms `C -> B`.
    Direct,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonoWitness {
    pub g: Morphism,
    /// The common color, absent when there is no morphism `B -> A`.
    pub color: Option<usize>,
    pub route: SearchRoute,
}

fn degree_between(from: &AnnotatedObject, to: &AnnotatedObject) -> Option<usize> {
    (from.weight / to.weight).as_integer().map(|d| d as usize)
}

/// A `K*`-morphism `g: C -> B` with `Epi(B, A) ∘ g` monochromatic under `c`.
///
/// When `C` and `B` carry the same weight the coloring is transported to
/// injections `f -> to_injection(f)` (other injections get color 0), a
/// monochromatic `p ∈ II([m],[n])` is searched for, and
/// `monotone_from_injection(p)` is tried. Otherwise, or if that candidate
/// fails the final check, every `K*`-morphism `C -> B` is tried in
/// lexicographic order.
pub fn find_monochromatic(
    c_obj: &AnnotatedObject,
    b_obj: &AnnotatedObject,
    a_obj: &AnnotatedObject,
    coloring: &Coloring,
) -> Result<MonoWitness, RamseyError> {
    let (n, m) = (c_obj.graph.size(), b_obj.graph.size());
    let hs: Vec<Morphism> = match degree_between(b_obj, a_obj) {
        Some(r) => EpiIter::new(b_obj.graph, a_obj.graph, Some(r)).collect(),
        None => Vec::new(),
    };
    let check = |g: &Morphism| -> Result<Option<Option<usize>>, RamseyError> {
        let mut common = None;
        for h in &hs {
            let hg = compose(h, g)?;
            let c = coloring
                .color(&hg)
                .ok_or_else(|| RamseyError::ColoringNotTotal(hg.values().to_vec()))?;
            match common {
                None => common = Some(c),
                Some(x) if x != c => return Ok(None),
                _ => {}
            }
        }
        Ok(Some(common))
    };

    if let (Some(1), Some(deg_ca)) = (degree_between(c_obj, b_obj), degree_between(c_obj, a_obj)) {
        let mut induced: HashMap<Vec<usize>, usize> = HashMap::new();
        for f in EpiIter::new(c_obj.graph, a_obj.graph, Some(deg_ca)) {
            let color = coloring
                .color(&f)
                .ok_or_else(|| RamseyError::ColoringNotTotal(f.values().to_vec()))?;
            induced.insert(to_injection(&f).values, color);
        }
        let len = deg_ca * a_obj.graph.top();
        let inner = subsets(len, m);
        let mut image = vec![0usize; len];
        let found = subsets(m, n).into_iter().find(|p| {
            let mut common = None;
            inner.iter().all(|s| {
                for (slot, &i) in image.iter_mut().zip(s) {
                    *slot = p[i];
                }
                let c = induced.get(image.as_slice()).copied().unwrap_or(0);
                *common.get_or_insert(c) == c
            })
        });
        if let Some(p) = found {
            let g = monotone_from_injection(&IncreasingInjection { n, values: p }, m, n)?;
            if let Some(color) = check(&g)? {
                return Ok(MonoWitness {
                    g,
                    color,
                    route: SearchRoute::Injections,
                });
            }
        }
    }

    let Some(deg_cb) = degree_between(c_obj, b_obj) else {
        return Err(RamseyError::NoWitness);
    };
    for g in EpiIter::new(c_obj.graph, b_obj.graph, Some(deg_cb)) {
        if let Some(color) = check(&g)? {
            return Ok(MonoWitness {
                g,
                color,
                route: SearchRoute::Direct,
            });
        }
    }
    Err(RamseyError::NoWitness)
}

/// The 2-adic valuation of `k`.
pub fn rho(k: u64) -> Result<u32, RamseyError> {
    if k == 0 {
        return Err(RamseyError::Zero);
    }
    Ok(k.trailing_zeros())
}

/// `rho(deg f) mod n`.
pub fn degree_coloring(f: &Morphism, n: usize) -> Result<usize, RamseyError> {
    if n == 0 {
        return Err(RamseyError::Zero);
    }
    Ok(rho(f.degree() as u64)? as usize % n)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeColorCheck {
    pub f: Morphism,
    /// For each color, the degree of a morphism `B -> A` whose composite with
    /// `f` has that color.
    pub witnesses: BTreeMap<usize, usize>,
    pub full: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InfiniteDegreeReport {
    pub colors: usize,
    pub b_size: usize,
    pub c_size: usize,
    pub checks: Vec<DegreeColorCheck>,
    pub all_full: bool,
}

/// Colors attained on `Epi(B, [[2]]) ∘ f` by the degree coloring: one
/// composite is computed for each degree `1..|B|-1`.
pub fn degree_colors(f: &Morphism, n: usize) -> Result<DegreeColorCheck, RamseyError> {
    let b = f.cod_size();
    let mut witnesses = BTreeMap::new();
    for deg in 1..b {
        let h = zigzag(b, 2, deg)?;
        let color = degree_coloring(&compose(&h, f)?, n)?;
        witnesses.entry(color).or_insert(deg);
    }
    let full = witnesses.len() == n;
    Ok(DegreeColorCheck {
        f: f.clone(),
        witnesses,
        full,
    })
}

/// With `A = [[2]]` and `B` of `2^(n+1)` vertices, checks that the degree
/// coloring attains all `n` colors on `Epi(B, A) ∘ f`, for `f` the identity
/// (when `C = B`) and `sample` random `f: C -> B`.
pub fn infinite_degree_check<R: Rng + ?Sized>(
    n: usize,
    c: PointedLinearGraph,
    sample: usize,
    rng: &mut R,
) -> Result<InfiniteDegreeReport, RamseyError> {
    if n == 0 {
        return Err(RamseyError::Zero);
    }
    if n > 24 {
        return Err(RamseyError::InvalidParams(format!("n = {n} gives a graph too large to build")));
    }
    let b = PointedLinearGraph::new(1 << (n + 1))?;
    if c.size() < b.size() {
        return Err(RamseyError::NoMorphism {
            dom: c.size(),
            cod: b.size(),
        });
    }
    let mut checks = Vec::with_capacity(sample + 1);
    if c == b {
        checks.push(degree_colors(&Morphism::identity(b.size())?, n)?);
    }
    for _ in 0..sample {
        let f = sample_epi(c, b, rng).ok_or(RamseyError::NoMorphism {
            dom: c.size(),
            cod: b.size(),
        })?;
        checks.push(degree_colors(&f, n)?);
    }
    let all_full = checks.iter().all(|c| c.full);
    Ok(InfiniteDegreeReport {
        colors: n,
        b_size: b.size(),
        c_size: c.size(),
        checks,
        all_full,
    })
}

/// Distinct colors in a set.
pub fn palette<I: IntoIterator<Item = usize>>(colors: I) -> BTreeSet<usize> {
    colors.into_iter().collect()
}

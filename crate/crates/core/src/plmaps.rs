//! Exact piecewise-linear open maps of `[0, 1]`, chain covers of the
//! interval, and the passage between them and graph morphisms.
//!
//! Every quantity is an exact rational; nothing here touches floating point.

use std::cmp::Ordering;

use num_rational::Ratio;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::lingraph::{validate, Morphism, MorphismError};

pub type Rat = Ratio<i128>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlError {
    #[error("not a piecewise-linear open map fixing 0: {0}")]
    InvalidMap(String),
    #[error("tent maps need degree at least 1")]
    ZeroDegree,
    #[error("a chain needs at least 2 links, got {0}")]
    TooFewLinks(usize),
    #[error("overlap {0} must lie strictly between 0 and 1/4")]
    OverlapTooLarge(Rat),
    #[error("chain check failed: {0}")]
    ChainInvalid(String),
    #[error("tower check failed at level {level}: {reason}")]
    TowerInvalid { level: usize, reason: String },
    #[error("image of fine link {0} lies in no coarse link")]
    NoContainingLink(usize),
    #[error("{needed} maps are needed for {levels} levels, got {got}")]
    NotEnoughMaps { levels: usize, needed: usize, got: usize },
    #[error(transparent)]
    Morphism(#[from] MorphismError),
}

impl PlError {
    pub fn name(&self) -> &'static str {
        match self {
            PlError::InvalidMap(_) => "InvalidMap",
            PlError::ZeroDegree => "ZeroDegree",
            PlError::TooFewLinks(_) => "TooFewLinks",
            PlError::OverlapTooLarge(_) => "OverlapTooLarge",
            PlError::ChainInvalid(_) => "ChainInvalid",
            PlError::TowerInvalid { .. } => "TowerInvalid",
            PlError::NoContainingLink(_) => "NoContainingLink",
            PlError::NotEnoughMaps { .. } => "NotEnoughMaps",
            PlError::Morphism(e) => e.name(),
        }
    }
}

fn rat(n: i128, d: i128) -> Rat {
    Rat::new(n, d)
}

mod rat_pair {
    use super::Rat;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(r: &Rat, s: S) -> Result<S::Ok, S::Error> {
        [*r.numer(), *r.denom()].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rat, D::Error> {
        let [n, den] = <[i128; 2]>::deserialize(d)?;
        if den == 0 {
            return Err(serde::de::Error::custom("zero denominator"));
        }
        Ok(Rat::new(n, den))
    }
}

/// A point `(x, y)` of a PL graph, serialized as `[[xn, xd], [yn, yd]]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Knot(
    #[serde(with = "rat_pair")] pub Rat,
    #[serde(with = "rat_pair")] pub Rat,
);

/// A continuous open surjection `[0, 1] -> [0, 1]` fixing 0, given by its
/// knots.
///
/// The knots with value 0 or 1 are the turning points `0 = x_0 < ... < x_n = 1`
/// with `f(x_i) = i mod 2`; between consecutive turning points the map is a
/// strictly monotone PL bijection onto `[0, 1]`. Collinear interior knots are
/// removed, so equal maps have equal knot lists.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PLOpenMap {
    knots: Vec<Knot>,
    slopes: Vec<Rat>,
}

impl Serialize for PLOpenMap {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.knots.serialize(s)
    }
}

impl<'de> Deserialize<'de> for PLOpenMap {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let knots = Vec::<Knot>::deserialize(d)?;
        PLOpenMap::new(knots).map_err(serde::de::Error::custom)
    }
}

fn slope(a: Knot, b: Knot) -> Rat {
    (b.1 - a.1) / (b.0 - a.0)
}

impl PLOpenMap {
    pub fn new(knots: Vec<Knot>) -> Result<Self, PlError> {
        let bad = |why: &str| Err(PlError::InvalidMap(why.to_string()));
        let zero = Rat::zero();
        let one = Rat::one();
        if knots.len() < 2 {
            return bad("needs at least two knots");
        }
        if knots[0] != Knot(zero, zero) {
            return bad("must start at (0, 0)");
        }
        if knots.last().unwrap().0 != one {
            return bad("last knot must have x = 1");
        }
        if knots.windows(2).any(|w| w[0].0 >= w[1].0) {
            return bad("knot abscissae must increase strictly");
        }
        if knots.iter().any(|k| k.1 < zero || k.1 > one) {
            return bad("values must lie in [0, 1]");
        }
        if knots.windows(2).any(|w| w[0].1 == w[1].1) {
            return bad("constant pieces are not open");
        }
        // monotone runs must go from one end of [0, 1] to the other
        let mut rising = true;
        for w in knots.windows(2) {
            let up = w[1].1 > w[0].1;
            if up != rising {
                return bad("direction changes away from 0 and 1");
            }
            if w[1].1 == one || w[1].1 == zero {
                rising = !rising;
            }
        }
        let last = knots.last().unwrap().1;
        if last != zero && last != one {
            return bad("must end at 0 or 1");
        }
        let mut canon: Vec<Knot> = Vec::with_capacity(knots.len());
        for k in knots {
            while canon.len() >= 2 {
                let a = canon[canon.len() - 2];
                let b = canon[canon.len() - 1];
                if slope(a, b) == slope(b, k) {
                    canon.pop();
                } else {
                    break;
                }
            }
            canon.push(k);
        }
        let slopes = canon.windows(2).map(|w| slope(w[0], w[1])).collect();
        Ok(PLOpenMap { knots: canon, slopes })
    }

    pub fn identity() -> Self {
        PLOpenMap {
            knots: vec![Knot(Rat::zero(), Rat::zero()), Knot(Rat::one(), Rat::one())],
            slopes: vec![Rat::one()],
        }
    }

    pub fn knots(&self) -> &[Knot] {
        &self.knots
    }

    /// The turning points `x_0 < ... < x_n` (knots with value 0 or 1).
    pub fn turning_points(&self) -> Vec<Rat> {
        let (zero, one) = (Rat::zero(), Rat::one());
        self.knots
            .iter()
            .filter(|k| k.1 == zero || k.1 == one)
            .map(|k| k.0)
            .collect()
    }

    pub fn degree(&self) -> usize {
        self.turning_points().len() - 1
    }

    pub fn eval(&self, x: Rat) -> Rat {
        let k = &self.knots;
        let idx = k.partition_point(|p| le(&p.0, &x));
        if idx == 0 {
            return k[0].1;
        }
        if idx == k.len() {
            return k[k.len() - 1].1;
        }
        let a = k[idx - 1];
        if a.0 == x {
            return a.1;
        }
        a.1 + (x - a.0) * self.slopes[idx - 1]
    }

    /// Largest absolute slope.
    pub fn lipschitz(&self) -> Rat {
        self.slopes.iter().map(|s| s.abs()).max().unwrap()
    }

    /// `[min f, max f]` over `[lo, hi] ⊂ [0, 1]`.
    pub fn image(&self, lo: Rat, hi: Rat) -> (Rat, Rat) {
        let a = self.eval(lo);
        let b = self.eval(hi);
        let (mut min, mut max) = if le(&a, &b) { (a, b) } else { (b, a) };
        let start = self.knots.partition_point(|p| le(&p.0, &lo));
        for k in &self.knots[start..] {
            if le(&hi, &k.0) {
                break;
            }
            if lt(&k.1, &min) {
                min = k.1;
            }
            if lt(&max, &k.1) {
                max = k.1;
            }
        }
        (min, max)
    }
}

/// The standard tent map of degree `d`: linear on each `[m/d, (m+1)/d]`,
/// equal to `m mod 2` at `m/d`.
pub fn tent(d: usize) -> Result<PLOpenMap, PlError> {
    if d == 0 {
        return Err(PlError::ZeroDegree);
    }
    let knots = (0..=d)
        .map(|m| Knot(rat(m as i128, d as i128), Rat::from_integer((m % 2) as i128)))
        .collect();
    PLOpenMap::new(knots)
}

pub fn pl_degree(f: &PLOpenMap) -> usize {
    f.degree()
}

/// `outer ∘ inner`, computed exactly.
pub fn pl_compose(outer: &PLOpenMap, inner: &PLOpenMap) -> PLOpenMap {
    let mut knots: Vec<Knot> = Vec::new();
    for w in inner.knots.windows(2) {
        let (a, b) = (w[0], w[1]);
        if knots.is_empty() {
            knots.push(Knot(a.0, outer.eval(a.1)));
        }
        let (lo, hi) = if a.1 < b.1 { (a.1, b.1) } else { (b.1, a.1) };
        let mut inside: Vec<Rat> = outer
            .knots
            .iter()
            .map(|k| k.0)
            .filter(|&y| y > lo && y < hi)
            .collect();
        if a.1 > b.1 {
            inside.reverse();
        }
        for y in inside {
            let x = a.0 + (y - a.1) * (b.0 - a.0) / (b.1 - a.1);
            knots.push(Knot(x, outer.eval(y)));
        }
        knots.push(Knot(b.0, outer.eval(b.1)));
    }
    PLOpenMap::new(knots).expect("composites of open maps are open")
}

/// `sup |f - g|` over `[0, 1]`. Both maps are linear between consecutive
/// points of the merged knot grid, so the maximum sits on the grid.
pub fn sup_distance(f: &PLOpenMap, g: &PLOpenMap) -> Rat {
    let mut xs: Vec<Rat> = f.knots.iter().chain(&g.knots).map(|k| k.0).collect();
    xs.sort();
    xs.dedup();
    xs.into_iter()
        .map(|x| (f.eval(x) - g.eval(x)).abs())
        .max()
        .unwrap_or_else(Rat::zero)
}

/// `c`-fold then `d`-fold tent equals `d`-fold then `c`-fold tent.
pub fn commute_check(c: usize, d: usize) -> Result<bool, PlError> {
    let (tc, td) = (tent(c)?, tent(d)?);
    Ok(pl_compose(&tc, &td) == pl_compose(&td, &tc))
}

/// PL map of a morphism `[[p]] -> [[q]]`: knots at `(u/(p-1), f(u)/(q-1))`
/// for every position `u` where the value string changes, starting from
/// `(0, 0)`.
///
/// A constant tail after the last change is absorbed by moving the final
/// knot to `x = 1`.
pub fn lift(f: &Morphism) -> PLOpenMap {
    let p = f.dom_size() as i128 - 1;
    let q = f.cod_size() as i128 - 1;
    let mut knots = vec![Knot(Rat::zero(), Rat::zero())];
    for u in f.change_positions() {
        knots.push(Knot(rat(u as i128, p), rat(f.apply(u) as i128, q)));
    }
    knots.last_mut().unwrap().0 = Rat::one();
    PLOpenMap::new(knots).expect("lifts of morphisms are open maps")
}

/// A chain of open intervals covering `[0, 1]`.
///
/// Links are stored with raw endpoints; the first link starts below 0 and the
/// last ends above 1, and every link is understood as intersected with
/// `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Chain {
    pub links: Vec<Link>,
    #[serde(with = "rat_pair")]
    pub epsilon: Rat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Link(
    #[serde(with = "rat_pair")] pub Rat,
    #[serde(with = "rat_pair")] pub Rat,
);

impl Link {
    /// Closure of the link inside `[0, 1]`.
    pub fn closure(&self) -> (Rat, Rat) {
        let (zero, one) = (Rat::zero(), Rat::one());
        (
            if lt(&self.0, &zero) { zero } else { self.0 },
            if lt(&one, &self.1) { one } else { self.1 },
        )
    }

    pub fn diameter(&self) -> Rat {
        let (a, b) = self.closure();
        b - a
    }

    /// Whether the closed interval `[a, b] ⊂ [0, 1]` lies in the open link.
    pub fn contains_closed(&self, a: Rat, b: Rat) -> bool {
        lt(&self.0, &a) && lt(&b, &self.1)
    }
}

/// Outcome of checking a chain: the certified quantities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainReport {
    pub links: usize,
    pub mesh: Rat,
    /// Smallest gap between non-adjacent links.
    pub min_gap: Rat,
    /// Smallest clearance of a link's most isolated point.
    pub min_clearance: Rat,
    /// Smallest overlap of adjacent links (a Lebesgue number of the cover).
    pub min_overlap: Rat,
}

impl Chain {
    pub fn len(&self) -> usize {
        self.links.len()
    }

    pub fn is_empty(&self) -> bool {
        self.links.is_empty()
    }

    pub fn mesh(&self) -> Rat {
        self.links
            .iter()
            .map(Link::diameter)
            .reduce(|a, b| if le(&a, &b) { b } else { a })
            .unwrap_or_else(Rat::zero)
    }

    /// Exact check of: `0 ∈ U_0`; links meet iff their indices differ by at
    /// most one; non-adjacent links are more than `epsilon` apart; every link
    /// has a point more than `epsilon` from all other links; every set of
    /// diameter below `epsilon` lies in one link.
    ///
    /// The last property follows from `epsilon <= hi_i - lo_{i+1}` for every
    /// `i` once the endpoints increase: for `X ⊂ [x, x + d]`, `d < epsilon`,
    /// take the last link with `lo_i < x`; if `x + d >= hi_i` then
    /// `lo_{i+1} >= x` and `hi_i - lo_{i+1} <= d`, a contradiction.
    pub fn check(&self) -> Result<ChainReport, PlError> {
        let fail = |why: String| Err(PlError::ChainInvalid(why));
        let links = &self.links;
        let p = links.len();
        let (zero, one) = (Rat::zero(), Rat::one());
        if p < 2 {
            return Err(PlError::TooFewLinks(p));
        }
        if self.epsilon <= zero {
            return fail("epsilon must be positive".into());
        }
        if !(links[0].0 < zero && zero < links[0].1) {
            return fail("0 is not in the first link".into());
        }
        if links[p - 1].1 <= one {
            return fail("last link does not reach past 1".into());
        }
        for (i, l) in links.iter().enumerate() {
            if le(&l.1, &l.0) {
                return fail(format!("link {i} is empty"));
            }
            if i > 0 && !(lt(&zero, &l.0) && lt(&l.0, &one)) {
                return fail(format!("link {i} starts outside (0, 1)"));
            }
            if i + 1 < p && !(lt(&zero, &l.1) && lt(&l.1, &one)) {
                return fail(format!("link {i} ends outside (0, 1)"));
            }
        }
        for (i, w) in links.windows(2).enumerate() {
            if le(&w[1].0, &w[0].0) || le(&w[1].1, &w[0].1) {
                return fail(format!("links {i} and {} are out of order", i + 1));
            }
            if le(&w[0].1, &w[1].0) {
                return fail(format!("links {i} and {} do not meet", i + 1));
            }
        }
        let mut min_gap: Option<Rat> = None;
        for i in 0..p.saturating_sub(2) {
            // endpoints increase, so i + 2 is the closest non-neighbour
            let gap = links[i + 2].0 - links[i].1;
            if le(&gap, &self.epsilon) {
                return fail(format!("links {i} and {} are within epsilon", i + 2));
            }
            min_gap = Some(min_gap.map_or(gap, |g| rmin(g, gap)));
        }
        let mut min_clearance: Option<Rat> = None;
        for i in 0..p {
            let clearance = if i == 0 {
                links[1].0
            } else if i + 1 == p {
                one - links[p - 2].1
            } else {
                (links[i + 1].0 - links[i - 1].1) / Rat::from_integer(2)
            };
            if le(&clearance, &self.epsilon) {
                return fail(format!("link {i} has no point epsilon-far from the others"));
            }
            min_clearance = Some(min_clearance.map_or(clearance, |c| rmin(c, clearance)));
        }
        let min_overlap = links
            .windows(2)
            .map(|w| w[0].1 - w[1].0)
            .reduce(rmin)
            .unwrap();
        if lt(&min_overlap, &self.epsilon) {
            return fail("epsilon exceeds the Lebesgue number of the cover".into());
        }
        Ok(ChainReport {
            links: p,
            mesh: self.mesh(),
            min_gap: min_gap.unwrap_or_else(|| Rat::from_integer(i128::MAX)),
            min_clearance: min_clearance.unwrap(),
            min_overlap,
        })
    }

    /// Indices of the links containing the closed interval `[a, b]`, as an
    /// inclusive range (empty when `lo > hi`).
    pub fn containing(&self, a: Rat, b: Rat) -> (usize, usize) {
        // links with lo < a form a prefix, links with hi > b a suffix
        let last = self.links.partition_point(|l| lt(&l.0, &a));
        let first = self.links.partition_point(|l| le(&l.1, &b));
        (first, last.wrapping_sub(1))
    }
}

/// `p` equal links of length `(1 + 2 * overlap) / p`, neighbours sharing
/// `2 * overlap / p`. Epsilon is half the largest value the construction
/// certifies.
pub fn fine_chain(p: usize, overlap: Rat) -> Result<Chain, PlError> {
    if p < 2 {
        return Err(PlError::TooFewLinks(p));
    }
    if overlap <= Rat::zero() || overlap >= rat(1, 4) {
        return Err(PlError::OverlapTooLarge(overlap));
    }
    let pp = p as i128;
    let (on, od) = (*overlap.numer(), *overlap.denom());
    let den = od * pp;
    let links = (0..pp)
        .map(|i| Link(Rat::new(i * od - on, den), Rat::new((i + 1) * od + on, den)))
        .collect();
    // overlap of neighbours 2o/p; clearance (1/2 - o)/p; gap (1 - 2o)/p
    let certified = (overlap * 2).min(rat(1, 2) - overlap) / pp;
    let chain = Chain {
        links,
        epsilon: certified / 2,
    };
    debug_assert!(chain.check().is_ok());
    Ok(chain)
}

/// Overlap used for tower levels; it maximises epsilon relative to link size.
pub fn tower_overlap() -> Rat {
    rat(1, 6)
}

/// Chains `U^0, ..., U^{levels-1}` on `[0, 1]` and maps `T_0, ..., T_{levels-2}`
/// with `T_n` going from level `n + 1` to level `n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainTower {
    pub chains: Vec<Chain>,
    pub maps: Vec<PLOpenMap>,
}

impl ChainTower {
    pub fn degrees(&self) -> Vec<usize> {
        self.maps.iter().map(PLOpenMap::degree).collect()
    }

    pub fn levels(&self) -> usize {
        self.chains.len()
    }

    /// Bound on link diameters at level `n + 1`:
    /// `min(1/(n+1), eps_n / (6 * L_n))`, `L_n` the largest slope of `T_n`
    /// (equal to the degree for tent maps).
    pub fn diameter_bound(&self, n: usize) -> Rat {
        let l = self.maps[n].lipschitz();
        rat(1, n as i128 + 1).min(self.chains[n].epsilon / (l * 6))
    }
}

/// Tower over standard tent maps of the given degrees.
pub fn chain_tower(degrees: &[usize], levels: usize) -> Result<ChainTower, PlError> {
    let maps = degrees.iter().map(|&d| tent(d)).collect::<Result<Vec<_>, _>>()?;
    chain_tower_for_maps(&maps, levels)
}

/// Builds the tower level by level, each chain uniform with the fewest links
/// that keep link diameters under [`ChainTower::diameter_bound`].
pub fn chain_tower_for_maps(maps: &[PLOpenMap], levels: usize) -> Result<ChainTower, PlError> {
    if levels == 0 || maps.len() + 1 < levels {
        return Err(PlError::NotEnoughMaps {
            levels,
            needed: levels.saturating_sub(1),
            got: maps.len(),
        });
    }
    let overlap = tower_overlap();
    let link_len = overlap * 2 + Rat::one();
    let mut tower = ChainTower {
        chains: vec![fine_chain(2, overlap)?],
        maps: maps[..levels - 1].to_vec(),
    };
    for n in 0..levels - 1 {
        let bound = tower.diameter_bound(n);
        // need link_len / p < bound
        let p = (link_len / bound).floor().to_integer() + 1;
        tower.chains.push(fine_chain(p as usize, overlap)?);
    }
    Ok(tower)
}

/// Certified facts about a validated tower.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TowerReport {
    pub links_per_level: Vec<usize>,
    pub epsilons: Vec<Rat>,
    pub meshes: Vec<Rat>,
}

/// Re-checks every tower condition exactly: each chain is epsilon-fine with
/// `0` in its first link and the right intersection pattern; meshes shrink
/// like `1/n`; fine links respect the diameter bound; images of fine links
/// under `T_n` are below a third of `eps_n`; every coarse link contains some
/// image; and fine links whose images sit in non-adjacent coarse links are
/// more than two indices apart.
pub fn validate_tower(tower: &ChainTower) -> Result<TowerReport, PlError> {
    let levels = tower.chains.len();
    if levels == 0 || tower.maps.len() + 1 < levels {
        return Err(PlError::NotEnoughMaps {
            levels,
            needed: levels.saturating_sub(1),
            got: tower.maps.len(),
        });
    }
    let fail = |level: usize, reason: String| PlError::TowerInvalid { level, reason };
    let mut report = TowerReport {
        links_per_level: Vec::new(),
        epsilons: Vec::new(),
        meshes: Vec::new(),
    };
    for (n, chain) in tower.chains.iter().enumerate() {
        let r = chain.check().map_err(|e| fail(n, e.to_string()))?;
        if n >= 1 && r.mesh >= rat(1, n as i128) {
            return Err(fail(n, format!("mesh {} is not below 1/{n}", r.mesh)));
        }
        report.links_per_level.push(r.links);
        report.epsilons.push(chain.epsilon);
        report.meshes.push(r.mesh);
    }
    for n in 0..levels - 1 {
        let (coarse, fine, map) = (&tower.chains[n], &tower.chains[n + 1], &tower.maps[n]);
        let bound = tower.diameter_bound(n);
        let third = coarse.epsilon / 3;
        let mut ranges = Vec::with_capacity(fine.len());
        for (k, link) in fine.links.iter().enumerate() {
            if link.diameter() >= bound {
                return Err(fail(n + 1, format!("link {k} is not below the diameter bound {bound}")));
            }
            let (a, b) = link.closure();
            let (lo, hi) = map.image(a, b);
            if hi - lo >= third {
                return Err(fail(n + 1, format!("image of link {k} is not below eps/3")));
            }
            ranges.push(coarse.containing(lo, hi));
        }
        let nonempty = |r: (usize, usize)| r.1 != usize::MAX && r.0 <= r.1;
        let mut covered = vec![false; coarse.len()];
        for &r in &ranges {
            if nonempty(r) {
                covered[r.0..=r.1].iter_mut().for_each(|c| *c = true);
            }
        }
        if let Some(i) = covered.iter().position(|c| !c) {
            return Err(fail(n, format!("no fine link maps into coarse link {i}")));
        }
        for k in 0..ranges.len() {
            for l in k..(k + 3).min(ranges.len()) {
                let (rk, rl) = (ranges[k], ranges[l]);
                if !nonempty(rk) || !nonempty(rl) {
                    continue;
                }
                if rk.1.max(rl.1) - rk.0.min(rl.0) > 1 {
                    return Err(fail(
                        n + 1,
                        format!("links {k} and {l} map into non-adjacent coarse links"),
                    ));
                }
            }
        }
    }
    Ok(report)
}

/// The morphism sending fine link `i` to the first coarse link containing
/// `T` of its closure.
pub fn discretize(map: &PLOpenMap, fine: &Chain, coarse: &Chain) -> Result<Morphism, PlError> {
    let mut values = Vec::with_capacity(fine.len());
    for (i, link) in fine.links.iter().enumerate() {
        let (a, b) = link.closure();
        let (lo, hi) = map.image(a, b);
        let (first, last) = coarse.containing(lo, hi);
        if last == usize::MAX || first > last {
            return Err(PlError::NoContainingLink(i));
        }
        values.push(first);
    }
    Ok(validate(fine.len(), coarse.len(), &values)?)
}

/// Exact comparison, by cross-multiplication when that cannot overflow.
pub fn cmp_rat(a: &Rat, b: &Rat) -> Ordering {
    if a.denom() == b.denom() {
        return a.numer().cmp(b.numer());
    }
    match (a.numer().checked_mul(*b.denom()), b.numer().checked_mul(*a.denom())) {
        (Some(x), Some(y)) => x.cmp(&y),
        _ => a.cmp(b),
    }
}

fn lt(a: &Rat, b: &Rat) -> bool {
    cmp_rat(a, b) == Ordering::Less
}

fn le(a: &Rat, b: &Rat) -> bool {
    cmp_rat(a, b) != Ordering::Greater
}

fn rmin(a: Rat, b: Rat) -> Rat {
    if le(&a, &b) {
        a
    } else {
        b
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k(xn: i128, xd: i128, yn: i128, yd: i128) -> Knot {
        Knot(rat(xn, xd), rat(yn, yd))
    }

    #[test]
    fn tent_shapes() {
        assert_eq!(tent(1).unwrap(), PLOpenMap::identity());
        assert_eq!(tent(2).unwrap().knots(), &[k(0, 1, 0, 1), k(1, 2, 1, 1), k(1, 1, 0, 1)]);
        for d in 1..=9 {
            assert_eq!(pl_degree(&tent(d).unwrap()), d);
            assert_eq!(tent(d).unwrap().lipschitz(), Rat::from_integer(d as i128));
        }
        assert_eq!(tent(0).unwrap_err(), PlError::ZeroDegree);
    }

    #[test]
    fn tent_matches_its_formula() {
        // d x on even pieces, 1 + m - d x on odd ones
        for d in 1..=7i128 {
            let t = tent(d as usize).unwrap();
            for num in 0..=(4 * d) {
                let x = rat(num, 4 * d);
                let m = (x * d).floor().to_integer().min(d - 1);
                let want = if m % 2 == 0 {
                    x * d - m
                } else {
                    Rat::from_integer(1 + m) - x * d
                };
                assert_eq!(t.eval(x), want, "d={d} x={x}");
            }
        }
    }

    #[test]
    fn invalid_maps_are_rejected() {
        assert!(PLOpenMap::new(vec![k(0, 1, 0, 1), k(1, 2, 1, 2), k(1, 1, 0, 1)]).is_err());
        assert!(PLOpenMap::new(vec![k(0, 1, 0, 1), k(1, 1, 1, 2)]).is_err());
        assert!(PLOpenMap::new(vec![k(0, 1, 1, 1), k(1, 1, 0, 1)]).is_err());
        assert!(PLOpenMap::new(vec![k(0, 1, 0, 1), k(1, 2, 1, 1), k(3, 4, 1, 1), k(1, 1, 0, 1)]).is_err());
    }

    #[test]
    fn collinear_knots_are_dropped() {
        let m = PLOpenMap::new(vec![k(0, 1, 0, 1), k(1, 3, 1, 3), k(1, 1, 1, 1)]).unwrap();
        assert_eq!(m, PLOpenMap::identity());
    }

    #[test]
    fn composition_examples() {
        let six = pl_compose(&tent(2).unwrap(), &tent(3).unwrap());
        assert_eq!(six, tent(6).unwrap());
        let f = lift(&validate(5, 3, &[0, 1, 2, 1, 0]).unwrap());
        assert_eq!(pl_compose(&PLOpenMap::identity(), &f), f);
        assert_eq!(pl_compose(&f, &PLOpenMap::identity()), f);
    }

    #[test]
    fn commute_examples() {
        assert!(commute_check(2, 3).unwrap());
        assert!(commute_check(5, 1).unwrap());
    }

    #[test]
    fn sup_distance_examples() {
        let t2 = tent(2).unwrap();
        assert_eq!(sup_distance(&t2, &t2), Rat::zero());
        assert_eq!(sup_distance(&tent(1).unwrap(), &t2), Rat::one());
        let t3 = tent(3).unwrap();
        assert_eq!(sup_distance(&t2, &t3), sup_distance(&t3, &t2));
    }

    #[test]
    fn lift_examples() {
        let f = validate(3, 2, &[0, 1, 0]).unwrap();
        assert_eq!(lift(&f), tent(2).unwrap());
        assert_eq!(lift(&Morphism::identity(6).unwrap()), PLOpenMap::identity());
        // trailing plateau
        let f = validate(3, 2, &[0, 1, 1]).unwrap();
        assert_eq!(lift(&f), PLOpenMap::identity());
    }

    #[test]
    fn fine_chain_examples() {
        let c = fine_chain(3, rat(1, 10)).unwrap();
        let r = c.check().unwrap();
        assert_eq!(r.links, 3);
        assert!(c.mesh() < rat(2, 3));
        assert!(matches!(fine_chain(3, rat(1, 4)), Err(PlError::OverlapTooLarge(_))));
        assert!(matches!(fine_chain(3, rat(0, 1)), Err(PlError::OverlapTooLarge(_))));
        assert_eq!(fine_chain(1, rat(1, 10)).unwrap_err(), PlError::TooFewLinks(1));
    }

    #[test]
    fn chain_check_catches_bad_epsilon() {
        let mut c = fine_chain(5, rat(1, 8)).unwrap();
        c.epsilon = rat(1, 2);
        assert!(c.check().is_err());
    }

    #[test]
    fn containing_ranges() {
        let c = fine_chain(4, rat(1, 8)).unwrap();
        assert_eq!(c.containing(rat(0, 1), rat(1, 100)), (0, 0));
        // inside the overlap of links 1 and 2
        let (a, b) = c.containing(rat(1, 2) - rat(1, 100), rat(1, 2) + rat(1, 100));
        assert_eq!((a, b), (1, 2));
        let (a, b) = c.containing(rat(0, 1), rat(1, 1));
        assert!(a > b || b == usize::MAX);
    }

    #[test]
    fn single_level_tower() {
        let t = chain_tower(&[], 1).unwrap();
        assert_eq!(t.levels(), 1);
        let r = validate_tower(&t).unwrap();
        assert_eq!(r.links_per_level, vec![2]);
    }

    #[test]
    fn two_level_tent_tower() {
        let t = chain_tower(&[2, 2], 3).unwrap();
        validate_tower(&t).unwrap();
        let g = discretize(&t.maps[0], &t.chains[1], &t.chains[0]).unwrap();
        assert_eq!(g.degree(), 2);
        assert_eq!(g.apply(0), 0);
    }

    #[test]
    fn identity_discretizes_monotonically() {
        let t = chain_tower_for_maps(&[PLOpenMap::identity()], 2).unwrap();
        validate_tower(&t).unwrap();
        let g = discretize(&t.maps[0], &t.chains[1], &t.chains[0]).unwrap();
        assert_eq!(g.degree(), 1);
        assert!(g.is_non_decreasing());
    }

    #[test]
    fn coarse_fine_chain_has_no_containing_link() {
        let coarse = fine_chain(10, rat(1, 8)).unwrap();
        let fine = fine_chain(2, rat(1, 8)).unwrap();
        assert!(matches!(
            discretize(&tent(2).unwrap(), &fine, &coarse),
            Err(PlError::NoContainingLink(0))
        ));
    }

    #[test]
    fn serde_shapes() {
        let s = serde_json::to_string(&tent(2).unwrap()).unwrap();
        assert_eq!(s, "[[[0,1],[0,1]],[[1,2],[1,1]],[[1,1],[0,1]]]");
        let back: PLOpenMap = serde_json::from_str(&s).unwrap();
        assert_eq!(back, tent(2).unwrap());
    }
}

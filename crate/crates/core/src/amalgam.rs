//! Projective amalgamation of morphisms with a common codomain.
//!
//! Given `f: [[m]] -> [[k]]` and `g: [[n]] -> [[k]]` the construction finds
//! `f': [[L]] -> [[m]]` and `g': [[L]] -> [[n]]` with `f ∘ f' = g ∘ g'`:
//!
//! 1. Both maps are stretched so that every interior turning value is
//!    repeated, after which the domain splits into consecutive intervals on
//!    which the map is a monotone surjection ([`normalize_condition_star`],
//!    [`slope_split`]).
//! 2. The pieces of `f` are walked forwards and backwards in alternating
//!    blocks `1..l1, -l1..-1, ...` (`l2` blocks), the pieces of `g` likewise
//!    (`l1` blocks). Both walks have length `l1 * l2` and at every position
//!    the two pieces have the same slope ([`build_blocks`]).
//! 3. Each aligned pair of monotone pieces is amalgamated by taking the
//!    larger multiplicity of every value ([`amalgamate_parallel`]), and the
//!    results are glued end to end ([`amalgamate`]).

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lingraph::{compose, validate, Morphism, MorphismError, PointedLinearGraph};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AmalgamError {
    #[error(transparent)]
    Morphism(#[from] MorphismError),
    #[error("multiplicity at index {0} is zero")]
    ZeroMultiplicity(usize),
    #[error("expected {expected} multiplicities, got {got}")]
    MultiplicityLength { expected: usize, got: usize },
    #[error("pieces have different slope classes")]
    MixedSlopes,
    #[error("codomains differ: {left} vs {right}")]
    CodomainMismatch { left: usize, right: usize },
    #[error("string is not a monotone surjection onto a {cod}-vertex graph")]
    NotMonotoneSurjection { cod: usize },
    #[error("domain does not split into alternating monotone surjective intervals")]
    StarViolation,
    #[error("vertex {vertex} is out of range for a {n}-vertex graph")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("block counts must be at least 1")]
    EmptyBlocks,
    #[error("glued maps do not commute")]
    GluingFailed,
}

impl AmalgamError {
    pub fn name(&self) -> &'static str {
        match self {
            AmalgamError::Morphism(e) => e.name(),
            AmalgamError::ZeroMultiplicity(_) => "ZeroMultiplicity",
            AmalgamError::MultiplicityLength { .. } => "MultiplicityLength",
            AmalgamError::MixedSlopes => "MixedSlopes",
            AmalgamError::CodomainMismatch { .. } => "CodomainMismatch",
            AmalgamError::NotMonotoneSurjection { .. } => "NotMonotoneSurjection",
            AmalgamError::StarViolation => "StarViolation",
            AmalgamError::VertexOutOfRange { .. } => "VertexOutOfRange",
            AmalgamError::EmptyBlocks => "EmptyBlocks",
            AmalgamError::GluingFailed => "GluingFailed",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SlopeClass {
    /// Non-decreasing surjection starting at the zero vertex.
    Inc,
    /// Non-increasing surjection starting at the top vertex.
    Dec,
}

impl SlopeClass {
    pub fn flip(self) -> Self {
        match self {
            SlopeClass::Inc => SlopeClass::Dec,
            SlopeClass::Dec => SlopeClass::Inc,
        }
    }
}

/// A monotone surjection `[[len]] -> [[cod]]`. `Dec` pieces do not fix the
/// zero vertex, so they are not morphisms.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Piece {
    pub cod: usize,
    pub values: Vec<usize>,
    pub slope: SlopeClass,
}

impl Piece {
    pub fn new(cod: usize, values: Vec<usize>) -> Result<Self, AmalgamError> {
        let bad = || AmalgamError::NotMonotoneSurjection { cod };
        if cod < 2 || values.len() < 2 {
            return Err(bad());
        }
        let top = cod - 1;
        let steps_ok = values.windows(2).all(|w| w[0].abs_diff(w[1]) <= 1);
        let first = values[0];
        let last = *values.last().unwrap();
        let slope = if first == 0 && last == top && values.windows(2).all(|w| w[0] <= w[1]) {
            SlopeClass::Inc
        } else if first == top && last == 0 && values.windows(2).all(|w| w[0] >= w[1]) {
            SlopeClass::Dec
        } else {
            return Err(bad());
        };
        if !steps_ok {
            return Err(bad());
        }
        Ok(Piece { cod, values, slope })
    }

    pub fn from_morphism(f: &Morphism) -> Result<Self, AmalgamError> {
        Piece::new(f.cod_size(), f.values().to_vec())
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn reversed(&self) -> Piece {
        Piece {
            cod: self.cod,
            values: self.values.iter().rev().copied().collect(),
            slope: self.slope.flip(),
        }
    }

    /// Run lengths of the values in traversal order.
    pub fn multiplicities(&self) -> Vec<usize> {
        let mut runs = Vec::with_capacity(self.cod);
        let mut current = self.values[0];
        let mut len = 0;
        for &v in &self.values {
            if v == current {
                len += 1;
            } else {
                runs.push(len);
                current = v;
                len = 1;
            }
        }
        runs.push(len);
        runs
    }

    /// `self ∘ phi` for a map `phi` into `[[len]]`.
    pub fn precompose(&self, phi: &Morphism) -> Vec<usize> {
        phi.values().iter().map(|&i| self.values[i]).collect()
    }
}

/// The non-decreasing map whose fiber over `t` has `mults[t]` points.
pub fn stretch_map(mults: &[usize]) -> Result<Morphism, AmalgamError> {
    if let Some(i) = mults.iter().position(|&m| m == 0) {
        return Err(AmalgamError::ZeroMultiplicity(i));
    }
    let values: Vec<usize> = mults
        .iter()
        .enumerate()
        .flat_map(|(t, &m)| std::iter::repeat_n(t, m))
        .collect();
    Ok(validate(values.len(), mults.len(), &values)?)
}

/// `phi: [[n + j]] -> [[n]]` with `phi⁻¹(i)` of size `j + 1` and all other
/// fibers singletons, so `f ∘ phi` repeats `f(i)` an extra `j` times.
pub fn pad(f: &Morphism, i: usize, j: usize) -> Result<Morphism, AmalgamError> {
    let n = f.dom_size();
    if i >= n {
        return Err(AmalgamError::VertexOutOfRange { vertex: i, n });
    }
    let mut mults = vec![1; n];
    mults[i] = j + 1;
    stretch_map(&mults)
}

/// Returns `phi` and `f ∘ phi`, where `f ∘ phi` repeats each `f(t)` exactly
/// `mults[t]` times.
pub fn stretch(f: &Morphism, mults: &[usize]) -> Result<(Morphism, Morphism), AmalgamError> {
    if mults.len() != f.dom_size() {
        return Err(AmalgamError::MultiplicityLength {
            expected: f.dom_size(),
            got: mults.len(),
        });
    }
    let phi = stretch_map(mults)?;
    let stretched = compose(f, &phi)?;
    Ok((phi, stretched))
}

fn stretch_to(piece: &Piece, target: &[usize]) -> Result<Morphism, AmalgamError> {
    let runs = piece.multiplicities();
    let mut mults = Vec::with_capacity(piece.len());
    for (run, &want) in runs.iter().zip(target) {
        mults.extend(std::iter::repeat_n(1, run - 1));
        mults.push(want - run + 1);
    }
    stretch_map(&mults)
}

/// Amalgamates two monotone pieces of the same slope over their shared
/// codomain. Both returned maps are non-decreasing of degree 1, and
/// `f ∘ f~ = g ∘ g~` is the merge of the two strings that repeats every value
/// as often as the larger of its two multiplicities.
pub fn amalgamate_parallel(f: &Piece, g: &Piece) -> Result<(Morphism, Morphism), AmalgamError> {
    if f.cod != g.cod {
        return Err(AmalgamError::CodomainMismatch {
            left: f.cod,
            right: g.cod,
        });
    }
    if f.slope != g.slope {
        return Err(AmalgamError::MixedSlopes);
    }
    let merged: Vec<usize> = f
        .multiplicities()
        .iter()
        .zip(g.multiplicities())
        .map(|(&a, b)| a.max(b))
        .collect();
    Ok((stretch_to(f, &merged)?, stretch_to(g, &merged)?))
}

/// Stretches `f` so that each interior turning value appears twice in a row.
/// Returns `phi` and `f ∘ phi`; the latter satisfies condition (*).
pub fn normalize_condition_star(f: &Morphism) -> Result<(Morphism, Morphism), AmalgamError> {
    let mut mults = vec![1; f.dom_size()];
    let t = &f.fold().turning_indices;
    for &i in &t[1..t.len() - 1] {
        mults[i] = 2;
    }
    stretch(f, &mults)
}

/// A split of a condition-(*) morphism into consecutive monotone surjective
/// intervals, alternating in slope and starting with an increasing one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlopeSplit {
    /// `[min, max]` of each interval, in order.
    pub intervals: Vec<(usize, usize)>,
    /// `f_j` for `j = 1..=l`: the morphism restricted to interval `j`.
    pub pieces: Vec<Piece>,
}

impl SlopeSplit {
    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    /// `f_j` for `j > 0`; `f_{-j}` (interval `j` read backwards) for `j < 0`.
    pub fn piece(&self, signed: i64) -> Piece {
        let idx = signed.unsigned_abs() as usize - 1;
        if signed > 0 {
            self.pieces[idx].clone()
        } else {
            self.pieces[idx].reversed()
        }
    }
}

pub fn slope_split(fstar: &Morphism) -> Result<SlopeSplit, AmalgamError> {
    let v = fstar.values();
    let n = v.len();
    let top = fstar.cod_size() - 1;
    let mut intervals = Vec::new();
    let mut pieces = Vec::new();
    let mut start = 0;
    let mut rising = true;
    while start < n {
        let (from, to) = if rising { (0, top) } else { (top, 0) };
        if v[start] != from {
            return Err(AmalgamError::StarViolation);
        }
        let mut hit = None;
        for t in start + 1..n {
            let monotone = if rising { v[t] >= v[t - 1] } else { v[t] <= v[t - 1] };
            if !monotone {
                return Err(AmalgamError::StarViolation);
            }
            if v[t] == to {
                hit = Some(t);
                break;
            }
        }
        let mut end = hit.ok_or(AmalgamError::StarViolation)?;
        if v[end..].iter().all(|&x| x == to) {
            end = n - 1;
        }
        intervals.push((start, end));
        pieces.push(Piece::new(fstar.cod_size(), v[start..=end].to_vec())?);
        start = end + 1;
        rising = !rising;
    }
    Ok(SlopeSplit { intervals, pieces })
}

/// The alternating block walks: `alpha` is `l2` blocks alternating between
/// `1..=l1` and `-l1..=-1`; `beta` is `l1` blocks alternating between
/// `1..=l2` and `-l2..=-1`.
pub fn build_blocks(l1: usize, l2: usize) -> Result<(Vec<i64>, Vec<i64>), AmalgamError> {
    if l1 == 0 || l2 == 0 {
        return Err(AmalgamError::EmptyBlocks);
    }
    fn walk(len: usize, blocks: usize) -> Vec<i64> {
        let up: Vec<i64> = (1..=len as i64).collect();
        let down: Vec<i64> = (1..=len as i64).rev().map(|x| -x).collect();
        (0..blocks)
            .flat_map(|b| if b % 2 == 0 { up.clone() } else { down.clone() })
            .collect()
    }
    Ok((walk(l1, l2), walk(l2, l1)))
}

/// Slope of `f_j` (`j > 0`) or `f_{-j}` (`j < 0`) in an alternating split
/// that starts increasing.
pub fn signed_slope(signed: i64) -> SlopeClass {
    let forward = if signed.unsigned_abs() % 2 == 1 {
        SlopeClass::Inc
    } else {
        SlopeClass::Dec
    };
    if signed > 0 {
        forward
    } else {
        forward.flip()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AmalgamationPlan {
    pub alpha: Vec<i64>,
    pub beta: Vec<i64>,
    /// Domain size of the piece amalgam at each position.
    pub piece_sizes: Vec<usize>,
    /// `[l_j, r_j]` for each position; consecutive and covering `[[total]]`.
    pub segments: Vec<(usize, usize)>,
    pub total: usize,
    /// Vertex of the normalized `f` domain where each segment is anchored
    /// (start of a forward piece, end of a reversed one).
    pub f_anchors: Vec<usize>,
    pub g_anchors: Vec<usize>,
}

impl AmalgamationPlan {
    /// Structural invariants: block shape, matching slopes, segment tiling.
    pub fn check_shape(&self, l1: usize, l2: usize) -> bool {
        let Ok((a, b)) = build_blocks(l1, l2) else {
            return false;
        };
        if a != self.alpha || b != self.beta {
            return false;
        }
        if self
            .alpha
            .iter()
            .zip(&self.beta)
            .any(|(&x, &y)| signed_slope(x) != signed_slope(y))
        {
            return false;
        }
        let mut next = 0;
        for (&(l, r), &p) in self.segments.iter().zip(&self.piece_sizes) {
            if l != next || r + 1 != l + p {
                return false;
            }
            next = r + 1;
        }
        next == self.total && self.piece_sizes.iter().sum::<usize>() == self.total
    }
}

/// Output of [`amalgamate`]: `f ∘ f_prime = g ∘ g_prime`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Amalgamation {
    pub f: Morphism,
    pub g: Morphism,
    pub f_prime: Morphism,
    pub g_prime: Morphism,
    pub plan: AmalgamationPlan,
}

impl Amalgamation {
    /// Re-checks the commuting square and the plan's shape.
    pub fn verify(&self) -> bool {
        let (Ok(left), Ok(right)) = (compose(&self.f, &self.f_prime), compose(&self.g, &self.g_prime)) else {
            return false;
        };
        // after normalization the number of pieces equals the degree
        left == right
            && self.f_prime.dom_size() == self.plan.total
            && self.plan.check_shape(self.f.degree(), self.g.degree())
    }
}

fn glue(
    walk: &[i64],
    split: &SlopeSplit,
    locals: &[Morphism],
    total: usize,
    cod: usize,
) -> Result<(Morphism, Vec<usize>), AmalgamError> {
    let mut values = Vec::with_capacity(total);
    let mut anchors = Vec::with_capacity(walk.len());
    for (&signed, local) in walk.iter().zip(locals) {
        let (lo, hi) = split.intervals[signed.unsigned_abs() as usize - 1];
        if signed > 0 {
            anchors.push(lo);
            values.extend(local.values().iter().map(|&x| lo + x));
        } else {
            anchors.push(hi);
            values.extend(local.values().iter().map(|&x| hi - x));
        }
    }
    Ok((validate(total, cod, &values)?, anchors))
}

/// Projective amalgamation of two morphisms with the same codomain.
pub fn amalgamate(f: &Morphism, g: &Morphism) -> Result<Amalgamation, AmalgamError> {
    if f.cod_size() != g.cod_size() {
        return Err(AmalgamError::CodomainMismatch {
            left: f.cod_size(),
            right: g.cod_size(),
        });
    }
    let (phi, fstar) = normalize_condition_star(f)?;
    let (psi, gstar) = normalize_condition_star(g)?;
    let fs = slope_split(&fstar)?;
    let gs = slope_split(&gstar)?;
    let (alpha, beta) = build_blocks(fs.len(), gs.len())?;

    let mut f_locals = Vec::with_capacity(alpha.len());
    let mut g_locals = Vec::with_capacity(alpha.len());
    for (&a, &b) in alpha.iter().zip(&beta) {
        let (fl, gl) = amalgamate_parallel(&fs.piece(a), &gs.piece(b))?;
        f_locals.push(fl);
        g_locals.push(gl);
    }
    let piece_sizes: Vec<usize> = f_locals.iter().map(|m| m.dom_size()).collect();
    let total: usize = piece_sizes.iter().sum();
    let mut segments = Vec::with_capacity(piece_sizes.len());
    let mut left = 0;
    for &p in &piece_sizes {
        segments.push((left, left + p - 1));
        left += p;
    }

    let (f_glued, f_anchors) = glue(&alpha, &fs, &f_locals, total, fstar.dom_size())?;
    let (g_glued, g_anchors) = glue(&beta, &gs, &g_locals, total, gstar.dom_size())?;
    let f_prime = compose(&phi, &f_glued)?;
    let g_prime = compose(&psi, &g_glued)?;
    if compose(f, &f_prime)? != compose(g, &g_prime)? {
        return Err(AmalgamError::GluingFailed);
    }
    Ok(Amalgamation {
        f: f.clone(),
        g: g.clone(),
        f_prime,
        g_prime,
        plan: AmalgamationPlan {
            alpha,
            beta,
            piece_sizes,
            segments,
            total,
            f_anchors,
            g_anchors,
        },
    })
}

/// A common preimage of two graphs: the larger one, mapped identically onto
/// itself and onto the smaller one by collapsing its tail onto the top vertex.
pub fn joint_project(
    a: PointedLinearGraph,
    b: PointedLinearGraph,
) -> Result<(PointedLinearGraph, Morphism, Morphism), AmalgamError> {
    let c = a.max(b);
    let onto = |target: PointedLinearGraph| -> Result<Morphism, AmalgamError> {
        let values: Vec<usize> = (0..c.size()).map(|i| i.min(target.top())).collect();
        Ok(validate(c.size(), target.size(), &values)?)
    };
    Ok((c, onto(a)?, onto(b)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(cod: usize, v: &[usize]) -> Morphism {
        validate(v.len(), cod, v).unwrap()
    }

    #[test]
    fn pad_examples() {
        let id2 = Morphism::identity(2).unwrap();
        let phi = pad(&id2, 1, 2).unwrap();
        assert_eq!(phi.values(), &[0, 1, 1, 1]);
        assert_eq!(compose(&id2, &phi).unwrap().values(), &[0, 1, 1, 1]);

        let f = m(2, &[0, 1, 0]);
        assert!(pad(&f, 2, 0).unwrap().is_identity());
        let phi = pad(&f, 1, 1).unwrap();
        assert_eq!(phi.values(), &[0, 1, 1, 2]);
        assert_eq!(compose(&f, &phi).unwrap().values(), &[0, 1, 1, 0]);
        assert!(matches!(pad(&f, 3, 1), Err(AmalgamError::VertexOutOfRange { .. })));
    }

    #[test]
    fn stretch_examples() {
        let id2 = Morphism::identity(2).unwrap();
        let (_, s) = stretch(&id2, &[2, 3]).unwrap();
        assert_eq!(s.values(), &[0, 0, 1, 1, 1]);
        let f = m(2, &[0, 1, 0]);
        let (phi, s) = stretch(&f, &[1, 1, 1]).unwrap();
        assert!(phi.is_identity());
        assert_eq!(s, f);
        assert_eq!(stretch(&f, &[1, 0, 1]).unwrap_err(), AmalgamError::ZeroMultiplicity(1));
    }

    #[test]
    fn parallel_examples() {
        let f = Piece::new(2, vec![0, 0, 1]).unwrap();
        let g = Piece::new(2, vec![0, 1, 1]).unwrap();
        let (ft, gt) = amalgamate_parallel(&f, &g).unwrap();
        assert_eq!(ft.values(), &[0, 1, 2, 2]);
        assert_eq!(gt.values(), &[0, 0, 1, 2]);
        assert_eq!(f.precompose(&ft), vec![0, 0, 1, 1]);
        assert_eq!(g.precompose(&gt), vec![0, 0, 1, 1]);

        let (ft, gt) = amalgamate_parallel(&f, &f).unwrap();
        assert!(ft.is_identity() && gt.is_identity());

        let d = Piece::new(2, vec![1, 0]).unwrap();
        assert_eq!(amalgamate_parallel(&f, &d).unwrap_err(), AmalgamError::MixedSlopes);
    }

    #[test]
    fn parallel_decreasing_pieces() {
        let f = Piece::new(3, vec![2, 2, 1, 0]).unwrap();
        let g = Piece::new(3, vec![2, 1, 1, 1, 0, 0]).unwrap();
        let (ft, gt) = amalgamate_parallel(&f, &g).unwrap();
        assert_eq!(f.precompose(&ft), vec![2, 2, 1, 1, 1, 0, 0]);
        assert_eq!(g.precompose(&gt), f.precompose(&ft));
    }

    #[test]
    fn condition_star_examples() {
        let (_, s) = normalize_condition_star(&m(2, &[0, 1, 0])).unwrap();
        assert_eq!(s.values(), &[0, 1, 1, 0]);
        assert_eq!(slope_split(&s).unwrap().intervals, vec![(0, 1), (2, 3)]);

        let id = Morphism::identity(4).unwrap();
        let (phi, s) = normalize_condition_star(&id).unwrap();
        assert!(phi.is_identity());
        assert_eq!(s, id);

        let (_, s) = normalize_condition_star(&m(2, &[0, 1, 0, 1])).unwrap();
        assert_eq!(s.values(), &[0, 1, 1, 0, 0, 1]);
        assert_eq!(slope_split(&s).unwrap().len(), 3);
    }

    #[test]
    fn slope_split_examples() {
        let s = slope_split(&m(2, &[0, 1, 1, 0])).unwrap();
        assert_eq!(s.intervals, vec![(0, 1), (2, 3)]);
        assert_eq!(s.piece(1).values, vec![0, 1]);
        assert_eq!(s.piece(1).slope, SlopeClass::Inc);
        assert_eq!(s.piece(2).values, vec![1, 0]);
        assert_eq!(s.piece(2).slope, SlopeClass::Dec);
        assert_eq!(s.piece(-2).values, vec![0, 1]);
        assert_eq!(s.piece(-2).slope, SlopeClass::Inc);

        let id = Morphism::identity(3).unwrap();
        assert_eq!(slope_split(&id).unwrap().intervals, vec![(0, 2)]);

        assert_eq!(slope_split(&m(2, &[0, 1, 0])).unwrap_err(), AmalgamError::StarViolation);
    }

    #[test]
    fn block_examples() {
        assert_eq!(build_blocks(2, 1).unwrap(), (vec![1, 2], vec![1, -1]));
        assert_eq!(build_blocks(1, 1).unwrap(), (vec![1], vec![1]));
        assert_eq!(
            build_blocks(2, 2).unwrap(),
            (vec![1, 2, -2, -1], vec![1, 2, -2, -1])
        );
        assert_eq!(build_blocks(0, 1).unwrap_err(), AmalgamError::EmptyBlocks);
    }

    #[test]
    fn amalgamate_examples() {
        let f = m(2, &[0, 1, 0]);
        let id = Morphism::identity(2).unwrap();
        let a = amalgamate(&f, &id).unwrap();
        assert_eq!(compose(&f, &a.f_prime).unwrap(), compose(&id, &a.g_prime).unwrap());
        assert!(a.verify());
        assert_eq!(a.plan.alpha, vec![1, 2]);
        assert_eq!(a.plan.beta, vec![1, -1]);

        let a = amalgamate(&f, &f).unwrap();
        assert_eq!(compose(&f, &a.f_prime).unwrap(), compose(&f, &a.g_prime).unwrap());

        let g = m(3, &[0, 1, 2]);
        assert!(matches!(amalgamate(&f, &g), Err(AmalgamError::CodomainMismatch { .. })));
    }

    #[test]
    fn amalgam_degrees_cross() {
        let f = m(3, &[0, 1, 2, 1, 0]);
        let g = m(3, &[0, 1, 2, 2, 1, 0, 1, 2]);
        let a = amalgamate(&f, &g).unwrap();
        assert_eq!(a.f_prime.degree(), g.degree());
        assert_eq!(a.g_prime.degree(), f.degree());
    }

    #[test]
    fn joint_project_examples() {
        let g = |n| PointedLinearGraph::new(n).unwrap();
        let (c, pa, pb) = joint_project(g(2), g(3)).unwrap();
        assert_eq!(c, g(3));
        assert!(pb.is_identity());
        assert_eq!(pa.cod_size(), 2);

        let (c, pa, pb) = joint_project(g(4), g(4)).unwrap();
        assert_eq!(c, g(4));
        assert!(pa.is_identity() && pb.is_identity());

        let (c, pa, pb) = joint_project(g(4), g(3)).unwrap();
        assert_eq!(c, g(4));
        assert!(pa.is_identity());
        assert_eq!(pb.values(), &[0, 1, 2, 2]);
    }
}

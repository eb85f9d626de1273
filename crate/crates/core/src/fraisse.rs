//! Weighted objects, finite generic sequences built by saturating requests,
//! and stage-one data of automorphisms of the limit.

use std::collections::VecDeque;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::amalgam::{amalgamate, pad, AmalgamError};
use crate::lingraph::{compose, zigzag, EpiIter, Morphism, MorphismError, PointedLinearGraph};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FraisseError {
    #[error("degree {degree} does not match the weight ratio {ratio}")]
    DegreeMismatch { degree: usize, ratio: Rational },
    #[error("weight ratio {0} is not a natural number")]
    NonIntegerRatio(Rational),
    #[error("codomains differ: {left} and {right}")]
    CodomainMismatch { left: String, right: String },
    #[error("tower budget of {budget} levels is used up")]
    BudgetExhausted { budget: usize },
    #[error("vertices {x} and {y} are at distance {distance}, not more than 1")]
    NotSeparated { x: usize, y: usize, distance: usize },
    #[error("level {level} is not below the tower length {len}")]
    LevelOutOfRange { level: usize, len: usize },
    #[error("vertex {vertex} is not in a graph with {size} vertices")]
    VertexOutOfRange { vertex: usize, size: usize },
    #[error("budget must be at least 1")]
    ZeroBudget,
    #[error("inconsistent sequence: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Morphism(#[from] MorphismError),
    #[error(transparent)]
    Amalgam(#[from] AmalgamError),
}

impl FraisseError {
    pub fn name(&self) -> &'static str {
        match self {
            FraisseError::DegreeMismatch { .. } => "DegreeMismatch",
            FraisseError::NonIntegerRatio(_) => "NonIntegerRatio",
            FraisseError::CodomainMismatch { .. } => "CodomainMismatch",
            FraisseError::BudgetExhausted { .. } => "BudgetExhausted",
            FraisseError::NotSeparated { .. } => "NotSeparated",
            FraisseError::LevelOutOfRange { .. } => "LevelOutOfRange",
            FraisseError::VertexOutOfRange { .. } => "VertexOutOfRange",
            FraisseError::ZeroBudget => "ZeroBudget",
            FraisseError::Inconsistent(_) => "Inconsistent",
            FraisseError::Morphism(e) => e.name(),
            FraisseError::Amalgam(e) => e.name(),
        }
    }
}

/// A graph with a positive rational weight.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AnnotatedObject {
    pub graph: PointedLinearGraph,
    pub weight: Rational,
}

impl AnnotatedObject {
    pub fn new(size: usize, weight: Rational) -> Result<Self, FraisseError> {
        Ok(AnnotatedObject {
            graph: PointedLinearGraph::new(size)?,
            weight,
        })
    }
}

/// A morphism whose degree equals the ratio of its weights.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnnotatedMorphism {
    base: Morphism,
    dom_w: Rational,
    cod_w: Rational,
}

impl AnnotatedMorphism {
    pub fn base(&self) -> &Morphism {
        &self.base
    }

    pub fn dom_w(&self) -> Rational {
        self.dom_w
    }

    pub fn cod_w(&self) -> Rational {
        self.cod_w
    }

    pub fn dom(&self) -> AnnotatedObject {
        AnnotatedObject {
            graph: self.base.dom(),
            weight: self.dom_w,
        }
    }

    pub fn cod(&self) -> AnnotatedObject {
        AnnotatedObject {
            graph: self.base.cod(),
            weight: self.cod_w,
        }
    }
}

pub fn validate_star(f: &Morphism, dom_w: Rational, cod_w: Rational) -> Result<AnnotatedMorphism, FraisseError> {
    let ratio = dom_w / cod_w;
    let Some(r) = ratio.as_integer() else {
        return Err(FraisseError::NonIntegerRatio(ratio));
    };
    if r != f.degree() as u64 {
        return Err(FraisseError::DegreeMismatch {
            degree: f.degree(),
            ratio,
        });
    }
    Ok(AnnotatedMorphism {
        base: f.clone(),
        dom_w,
        cod_w,
    })
}

/// Amalgamates the underlying morphisms of `f: (B, m) -> (A, k)` and
/// `g: (C, n) -> (A, k)` and gives the amalgam the weight `mn/k`.
pub fn star_amalgamate(
    f: &AnnotatedMorphism,
    g: &AnnotatedMorphism,
) -> Result<(AnnotatedObject, AnnotatedMorphism, AnnotatedMorphism), FraisseError> {
    if f.cod() != g.cod() {
        return Err(FraisseError::CodomainMismatch {
            left: format!("({}, {})", f.base.cod(), f.cod_w),
            right: format!("({}, {})", g.base.cod(), g.cod_w),
        });
    }
    let am = amalgamate(&f.base, &g.base)?;
    let weight = f.dom_w * g.dom_w / f.cod_w;
    let f_prime = validate_star(&am.f_prime, weight, f.dom_w)?;
    let g_prime = validate_star(&am.g_prime, weight, g.dom_w)?;
    Ok((
        AnnotatedObject {
            graph: am.f_prime.dom(),
            weight,
        },
        f_prime,
        g_prime,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Category {
    K,
    Kstar,
}

/// Asks for `h: A_N -> B` with `g ∘ h = e ∘ f_level^N`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Request {
    pub level: usize,
    pub e: Morphism,
    pub g: Morphism,
    /// Weights of the codomain `A` and of `B`, for weighted sequences.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<(Rational, Rational)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SaturationCertificate {
    pub request: Request,
    pub level: usize,
    pub h: Morphism,
}

impl SaturationCertificate {
    /// `g ∘ h = e ∘ f_n^N`, plus the weight condition on `h` for weighted
    /// sequences.
    pub fn verify(&self, seq: &GenericSequence) -> Result<(), FraisseError> {
        let r = &self.request;
        if r.level > self.level || self.level >= seq.len() {
            return Err(FraisseError::Inconsistent(format!(
                "certificate levels {} -> {} do not fit a tower of {}",
                r.level,
                self.level,
                seq.len()
            )));
        }
        let left = compose(&r.g, &self.h)?;
        let right = compose(&r.e, &seq.composite(r.level, self.level)?)?;
        if left != right {
            return Err(FraisseError::Inconsistent("g ∘ h differs from e ∘ f_n^N".into()));
        }
        if let (Some(weights), Some((a_w, b_w))) = (&seq.weights, r.weights) {
            validate_star(&r.e, weights[r.level], a_w)?;
            validate_star(&r.g, b_w, a_w)?;
            validate_star(&self.h, weights[self.level], b_w)?;
        }
        Ok(())
    }
}

/// A finite tower `A_0 <- A_1 <- ... <- A_{len-1}` with bonds
/// `bonds[n] = f_n^{n+1}: A_{n+1} -> A_n`, levels counted from 0.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenericSequence {
    pub category: Category,
    pub objects: Vec<PointedLinearGraph>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<Rational>>,
    pub bonds: Vec<Morphism>,
    pub certificates: Vec<SaturationCertificate>,
    /// Requests that were due when the budget ran out, one per level.
    pub pending: Vec<Request>,
    /// Largest number of levels the tower may reach.
    pub budget: usize,
    /// Largest graph size (and weight numerator/denominator) used in requests.
    pub size_bound: usize,
    pub seed: u64,
}

impl GenericSequence {
    /// The one-level tower `[[2]]` (with weight 1 when weighted).
    pub fn trivial(category: Category, budget: usize, seed: u64) -> Result<Self, FraisseError> {
        if budget == 0 {
            return Err(FraisseError::ZeroBudget);
        }
        Ok(GenericSequence {
            category,
            objects: vec![PointedLinearGraph::new(2)?],
            weights: (category == Category::Kstar).then(|| vec![Rational::one()]),
            bonds: Vec::new(),
            certificates: Vec::new(),
            pending: Vec::new(),
            budget,
            size_bound: budget + 2,
            seed,
        })
    }

    pub fn len(&self) -> usize {
        self.objects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.objects.is_empty()
    }

    pub fn top(&self) -> usize {
        self.objects.len() - 1
    }

    pub fn weight(&self, level: usize) -> Option<Rational> {
        self.weights.as_ref().map(|w| w[level])
    }

    /// `f_n^N = f_n^{n+1} ∘ ... ∘ f_{N-1}^N`, the identity when `n = N`.
    pub fn composite(&self, n: usize, big_n: usize) -> Result<Morphism, FraisseError> {
        if big_n >= self.len() || n > big_n {
            return Err(FraisseError::LevelOutOfRange {
                level: big_n.max(n),
                len: self.len(),
            });
        }
        let mut acc = Morphism::identity(self.objects[big_n].size())?;
        for k in (n..big_n).rev() {
            acc = compose(&self.bonds[k], &acc)?;
        }
        Ok(acc)
    }

    /// Re-checks bonds, weights and every certificate.
    pub fn verify(&self) -> Result<(), FraisseError> {
        let bad = |why: String| Err(FraisseError::Inconsistent(why));
        if self.objects.is_empty() {
            return bad("no levels".into());
        }
        if self.bonds.len() + 1 != self.objects.len() {
            return bad("bond count must be one less than the level count".into());
        }
        match (&self.weights, self.category) {
            (None, Category::K) => {}
            (Some(w), Category::Kstar) if w.len() == self.objects.len() => {}
            _ => return bad("weights do not match the category".into()),
        }
        for (n, b) in self.bonds.iter().enumerate() {
            if b.dom() != self.objects[n + 1] || b.cod() != self.objects[n] {
                return bad(format!("bond {n} has the wrong shape"));
            }
            if let Some(w) = &self.weights {
                validate_star(b, w[n + 1], w[n])?;
            }
        }
        for c in &self.certificates {
            c.verify(self)?;
        }
        Ok(())
    }

    /// Stable identity of one request for lookups.
    fn find_certificate(&self, level: usize, e: &Morphism, g: &Morphism) -> Option<&SaturationCertificate> {
        self.certificates
            .iter()
            .find(|c| c.request.level == level && &c.request.e == e && &c.request.g == g)
    }

    /// Answers a request: for free when `g` is an identity, otherwise by
    /// amalgamating `e ∘ f_n^top` with `g` and appending the amalgam.
    pub fn discharge(&mut self, request: Request) -> Result<SaturationCertificate, FraisseError> {
        let n = request.level;
        if n >= self.len() {
            return Err(FraisseError::LevelOutOfRange { level: n, len: self.len() });
        }
        if request.e.dom() != self.objects[n] {
            return Err(FraisseError::Inconsistent("e does not start at the requested level".into()));
        }
        if request.e.cod() != request.g.cod() {
            return Err(FraisseError::CodomainMismatch {
                left: request.e.cod().to_string(),
                right: request.g.cod().to_string(),
            });
        }
        if let (Some(w), Some((a_w, b_w))) = (&self.weights, request.weights) {
            validate_star(&request.e, w[n], a_w)?;
            validate_star(&request.g, b_w, a_w)?;
        }
        let cert = if request.g.is_identity() {
            SaturationCertificate {
                h: request.e.clone(),
                level: n,
                request,
            }
        } else {
            if self.len() >= self.budget {
                return Err(FraisseError::BudgetExhausted { budget: self.budget });
            }
            let top = self.top();
            let down = compose(&request.e, &self.composite(n, top)?)?;
            let am = amalgamate(&down, &request.g)?;
            if let Some(w) = &mut self.weights {
                let new_w = w[top] * Rational::integer(request.g.degree() as u64).expect("degrees are positive");
                validate_star(&am.f_prime, new_w, w[top])?;
                w.push(new_w);
            }
            self.objects.push(am.f_prime.dom());
            self.bonds.push(am.f_prime);
            SaturationCertificate {
                h: am.g_prime,
                level: top + 1,
                request,
            }
        };
        cert.verify(self)?;
        self.certificates.push(cert.clone());
        Ok(cert)
    }

    /// Drops the weights; bonds and certificates are kept verbatim.
    pub fn forget(&self) -> GenericSequence {
        let strip = |r: &Request| Request {
            weights: None,
            ..r.clone()
        };
        GenericSequence {
            category: Category::K,
            weights: None,
            certificates: self
                .certificates
                .iter()
                .map(|c| SaturationCertificate {
                    request: strip(&c.request),
                    ..c.clone()
                })
                .collect(),
            pending: self.pending.iter().map(strip).collect(),
            ..self.clone()
        }
    }
}

pub fn forget(seq: &GenericSequence) -> GenericSequence {
    seq.forget()
}

// Requests (e: A_n -> [[a]], g: [[b]] -> [[a]]) for one size pair.
struct PairStream {
    a: PointedLinearGraph,
    b: PointedLinearGraph,
    es: EpiIter,
    e: Option<Morphism>,
    gs: Option<EpiIter>,
}

impl PairStream {
    fn next(&mut self) -> Option<(Morphism, Morphism)> {
        loop {
            if self.e.is_none() {
                self.e = Some(self.es.next()?);
                self.gs = Some(EpiIter::new(self.b, self.a, None));
            }
            if let Some(g) = self.gs.as_mut().and_then(Iterator::next) {
                return Some((self.e.clone().unwrap(), g));
            }
            self.e = None;
        }
    }
}

// The size pairs of one level, smallest `a + b` first.
struct LevelStream {
    level: usize,
    pairs: VecDeque<PairStream>,
}

impl LevelStream {
    fn new(seq: &GenericSequence, level: usize) -> Self {
        let an = seq.objects[level];
        let bound = seq.size_bound;
        let mut sizes: Vec<(usize, usize)> = (2..=bound.min(an.size()))
            .flat_map(|a| (a..=bound).map(move |b| (a, b)))
            .collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seq.seed ^ (level as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
        sizes.shuffle(&mut rng);
        sizes.sort_by_key(|&(a, b)| a + b);
        let pairs = sizes
            .into_iter()
            .map(|(a, b)| {
                let a = PointedLinearGraph::new(a).expect("sizes start at 2");
                PairStream {
                    a,
                    b: PointedLinearGraph::new(b).expect("sizes start at 2"),
                    es: EpiIter::new(an, a, None),
                    e: None,
                    gs: None,
                }
            })
            .collect();
        LevelStream { level, pairs }
    }

    fn next(&mut self) -> Option<(Morphism, Morphism)> {
        while let Some(front) = self.pairs.front_mut() {
            if let Some(r) = front.next() {
                return Some(r);
            }
            self.pairs.pop_front();
        }
        None
    }
}

fn within(r: Rational, bound: usize) -> bool {
    r.numerator() <= bound as u64 && r.denominator() <= bound as u64
}

/// Next request of a level stream that respects the weight bound.
fn next_request(seq: &GenericSequence, stream: &mut LevelStream) -> Option<Request> {
    loop {
        let (e, g) = stream.next()?;
        let weights = match &seq.weights {
            None => None,
            Some(w) => {
                let a_w = w[stream.level] / Rational::integer(e.degree() as u64).ok()?;
                let b_w = a_w * Rational::integer(g.degree() as u64).ok()?;
                if !within(a_w, seq.size_bound) || !within(b_w, seq.size_bound) {
                    continue;
                }
                Some((a_w, b_w))
            }
        };
        return Some(Request {
            level: stream.level,
            e,
            g,
            weights,
        });
    }
}

/// Builds a tower of at most `budget` levels from `[[2]]`.
///
/// Every level contributes a stream of requests `(e, g)` with graphs of at
/// most `budget + 2` vertices (and, when weighted, weights whose numerator and
/// denominator are at most `budget + 2`). Within a level, size pairs `(a, b)`
/// come in order of `a + b`, the seed shuffling pairs of equal sum. Streams are
/// served round robin, one request per level per turn, and each request is
/// discharged in turn. When the budget is reached the next request of every
/// level is left in `pending`.
pub fn build_generic(category: Category, budget: usize, seed: u64) -> Result<GenericSequence, FraisseError> {
    build_generic_with_bound(category, budget, seed, budget + 2)
}

/// [`build_generic`] with an explicit size bound in place of `budget + 2`.
///
/// With the seed and bound fixed, the tower for a larger budget extends the
/// tower for a smaller one.
pub fn build_generic_with_bound(
    category: Category,
    budget: usize,
    seed: u64,
    size_bound: usize,
) -> Result<GenericSequence, FraisseError> {
    let mut seq = GenericSequence::trivial(category, budget, seed)?;
    seq.size_bound = size_bound;
    let mut streams = vec![LevelStream::new(&seq, 0)];
    let mut cursor = 0;
    loop {
        if streams.is_empty() {
            return Ok(seq);
        }
        cursor %= streams.len();
        let Some(req) = next_request(&seq, &mut streams[cursor]) else {
            streams.remove(cursor);
            continue;
        };
        cursor += 1;
        if seq.len() >= seq.budget {
            seq.pending.push(req);
            for s in streams.iter_mut() {
                if s.level != seq.pending[0].level {
                    if let Some(r) = next_request(&seq, s) {
                        seq.pending.push(r);
                    }
                }
            }
            seq.pending.sort_by_key(|r| r.level);
            return Ok(seq);
        }
        let before = seq.len();
        seq.discharge(req)?;
        if seq.len() > before {
            streams.push(LevelStream::new(&seq, seq.top()));
        }
    }
}

/// `min |z - w|` over `z ∈ f^-1(x)` and `w ∈ f^-1(y)`.
pub fn fiber_distance(f: &Morphism, x: usize, y: usize) -> Option<usize> {
    let (fx, fy) = (f.fiber(x), f.fiber(y));
    let (mut i, mut j) = (0, 0);
    let mut best: Option<usize> = None;
    while i < fx.len() && j < fy.len() {
        let d = fx[i].abs_diff(fy[j]);
        best = Some(best.map_or(d, |b| b.min(d)));
        if fx[i] < fy[j] {
            i += 1;
        } else {
            j += 1;
        }
    }
    best
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Separation {
    pub level: usize,
    pub x: usize,
    pub y: usize,
    /// The non-decreasing morphism doubling a vertex between `x` and `y`.
    pub g: Morphism,
    pub certificate: SaturationCertificate,
    /// Fiber distance of `x` and `y` under `f_level^top` afterwards.
    pub distance: usize,
}

/// Makes the fibers of `x` and `y` over `A_level` more than 2 apart at the
/// new top level: the vertex after `min(x, y)` is doubled by a non-decreasing
/// `g` and the request `(id, g)` is discharged.
pub fn separation_extension(
    seq: &mut GenericSequence,
    level: usize,
    x: usize,
    y: usize,
) -> Result<Separation, FraisseError> {
    if level >= seq.len() {
        return Err(FraisseError::LevelOutOfRange { level, len: seq.len() });
    }
    let a = seq.objects[level];
    for v in [x, y] {
        if v >= a.size() {
            return Err(FraisseError::VertexOutOfRange { vertex: v, size: a.size() });
        }
    }
    let distance = x.abs_diff(y);
    if distance <= 1 {
        return Err(FraisseError::NotSeparated { x, y, distance });
    }
    let id = Morphism::identity(a.size())?;
    let g = pad(&id, x.min(y) + 1, 1)?;
    let weights = seq.weight(level).map(|w| (w, w));
    let certificate = seq.discharge(Request {
        level,
        e: id,
        g: g.clone(),
        weights,
    })?;
    let down = seq.composite(level, certificate.level)?;
    let distance = fiber_distance(&down, x, y).expect("bonds are surjective");
    Ok(Separation {
        level,
        x,
        y,
        g,
        certificate,
        distance,
    })
}

/// Stage-one data of an automorphism: `pi_0 ∘ alpha = g1 ∘ pi_{i1}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AutomorphismApprox {
    pub i1: usize,
    pub g1: Morphism,
}

/// `deg(g1) / deg(f_0^{i1})`.
pub fn approx_degree(a: &AutomorphismApprox, seq: &GenericSequence) -> Result<Rational, FraisseError> {
    if a.i1 >= seq.len() {
        return Err(FraisseError::LevelOutOfRange { level: a.i1, len: seq.len() });
    }
    if a.g1.dom() != seq.objects[a.i1] || a.g1.cod() != seq.objects[0] {
        return Err(FraisseError::Inconsistent("g1 must map level i1 onto level 0".into()));
    }
    let f = seq.composite(0, a.i1)?;
    Ok(Rational::new(a.g1.degree() as u64, f.degree() as u64).expect("degrees are positive"))
}

/// An automorphism approximation of degree `p/q`: with `C` large enough for
/// zigzags of degree `p` and `q` onto `A_0`, the request `(id, h)` for the
/// degree-`q` zigzag `h` yields `t: A_N -> C` with `h ∘ t = f_0^N`, and the
/// degree-`p` zigzag `g` gives `g1 = g ∘ t`.
pub fn realize_degree(seq: &mut GenericSequence, p: usize, q: usize) -> Result<AutomorphismApprox, FraisseError> {
    if p == 0 || q == 0 {
        return Err(FraisseError::Inconsistent("p and q must be positive".into()));
    }
    let a = seq.objects[0].size();
    let c = p.max(q) * (a - 1) + 1;
    let h = zigzag(c, a, q)?;
    let g = zigzag(c, a, p)?;
    let id = Morphism::identity(a)?;
    let t = match seq.find_certificate(0, &id, &h) {
        Some(cert) => cert.clone(),
        None => {
            let weights = seq.weights.as_ref().map(|w| {
                let qw = Rational::integer(q as u64).expect("q is positive");
                (w[0], w[0] * qw)
            });
            seq.discharge(Request {
                level: 0,
                e: id,
                g: h,
                weights,
            })?
        }
    };
    Ok(AutomorphismApprox {
        i1: t.level,
        g1: compose(&g, &t.h)?,
    })
}

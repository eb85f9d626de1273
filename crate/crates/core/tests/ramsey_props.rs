mod common;

use std::collections::BTreeSet;

use knaster_core::fraisse::AnnotatedObject;
use knaster_core::lingraph::{compose, enumerate_epi, validate, EpiIter, Morphism, PointedLinearGraph};
use knaster_core::ramsey::{
    degree_coloring, find_monochromatic, increasing_injections, monotone_from_injection, ramsey_number, random_coloring,
    rho, to_injection, Coloring, IncreasingInjection, RamseyBound,
};
use knaster_core::Rational;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn g(n: usize) -> PointedLinearGraph {
    PointedLinearGraph::new(n).unwrap()
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Every k-subset of 0..n, via bit masks.
fn subsets_brute(k: usize, n: usize) -> BTreeSet<Vec<usize>> {
    (0u32..1 << n)
        .filter(|m| m.count_ones() as usize == k)
        .map(|m| (0..n).filter(|i| m >> i & 1 == 1).collect())
        .collect()
}

#[test]
fn injections_are_all_k_subsets() {
    for n in 0..=9 {
        for k in 0..=n {
            let ii = increasing_injections(k, n);
            assert_eq!(ii.len(), binomial(n, k), "|II([{k}],[{n}])|");
            let got: BTreeSet<Vec<usize>> = ii.iter().map(|p| p.values().to_vec()).collect();
            assert_eq!(got, subsets_brute(k, n));
        }
    }
}

#[test]
fn to_injection_is_injective_on_epi() {
    for c in 2..=8 {
        for a in 2..=c.min(4) {
            let images: Vec<Vec<usize>> = enumerate_epi(g(c), g(a))
                .iter()
                .filter(|f| f.is_non_decreasing())
                .map(|f| to_injection(f).values().to_vec())
                .collect();
            let distinct: BTreeSet<_> = images.iter().cloned().collect();
            assert_eq!(distinct.len(), images.len(), "Epi([{c}],[{a}])");
        }
    }
}

#[test]
fn to_injection_reads_change_positions() {
    for c in 2..=7 {
        for a in 2..=c {
            for f in enumerate_epi(g(c), g(a)) {
                let p = to_injection(&f);
                let v = f.values();
                let brute: Vec<usize> = (1..c).filter(|&j| v[j] != v[j - 1]).collect();
                assert_eq!(p.values(), &brute[..]);
                assert_eq!(p.n(), c);
            }
        }
    }
}

#[test]
fn monotone_round_trip() {
    for n in 2..=8 {
        for m in 2..=n {
            for p in increasing_injections(m, n) {
                match monotone_from_injection(&p, m, n) {
                    Ok(f) => {
                        assert!(f.is_non_decreasing());
                        for j in 1..m {
                            assert_eq!(f.fiber(j)[0], p.values()[j]);
                        }
                    }
                    Err(_) => assert_eq!(p.values()[1], 0),
                }
            }
        }
    }
}

proptest! {
    #[test]
    fn composition_of_injections(a in 2usize..5, extra_b in 0usize..3, extra_c in 0usize..4, i in 0usize..1000, j in 0usize..1000) {
        let b = a + extra_b;
        let c = b + extra_c;
        let hs: Vec<Morphism> = enumerate_epi(g(b), g(a)).into_iter().filter(|h| h.is_non_decreasing()).collect();
        let gs: Vec<Morphism> = enumerate_epi(g(c), g(b)).into_iter().filter(|h| h.is_non_decreasing()).collect();
        let h = &hs[i % hs.len()];
        let gg = &gs[j % gs.len()];
        let hg = compose(h, gg).unwrap();
        let pg = gg.change_positions();
        let expected: Vec<usize> = h.change_positions().iter().map(|&q| pg[q - 1]).collect();
        let got = to_injection(&hg);
        prop_assert_eq!(got.values(), &expected[..]);
    }

    #[test]
    fn injection_composition_is_function_composition(k in 0usize..4, extra_m in 0usize..3, extra_n in 0usize..3, i in 0usize..100, j in 0usize..100) {
        let m = k + extra_m;
        let n = m + extra_n;
        let outer = increasing_injections(m, n);
        let inner = increasing_injections(k, m);
        let p = &outer[i % outer.len()];
        let q = &inner[j % inner.len()];
        let pq = p.compose(q).unwrap();
        let brute: Vec<usize> = q.values().iter().map(|&x| p.values()[x]).collect();
        prop_assert_eq!(pq.values(), &brute[..]);
    }

    #[test]
    fn degree_coloring_adds_valuations(n in 1usize..5, i in 0usize..500, j in 0usize..500) {
        let fs = enumerate_epi(g(6), g(4));
        let hs = enumerate_epi(g(4), g(2));
        let f = &fs[i % fs.len()];
        let h = &hs[j % hs.len()];
        let hf = compose(h, f).unwrap();
        let deg = |m: &Morphism| common::brute_degrees(m.values(), m.cod_size()).unwrap()[0] as u64;
        let expected = (deg(h).trailing_zeros() + deg(f).trailing_zeros()) as usize % n;
        prop_assert_eq!(degree_coloring(&hf, n).unwrap(), expected);
        prop_assert_eq!(rho(deg(&hf)).unwrap(), deg(&hf).trailing_zeros());
    }
}

#[test]
fn rho_is_the_two_adic_valuation() {
    for k in 1u64..2000 {
        let mut v = 0;
        let mut x = k;
        while x % 2 == 0 {
            x /= 2;
            v += 1;
        }
        assert_eq!(rho(k).unwrap(), v);
    }
    assert!(rho(0).is_err());
}

/// Whether some d-coloring of k-subsets of [n] has no monochromatic m-subset.
fn has_bad_coloring_brute(k: usize, m: usize, d: usize, n: usize) -> bool {
    let ks: Vec<Vec<usize>> = subsets_brute(k, n).into_iter().collect();
    let ms: Vec<Vec<usize>> = subsets_brute(m, n).into_iter().collect();
    let total = d.pow(ks.len() as u32);
    (0..total).any(|mut code| {
        let mut color = std::collections::BTreeMap::new();
        for s in &ks {
            color.insert(s.clone(), code % d);
            code /= d;
        }
        ms.iter().all(|mset| {
            let colors: BTreeSet<usize> = subsets_brute(k, m)
                .iter()
                .map(|sub| color[&sub.iter().map(|&i| mset[i]).collect::<Vec<_>>()])
                .collect();
            colors.len() > 1
        })
    })
}

#[test]
fn small_ramsey_numbers_match_exhaustive_search() {
    for (k, m, d) in [(1, 2, 2), (1, 3, 2), (2, 2, 3), (1, 2, 3), (2, 3, 2), (0, 2, 2)] {
        let expected = (m..=6).find(|&n| !has_bad_coloring_brute(k, m, d, n));
        let got = ramsey_number(k, m, d, 6).unwrap();
        match expected {
            Some(n) => assert_eq!(got, RamseyBound::Exact(n), "R({k},{m};{d})"),
            None => assert_eq!(got, RamseyBound::Unknown(6)),
        }
    }
}

#[test]
fn monochromatic_witnesses_under_random_colorings() {
    let a = AnnotatedObject::new(3, Rational::one()).unwrap();
    let b = AnnotatedObject::new(4, Rational::one()).unwrap();
    let c = AnnotatedObject::new(18, Rational::one()).unwrap();
    for seed in 0..40 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let col = random_coloring(c.graph, a.graph, 1, 2, &mut rng).unwrap();
        let w = find_monochromatic(&c, &b, &a, &col).unwrap();
        let colors: BTreeSet<usize> = EpiIter::new(b.graph, a.graph, Some(1))
            .map(|h| col.color(&compose(&h, &w.g).unwrap()).unwrap())
            .collect();
        assert_eq!(colors.len(), 1, "seed {seed}");
        assert_eq!(colors.into_iter().next(), w.color);
    }
}

#[test]
fn colorings_round_trip_through_json() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let col = random_coloring(g(7), g(3), 1, 3, &mut rng).unwrap();
    let text = serde_json::to_string(&col).unwrap();
    let back: Coloring = serde_json::from_str(&text).unwrap();
    assert_eq!(back, col);
    let f = validate(7, 3, &[0, 1, 1, 1, 2, 2, 2]).unwrap();
    assert_eq!(back.color(&f), col.color(&f));
    assert!(IncreasingInjection::new(3, vec![2, 1]).is_err());
}

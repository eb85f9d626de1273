mod common;

use knaster_core::fraisse::{
    approx_degree, build_generic, build_generic_with_bound, fiber_distance, realize_degree, separation_extension,
    star_amalgamate, validate_star, Category, GenericSequence,
};
use knaster_core::lingraph::{compose, enumerate_epi, validate, Morphism, PointedLinearGraph};
use knaster_core::Rational;
use proptest::prelude::*;

fn m(cod: usize, v: &[usize]) -> Morphism {
    validate(v.len(), cod, v).unwrap()
}

fn r(n: u64, d: u64) -> Rational {
    Rational::new(n, d).unwrap()
}

/// `f_n^N` as the composite of the bonds, built up independently of the library.
fn composite_brute(seq: &GenericSequence, n: usize, big: usize) -> Vec<usize> {
    let mut values: Vec<usize> = (0..seq.objects[big].size()).collect();
    for k in (n..big).rev() {
        values = values.iter().map(|&x| seq.bonds[k].values()[x]).collect();
    }
    values
}

fn check_tower_brute(seq: &GenericSequence) {
    for (k, f) in seq.bonds.iter().enumerate() {
        assert_eq!(f.dom_size(), seq.objects[k + 1].size());
        assert_eq!(f.cod_size(), seq.objects[k].size());
        assert!(common::is_morphism_linear(f.values(), f.cod_size()), "bond {k}");
        if f.dom_size() <= 14 {
            assert!(common::is_morphism_brute(f.values(), f.cod_size()), "bond {k}");
        }
    }
    for c in &seq.certificates {
        let r = &c.request;
        let down = composite_brute(seq, r.level, c.level);
        let left: Vec<usize> = c.h.values().iter().map(|&x| r.g.values()[x]).collect();
        let right: Vec<usize> = down.iter().map(|&x| r.e.values()[x]).collect();
        assert_eq!(left, right, "certificate at level {}", r.level);
    }
    if let Some(w) = &seq.weights {
        for (k, f) in seq.bonds.iter().enumerate() {
            let deg = common::degree_oracle(f.values(), f.cod_size());
            assert_eq!(w[k + 1], w[k] * Rational::integer(deg as u64).unwrap());
        }
    }
}

#[test]
fn built_towers_pass_the_brute_check() {
    for cat in [Category::K, Category::Kstar] {
        for seed in 0..6 {
            for budget in 1..=7 {
                let seq = build_generic(cat, budget, seed).unwrap();
                seq.verify().unwrap();
                check_tower_brute(&seq);
                assert!(seq.len() <= budget);
            }
        }
    }
}

#[test]
fn larger_budgets_extend_smaller_ones() {
    for seed in 0..4 {
        let small = build_generic_with_bound(Category::K, 4, seed, 8).unwrap();
        let large = build_generic_with_bound(Category::K, 8, seed, 8).unwrap();
        assert_eq!(small.objects[..], large.objects[..small.len()]);
        assert_eq!(small.bonds[..], large.bonds[..small.bonds.len()]);
        assert_eq!(small.certificates[..], large.certificates[..small.certificates.len()]);
    }
}

#[test]
fn fold_request_over_the_base_is_certified() {
    let target = m(2, &[0, 1, 0]);
    let found = (2..=8).any(|budget| {
        let seq = build_generic(Category::K, budget, 0).unwrap();
        seq.certificates
            .iter()
            .any(|c| c.request.level == 0 && c.request.e.is_identity() && c.request.g == target)
    });
    assert!(found);
}

#[test]
fn forget_keeps_every_certificate() {
    for seed in 0..5 {
        let seq = build_generic(Category::Kstar, 6, seed).unwrap();
        let plain = seq.forget();
        assert_eq!(plain.category, Category::K);
        assert!(plain.weights.is_none());
        assert_eq!(plain.bonds, seq.bonds);
        assert_eq!(plain.certificates.len(), seq.certificates.len());
        for (a, b) in plain.certificates.iter().zip(&seq.certificates) {
            assert_eq!((&a.h, a.level, &a.request.e, &a.request.g), (&b.h, b.level, &b.request.e, &b.request.g));
        }
        plain.verify().unwrap();
    }
}

#[test]
fn towers_round_trip_through_json() {
    let seq = build_generic(Category::Kstar, 5, 2).unwrap();
    let text = serde_json::to_string(&seq).unwrap();
    let back: GenericSequence = serde_json::from_str(&text).unwrap();
    assert_eq!(back, seq);
    back.verify().unwrap();
}

#[test]
fn separation_twice() {
    for seed in 0..6 {
        let mut seq = build_generic(Category::K, 3, seed).unwrap();
        seq.budget += 4;
        let level = seq.top();
        let size = seq.objects[level].size();
        let first = separation_extension(&mut seq, level, 0, size - 1).unwrap();
        assert!(first.distance > 2);
        let top = seq.top();
        let top_size = seq.objects[top].size();
        let second = separation_extension(&mut seq, top, 0, top_size - 1).unwrap();
        assert!(second.distance > 2);
        seq.verify().unwrap();
        check_tower_brute(&seq);
        let down = composite_brute(&seq, level, seq.top());
        let f = validate(down.len(), seq.objects[level].size(), &down).unwrap();
        assert!(fiber_distance(&f, 0, size - 1).unwrap() > 2);
    }
}

#[test]
fn separation_rejects_adjacent_vertices() {
    let mut seq = build_generic(Category::K, 3, 0).unwrap();
    assert!(separation_extension(&mut seq, 0, 0, 1).is_err());
    assert!(separation_extension(&mut seq, 9, 0, 2).is_err());
}

#[test]
fn realized_degrees_are_exact() {
    for p in 1..=5 {
        for q in 1..=5 {
            let mut seq = GenericSequence::trivial(Category::K, 4, 0).unwrap();
            let a = realize_degree(&mut seq, p, q).unwrap();
            let brute_g1 = common::degree_oracle(a.g1.values(), a.g1.cod_size());
            let down = composite_brute(&seq, 0, a.i1);
            let brute_f = common::degree_oracle(&down, seq.objects[0].size());
            assert_eq!(r(brute_g1 as u64, brute_f as u64), r(p as u64, q as u64), "{p}/{q}");
            assert_eq!(approx_degree(&a, &seq).unwrap(), r(p as u64, q as u64));
            check_tower_brute(&seq);
        }
    }
}

#[test]
fn star_morphisms_respect_weights() {
    let f = m(2, &[0, 1, 0]);
    assert!(validate_star(&f, r(2, 1), r(1, 1)).is_ok());
    assert!(validate_star(&f, r(3, 1), r(1, 1)).is_err());
    for a in enumerate_epi(PointedLinearGraph::new(5).unwrap(), PointedLinearGraph::new(3).unwrap()) {
        for b in enumerate_epi(PointedLinearGraph::new(4).unwrap(), PointedLinearGraph::new(3).unwrap()) {
            let w = r(1, 2);
            let fa = validate_star(&a, w * r(a.degree() as u64, 1), w).unwrap();
            let fb = validate_star(&b, w * r(b.degree() as u64, 1), w).unwrap();
            let (d, fp, gp) = star_amalgamate(&fa, &fb).unwrap();
            let left = compose(fa.base(), fp.base()).unwrap();
            let right = compose(fb.base(), gp.base()).unwrap();
            assert_eq!(left, right);
            assert_eq!(fp.dom(), d);
            assert_eq!(gp.dom(), d);
            assert_eq!(d.weight, w * r((left.degree()) as u64, 1));
        }
    }
}

proptest! {
    #[test]
    fn seeds_determine_towers(seed in any::<u64>(), budget in 1usize..6) {
        let a = build_generic(Category::Kstar, budget, seed).unwrap();
        let b = build_generic(Category::Kstar, budget, seed).unwrap();
        prop_assert_eq!(&a, &b);
        check_tower_brute(&a);
    }
}

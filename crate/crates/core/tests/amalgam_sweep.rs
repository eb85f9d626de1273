use knaster_core::amalgam::{
    amalgamate, amalgamate_parallel, normalize_condition_star, pad, signed_slope, slope_split,
    stretch, Piece,
};
use knaster_core::lingraph::{compose, enumerate_epi, sample_epi, PointedLinearGraph};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn g(n: usize) -> PointedLinearGraph {
    PointedLinearGraph::new(n).unwrap()
}

#[test]
fn amalgamation_commutes_for_all_small_pairs() {
    let mut pairs = 0;
    for k in 2..=4 {
        let maps: Vec<_> = (k..=6).flat_map(|m| enumerate_epi(g(m), g(k))).collect();
        for f in &maps {
            for h in &maps {
                let a = amalgamate(f, h).unwrap();
                assert_eq!(compose(f, &a.f_prime).unwrap(), compose(h, &a.g_prime).unwrap());
                assert_eq!(a.f_prime.degree(), h.degree());
                assert_eq!(a.g_prime.degree(), f.degree());
                assert!(a.plan.check_shape(f.degree(), h.degree()));
                pairs += 1;
            }
        }
    }
    assert!(pairs > 0);
}

#[test]
fn normalized_maps_always_split() {
    for n in 2..=8 {
        for k in 2..=4 {
            for f in enumerate_epi(g(n), g(k)) {
                let (_, fs) = normalize_condition_star(&f).unwrap();
                let split = slope_split(&fs).unwrap();
                assert_eq!(split.len(), f.degree());
                let covered: usize = split.intervals.iter().map(|(l, r)| r - l + 1).sum();
                assert_eq!(covered, fs.dom_size());
                for (j, p) in split.pieces.iter().enumerate() {
                    assert_eq!(p.slope, signed_slope(j as i64 + 1));
                }
            }
        }
    }
}

#[test]
fn pad_and_stretch_hit_target_strings() {
    for n in 2..=6 {
        for k in 2..=n {
            for f in enumerate_epi(g(n), g(k)) {
                for i in 0..n {
                    for j in 0..3 {
                        let phi = pad(&f, i, j).unwrap();
                        let mut want = f.values()[..i].to_vec();
                        want.extend(std::iter::repeat_n(f.values()[i], j + 1));
                        want.extend_from_slice(&f.values()[i + 1..]);
                        assert_eq!(compose(&f, &phi).unwrap().values(), &want[..]);
                        assert!(phi.is_non_decreasing() && phi.degree() == 1);
                    }
                }
            }
        }
    }
}

proptest! {
    #[test]
    fn stretch_repeats_each_value(seed in any::<u64>(), mults in prop::collection::vec(1usize..4, 7)) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = sample_epi(g(7), g(3), &mut rng).unwrap();
        let (phi, s) = stretch(&f, &mults).unwrap();
        let want: Vec<usize> = f.values().iter().zip(&mults)
            .flat_map(|(&v, &m)| std::iter::repeat_n(v, m)).collect();
        prop_assert_eq!(s.values(), &want[..]);
        prop_assert_eq!(phi.degree(), 1);
    }

    #[test]
    fn parallel_amalgam_commutes(a in prop::collection::vec(1usize..5, 4), b in prop::collection::vec(1usize..5, 4), dec in any::<bool>()) {
        let mk = |m: &[usize]| {
            let mut v: Vec<usize> = m.iter().enumerate().flat_map(|(t, &c)| std::iter::repeat_n(t, c)).collect();
            if dec { v.iter_mut().for_each(|x| *x = 3 - *x); }
            Piece::new(4, v).unwrap()
        };
        let (f, h) = (mk(&a), mk(&b));
        let (ft, ht) = amalgamate_parallel(&f, &h).unwrap();
        prop_assert_eq!(f.precompose(&ft), h.precompose(&ht));
        prop_assert!(ft.is_non_decreasing() && ft.degree() == 1);
        prop_assert!(ht.is_non_decreasing() && ht.degree() == 1);
    }

    #[test]
    fn larger_amalgams_commute(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = sample_epi(g(14), g(4), &mut rng).unwrap();
        let h = sample_epi(g(11), g(4), &mut rng).unwrap();
        let a = amalgamate(&f, &h).unwrap();
        prop_assert!(a.verify());
    }
}

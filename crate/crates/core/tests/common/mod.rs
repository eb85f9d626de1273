//! Independent brute-force oracles shared by the integration tests.
#![allow(dead_code)]

/// Literal check of the morphism definition: a graph epimorphism fixing the
/// zero vertex for which SOME choice of turning indices works. Every subset of
/// interior indices is tried.
pub fn is_morphism_brute(values: &[usize], cod: usize) -> bool {
    brute_degrees(values, cod).is_some()
}

/// All `k` for which some turning-index choice witnesses the definition.
pub fn brute_degrees(values: &[usize], cod: usize) -> Option<Vec<usize>> {
    let n = values.len();
    if n < 2 || cod < 2 || values[0] != 0 || values.iter().any(|&v| v >= cod) {
        return None;
    }
    if values.windows(2).any(|w| w[0].abs_diff(w[1]) > 1) {
        return None;
    }
    for v in 0..cod {
        if !values.contains(&v) {
            return None;
        }
    }
    for e in 0..cod - 1 {
        if !values
            .windows(2)
            .any(|w| w[0].min(w[1]) == e && w[0].max(w[1]) == e + 1)
        {
            return None;
        }
    }
    let interior = n.saturating_sub(2);
    let mut degrees = Vec::new();
    for mask in 0u64..(1u64 << interior) {
        let mut idx = vec![0];
        for b in 0..interior {
            if mask >> b & 1 == 1 {
                idx.push(b + 1);
            }
        }
        idx.push(n - 1);
        let ok_values = idx.iter().enumerate().all(|(j, &i)| {
            values[i] == if j % 2 == 0 { 0 } else { cod - 1 }
        });
        let ok_mono = idx.windows(2).all(|w| {
            let s = &values[w[0]..=w[1]];
            s.windows(2).all(|p| p[0] <= p[1]) || s.windows(2).all(|p| p[0] >= p[1])
        });
        if ok_values && ok_mono {
            let k = idx.len() - 1;
            if !degrees.contains(&k) {
                degrees.push(k);
            }
        }
    }
    if degrees.is_empty() {
        None
    } else {
        Some(degrees)
    }
}

/// Every string in `[cod]^n` starting with 0, in lexicographic order.
pub fn all_strings(n: usize, cod: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = vec![0usize; n];
    loop {
        out.push(cur.clone());
        let mut i = n - 1;
        loop {
            if i == 0 {
                return out;
            }
            cur[i] += 1;
            if cur[i] < cod {
                break;
            }
            cur[i] = 0;
            i -= 1;
        }
    }
}

/// Brute-force `Epi([[n]], [[cod]])` as value strings, lexicographic.
pub fn epi_brute(n: usize, cod: usize) -> Vec<Vec<usize>> {
    all_strings(n, cod)
        .into_iter()
        .filter(|s| is_morphism_brute(s, cod))
        .collect()
}

/// Degree as the number of alternations between the two endpoints, for domains too large to brute force.
#[allow(dead_code)]
pub fn crossing_degree(values: &[usize], cod: usize) -> usize {
    let mut last = None;
    let mut count = 0;
    for &v in values {
        let end = if v == 0 {
            Some(0)
        } else if v == cod - 1 {
            Some(1)
        } else {
            None
        };
        if let Some(e) = end {
            if last.is_some_and(|l| l != e) {
                count += 1;
            }
            last = Some(e);
        }
    }
    count
}

/// Linear-time check: after merging repeated values the walk starts at 0,
/// moves by one, reverses only at the end vertices, and stops at one.
pub fn is_morphism_linear(values: &[usize], cod: usize) -> bool {
    if values.first() != Some(&0) || cod < 2 || values.iter().any(|&v| v >= cod) {
        return false;
    }
    let mut walk: Vec<usize> = values.to_vec();
    walk.dedup();
    if walk.windows(2).any(|w| w[0].abs_diff(w[1]) != 1) {
        return false;
    }
    let turns_ok = walk
        .windows(3)
        .all(|w| (w[0] < w[1]) == (w[1] < w[2]) || w[1] == 0 || w[1] == cod - 1);
    let last = *walk.last().unwrap();
    turns_ok && (last == 0 || last == cod - 1) && walk.contains(&(cod - 1))
}

/// Degree from whichever oracle is feasible for the domain size.
pub fn degree_oracle(values: &[usize], cod: usize) -> usize {
    if values.len() <= 14 {
        brute_degrees(values, cod).expect("valid morphism")[0]
    } else {
        assert!(is_morphism_linear(values, cod));
        crossing_degree(values, cod)
    }
}

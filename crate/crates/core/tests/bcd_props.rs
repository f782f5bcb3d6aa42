#![allow(clippy::needless_range_loop)]

mod common;

use std::collections::{BTreeMap, BTreeSet};

use cglab::bcd::BcdConfig;
use cglab::growth::count_growth;
use cglab::{Engine, GroupModel, GrowthKind, Mode, Word};
use common::{fp, free};
use num_traits::ToPrimitive;

/// Every sequence of length `n` over `0..width`.
fn index_words(width: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out.into_iter().flat_map(|w| (0..width).map(move |x| [&w[..], &[x]].concat())).collect();
    }
    out
}

fn binomial(n: usize, k: usize) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i + 1) as u64)
}

fn rotate<T: Clone>(w: &[T], r: usize) -> Vec<T> {
    [&w[r..], &w[..r]].concat()
}

#[test]
fn accepted_pairs_are_closed_under_simultaneous_shift() {
    let g = GroupModel::free(2).unwrap();
    for k in 1..=2 {
        let cfg = BcdConfig::new(g.clone(), k).unwrap();
        let m = cfg.build_bcd_automaton();
        let pa = cfg.padded();
        let mut accepted = 0;
        for n in 1..=4 {
            let words = index_words(5, n);
            for u in &words {
                for v in &words {
                    if !m.accepts(&pa.zip(u, v).unwrap()) {
                        continue;
                    }
                    accepted += 1;
                    for r in 1..n {
                        let (u2, v2) = (rotate(u, r), rotate(v, r));
                        assert!(m.accepts(&pa.zip(&u2, &v2).unwrap()), "K={k} {} {} shift {r}", pa.format(u), pa.format(v));
                    }
                }
            }
        }
        assert!(accepted > 1000);
    }
}

#[test]
fn s_counts_padded_placements() {
    let g = GroupModel::free(2).unwrap();
    let cfg = BcdConfig::new(g, 1).unwrap();
    let counts = cfg.build_s().count_per_length(6);
    let cr: Vec<u64> = (0..=6)
        .map(|j| free::sphere(2, j).iter().filter(|w| free::cyclic_reduce(w).len() == j).count() as u64)
        .collect();
    for n in 0..=6 {
        let want: u64 = (0..=n).map(|j| binomial(n, j) * cr[j]).sum();
        assert_eq!(counts[n].to_u64(), Some(want), "free:2 n = {n}");
    }

    let o = fp::Orders([2, 3]);
    let cfg = BcdConfig::new(GroupModel::free_product(2, 3).unwrap(), 1).unwrap();
    let counts = cfg.build_s().count_per_length(6);
    let cr: Vec<u64> = (0..=6).map(|j| o.sphere(j).iter().filter(|w| o.cyclic_reduce(w).len() == j).count() as u64).collect();
    for n in 0..=6 {
        let want: u64 = (0..=n).map(|j| binomial(n, j) * cr[j]).sum();
        assert_eq!(counts[n].to_u64(), Some(want), "zm*zn:2,3 n = {n}");
    }
}

/// Cyclically reduced words of length <= `n`, with the library's word.
fn free_conj_geodesics(g: &GroupModel, n: usize) -> Vec<(free::W, Word)> {
    (0..=n)
        .flat_map(|len| free::sphere(2, len).into_iter().filter(move |w| free::cyclic_reduce(w).len() == len))
        .map(|w| {
            let word = g.parse_word(&free::show(&w)).unwrap();
            (w, word)
        })
        .collect()
}

#[test]
fn delta_preserves_classes_and_separates_them() {
    let g = GroupModel::free(2).unwrap();
    let cfg = BcdConfig::new(g.clone(), 2).unwrap();
    let dm = cfg.build_delta();
    // image -> classes of the inputs reaching it
    let mut preimage: BTreeMap<String, BTreeSet<free::W>> = BTreeMap::new();
    for (w, word) in free_conj_geodesics(&g, 6) {
        let out = dm.apply(&word).unwrap();
        let shown = g.format_word(&out.word);
        assert_eq!(out.word.len(), w.len(), "{}", free::show(&w));
        let back: free::W = shown.chars().map(|c| if c.is_ascii_lowercase() { (c as u8 - b'a' + 1) as i8 } else { -((c as u8 - b'A' + 1) as i8) }).collect();
        assert!(free::is_conjugate(&w, &back), "{} -> {shown}", free::show(&w));
        // the conjugator witnesses g U = V g
        let lhs = g.multiply(&out.conjugator, &word);
        assert_eq!(lhs, g.multiply(&out.word, &out.conjugator), "{}", free::show(&w));
        preimage.entry(shown).or_default().insert(free::conj_key(&w));
    }
    // pairwise non-conjugate inputs never share an image
    assert!(preimage.values().all(|classes| classes.len() == 1));
    let conj = count_growth(&g, GrowthKind::Conj, Mode::Cumulative, 6, Engine::Formula).unwrap();
    assert!(preimage.len() as u64 >= conj.coeffs[6].to_u64().unwrap());
}

#[test]
fn delta_is_least_partner_at_k1() {
    let g = GroupModel::free(2).unwrap();
    let cfg = BcdConfig::new(g.clone(), 1).unwrap();
    let dm = cfg.build_delta();
    let ball = free::ball(2, 1);
    for (w, word) in free_conj_geodesics(&g, 4) {
        let u: Vec<i8> = w.clone();
        let best = common::padded_words(w.len())
            .into_iter()
            .filter(|v| {
                let s: free::W = v.iter().copied().filter(|&x| x != 0).collect();
                free::reduce(&s) == s && free::cyclic_reduce(&s) == s
            })
            .filter(|v| common::bcd_oracle(&ball, 1, &u, v).is_some())
            .map(|v| v.iter().map(|x| common::PADDED.iter().position(|p| p == x).unwrap()).collect::<Vec<_>>())
            .min()
            .unwrap();
        assert_eq!(dm.apply(&word).unwrap().padded, best, "{}", free::show(&w));
    }
}

#[test]
fn delta_on_free_product() {
    let g = GroupModel::free_product(2, 3).unwrap();
    let o = fp::Orders([2, 3]);
    let cfg = BcdConfig::new(g.clone(), 1).unwrap();
    let dm = cfg.build_delta();
    let pa = cfg.padded();
    let mut preimage: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
    for n in 0..=6 {
        let candidates = index_words(pa.pad() + 1, n);
        for w in o.sphere(n).into_iter().filter(|w| o.cyclic_reduce(w).len() == n) {
            let word = g.parse_word(&o.show(&w)).unwrap();
            let out = dm.apply(&word).unwrap();
            let u = pa.pad_to(&word, n);
            let best = candidates
                .iter()
                .filter(|v| g.is_conj_geodesic(&pa.unpad(v)) && cfg.bcd_pair_check(&u, v).unwrap())
                .min()
                .unwrap();
            assert_eq!(&out.padded, best, "{}", o.show(&w));
            assert_eq!(g.conj_key(&out.word), g.conj_key(&word));
            preimage.entry(g.format_word(&out.word)).or_default().insert(format!("{:?}", o.conj_key(&w)));
        }
    }
    assert!(preimage.values().all(|classes| classes.len() == 1));
}

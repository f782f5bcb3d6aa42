//! Brute-force reference implementations used as oracles by the integration
//! tests. Nothing here calls into the library's reduction or conjugacy code.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

/// Free group words as signed generator indices: `g` or `-g`, `g >= 1`.
pub mod free {
    pub type W = Vec<i8>;

    pub fn reduce(w: &[i8]) -> W {
        let mut out: W = Vec::new();
        for &x in w {
            if out.last() == Some(&-x) {
                out.pop();
            } else {
                out.push(x);
            }
        }
        out
    }

    pub fn inverse(w: &[i8]) -> W {
        w.iter().rev().map(|x| -x).collect()
    }

    pub fn mul(u: &[i8], v: &[i8]) -> W {
        reduce(&[u, v].concat())
    }

    pub fn cyclic_reduce(w: &[i8]) -> W {
        let mut w = reduce(w);
        while w.len() >= 2 && w[0] == -w[w.len() - 1] {
            w = w[1..w.len() - 1].to_vec();
        }
        w
    }

    pub fn rotations(w: &[i8]) -> Vec<W> {
        (0..w.len().max(1)).map(|i| [&w[i.min(w.len())..], &w[..i.min(w.len())]].concat()).collect()
    }

    /// Letter order a < A < b < B < ...
    pub fn rank(x: i8) -> i32 {
        2 * (x.unsigned_abs() as i32 - 1) + i32::from(x < 0)
    }

    pub fn cmp(u: &[i8], v: &[i8]) -> std::cmp::Ordering {
        u.iter().map(|&x| rank(x)).cmp(v.iter().map(|&x| rank(x)))
    }

    pub fn min_rotation(w: &[i8]) -> W {
        rotations(w).into_iter().min_by(|a, b| cmp(a, b)).unwrap_or_default()
    }

    pub fn conj_key(w: &[i8]) -> W {
        min_rotation(&cyclic_reduce(w))
    }

    pub fn is_conjugate(u: &[i8], v: &[i8]) -> bool {
        conj_key(u) == conj_key(v)
    }

    /// Shortest `r` with `w = r^k` as words.
    pub fn word_root(w: &[i8]) -> W {
        let n = w.len();
        (1..=n)
            .find(|&p| n.is_multiple_of(p) && (0..n).all(|i| w[i] == w[i % p]))
            .map_or_else(Vec::new, |p| w[..p].to_vec())
    }

    /// Every reduced word of length exactly `n` over `k` generators.
    pub fn sphere(k: i8, n: usize) -> Vec<W> {
        let letters: Vec<i8> = (1..=k).flat_map(|g| [g, -g]).collect();
        let mut layer: Vec<W> = vec![vec![]];
        for _ in 0..n {
            let mut next = Vec::new();
            for w in &layer {
                for &x in &letters {
                    if w.last() != Some(&-x) {
                        let mut v = w.clone();
                        v.push(x);
                        next.push(v);
                    }
                }
            }
            layer = next;
        }
        layer
    }

    pub fn ball(k: i8, n: usize) -> Vec<W> {
        (0..=n).flat_map(|i| sphere(k, i)).collect()
    }

    pub fn show(w: &[i8]) -> String {
        w.iter()
            .map(|&x| {
                let c = (b'a' + x.unsigned_abs() - 1) as char;
                if x < 0 {
                    c.to_ascii_uppercase()
                } else {
                    c
                }
            })
            .collect()
    }
}

/// Free products `Z/m * Z/n` as alternating syllable sequences `(factor, exponent)`.
pub mod fp {
    pub type S = (u8, u32);
    pub type W = Vec<S>;

    #[derive(Clone, Copy)]
    pub struct Orders(pub [u32; 2]);

    impl Orders {
        pub fn push(&self, w: &mut W, (f, e): S) {
            let o = self.0[f as usize];
            match w.last_mut() {
                Some(last) if last.0 == f => {
                    let e2 = (last.1 + e) % o;
                    if e2 == 0 {
                        w.pop();
                    } else {
                        last.1 = e2;
                    }
                }
                _ => w.push((f, e % o)),
            }
        }

        pub fn mul(&self, u: &[S], v: &[S]) -> W {
            let mut w = u.to_vec();
            for &s in v {
                self.push(&mut w, s);
            }
            w
        }

        pub fn inverse(&self, w: &[S]) -> W {
            w.iter().rev().map(|&(f, e)| (f, self.0[f as usize] - e)).collect()
        }

        pub fn cyclic_reduce(&self, w: &[S]) -> W {
            let mut w = w.to_vec();
            while w.len() >= 2 && w[0].0 == w[w.len() - 1].0 {
                let first = w.remove(0);
                self.push(&mut w, first);
            }
            w
        }

        pub fn conj_key(&self, w: &[S]) -> W {
            let c = self.cyclic_reduce(w);
            let n = c.len();
            (0..n.max(1)).map(|i| [&c[i.min(n)..], &c[..i.min(n)]].concat()).min().unwrap_or_default()
        }

        pub fn finite_order(&self, w: &[S]) -> bool {
            self.cyclic_reduce(w).len() <= 1
        }

        /// All elements of syllable length exactly `n`.
        pub fn sphere(&self, n: usize) -> Vec<W> {
            let mut layer: Vec<W> = vec![vec![]];
            for _ in 0..n {
                let mut next = Vec::new();
                for w in &layer {
                    for f in 0..2u8 {
                        if w.last().map(|s| s.0) == Some(f) {
                            continue;
                        }
                        for e in 1..self.0[f as usize] {
                            let mut v = w.clone();
                            v.push((f, e));
                            next.push(v);
                        }
                    }
                }
                layer = next;
            }
            layer
        }

        pub fn ball(&self, n: usize) -> Vec<W> {
            (0..=n).flat_map(|i| self.sphere(i)).collect()
        }

        /// Letter names: `a`, `A`/`a2`..., then `b`, `B`/`b2`...; comma
        /// separated when some name is longer than one character.
        pub fn show(&self, w: &[S]) -> String {
            let names: Vec<String> = w
                .iter()
                .map(|&(f, e)| {
                    let base = if f == 0 { 'a' } else { 'b' };
                    let o = self.0[f as usize];
                    if e == 1 {
                        base.to_string()
                    } else if e == o - 1 {
                        base.to_ascii_uppercase().to_string()
                    } else {
                        format!("{base}{e}")
                    }
                })
                .collect();
            if names.iter().all(|n| n.len() == 1) {
                names.concat()
            } else {
                names.join(",")
            }
        }
    }
}

/// The four counting functions, cumulative, computed from a list of all
/// elements of the ball of radius `n_max` with their lengths.
#[derive(Debug, Default)]
pub struct Census {
    pub ball: Vec<u64>,
    pub conj: Vec<u64>,
    pub pconj: Vec<u64>,
    pub comm: Vec<u64>,
}

/// Keys per element: (length, conjugacy key, primitive?, commensurability key).
fn cumulate<K: Ord + Clone>(n_max: usize, items: impl Iterator<Item = (usize, K, bool, Option<K>)>) -> Census {
    let mut first_conj: BTreeMap<K, usize> = BTreeMap::new();
    let mut first_pconj: BTreeMap<K, usize> = BTreeMap::new();
    let mut first_comm: BTreeMap<Option<K>, usize> = BTreeMap::new();
    let mut ball = vec![0u64; n_max + 1];
    for (len, ck, prim, mk) in items {
        ball[len] += 1;
        let e = first_conj.entry(ck.clone()).or_insert(len);
        *e = (*e).min(len);
        if prim {
            let e = first_pconj.entry(ck).or_insert(len);
            *e = (*e).min(len);
        }
        let e = first_comm.entry(mk).or_insert(len);
        *e = (*e).min(len);
    }
    let cum = |hist: Vec<usize>| -> Vec<u64> {
        (0..=n_max).map(|n| hist.iter().filter(|&&l| l <= n).count() as u64).collect()
    };
    let mut b = 0;
    Census {
        ball: ball.iter().map(|c| {
            b += c;
            b
        }).collect(),
        conj: cum(first_conj.into_values().collect()),
        pconj: cum(first_pconj.into_values().collect()),
        comm: cum(first_comm.into_values().collect()),
    }
}

pub fn free_census(k: i8, n_max: usize) -> Census {
    cumulate(
        n_max,
        free::ball(k, n_max).into_iter().map(|w| {
            let c = free::conj_key(&w);
            if c.is_empty() {
                return (w.len(), c, false, None);
            }
            let cyc = free::cyclic_reduce(&w);
            let root = free::word_root(&free::min_rotation(&cyc));
            let prim = root.len() == cyc.len();
            let a = free::conj_key(&root);
            let b = free::conj_key(&free::inverse(&root));
            let m = if free::cmp(&a, &b).is_le() { a } else { b };
            (w.len(), c, prim, Some(m))
        }),
    )
}

pub fn fp_census(orders: [u32; 2], n_max: usize) -> Census {
    let o = fp::Orders(orders);
    cumulate(
        n_max,
        o.ball(n_max).into_iter().map(|w| {
            let c = o.conj_key(&w);
            if o.finite_order(&w) {
                return (w.len(), c, false, None);
            }
            let n = c.len();
            let p = (1..=n).find(|&p| n.is_multiple_of(p) && (0..n).all(|i| c[i] == c[i % p])).unwrap();
            let root = c[..p].to_vec();
            let a = o.conj_key(&root);
            let b = o.conj_key(&o.inverse(&root));
            (w.len(), c, p == n, Some(a.min(b)))
        }),
    )
}

pub fn strict(cum: &[u64]) -> Vec<u64> {
    (0..cum.len()).map(|i| cum[i] - if i == 0 { 0 } else { cum[i - 1] }).collect()
}

/// Direct synchronous-conjugator check in a free group. Padded words use
/// `0` for the padding symbol.
/// `ball` must be the radius-`k` ball of the rank-2 free group.
pub fn bcd_oracle(ball: &[free::W], k: usize, u: &[i8], v: &[i8]) -> Option<free::W> {
    let strip = |w: &[i8]| -> free::W { w.iter().copied().filter(|&x| x != 0).collect() };
    for g in ball.iter().cloned() {
        let lhs = free::mul(&g, &strip(u));
        let rhs = free::mul(&strip(v), &g);
        if lhs != rhs {
            continue;
        }
        let ok = (0..=u.len()).all(|j| {
            let uj = strip(&u[..j]);
            let vj = strip(&v[..j]);
            let d = free::mul(&free::inverse(&vj), &free::mul(&g, &uj));
            d.len() <= k
        });
        if ok {
            return Some(g);
        }
    }
    None
}

/// Padded symbol order a < A < b < B < $ for rank 2.
pub const PADDED: [i8; 5] = [1, -1, 2, -2, 0];

pub fn padded_words(n: usize) -> Vec<Vec<i8>> {
    let mut out: Vec<Vec<i8>> = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|w| {
                PADDED.iter().map(move |&x| {
                    let mut v = w.clone();
                    v.push(x);
                    v
                })
            })
            .collect();
    }
    out
}

pub fn padded_show(w: &[i8]) -> String {
    w.iter().map(|&x| if x == 0 { "$".to_string() } else { free::show(&[x]) }).collect()
}

/// Sorted distinct values, for set comparisons in assertions.
pub fn distinct<T: Ord + Clone>(v: &[T]) -> BTreeSet<T> {
    v.iter().cloned().collect()
}

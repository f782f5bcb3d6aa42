//! Computable group models: free groups `F_k` and free products `Z/m * Z/n`.
//!
//! For the free product every nontrivial factor element is its own generator,
//! so geodesic length equals syllable length and geodesic words are exactly the
//! words whose adjacent letters lie in different factors.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};
use crate::fsa::{explore, Dfa, Symbols};
use crate::word::{Alphabet, Letter, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GroupKind {
    Free { rank: usize },
    FreeProduct { orders: [u32; 2] },
}

/// Limits on exhaustive enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumerationCaps {
    /// Largest sphere `enumerate_sphere` will stream.
    pub sphere_budget: u64,
    /// Largest ball the enumerating growth engine will walk.
    pub ball_budget: u64,
    pub max_length: usize,
}

impl Default for EnumerationCaps {
    fn default() -> Self {
        // free:2 -> sphere cap 14, growth-enumeration cap 12
        EnumerationCaps {
            sphere_budget: 10_000_000,
            ball_budget: 2_000_000,
            max_length: 64,
        }
    }
}

/// Canonical conjugacy-class representative.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ConjKey(pub Word);

/// Commensurability class tag. All finite-order elements share `Torsion`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CommKey {
    Torsion,
    Class(ConjKey),
}

#[derive(Clone, Debug)]
pub struct GroupModel {
    kind: GroupKind,
    alphabet: Alphabet,
    /// (factor, exponent) per letter; free products only.
    syllables: Vec<(u8, u32)>,
    caps: EnumerationCaps,
}

impl PartialEq for GroupModel {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

impl FromStr for GroupModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::BadDescriptor(s.to_string());
        let (family, args) = s.trim().split_once(':').ok_or_else(bad)?;
        match family {
            "free" => {
                let rank: usize = args.trim().parse().map_err(|_| bad())?;
                GroupModel::free(rank).map_err(|_| bad())
            }
            "zm*zn" => {
                let (m, n) = args.split_once(',').ok_or_else(bad)?;
                let m: u32 = m.trim().parse().map_err(|_| bad())?;
                let n: u32 = n.trim().parse().map_err(|_| bad())?;
                GroupModel::free_product(m, n).map_err(|_| bad())
            }
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for GroupModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            GroupKind::Free { rank } => write!(f, "free:{rank}"),
            GroupKind::FreeProduct { orders: [m, n] } => write!(f, "zm*zn:{m},{n}"),
        }
    }
}

impl GroupModel {
    pub fn free(rank: usize) -> Result<Self> {
        Ok(GroupModel {
            kind: GroupKind::Free { rank },
            alphabet: Alphabet::free(rank)?,
            syllables: Vec::new(),
            caps: EnumerationCaps::default(),
        })
    }

    /// `Z/m * Z/n` with letters `a, a2, .., A` then `b, b2, .., B`
    /// (`A = a^(m-1)`, `B = b^(n-1)`).
    pub fn free_product(m: u32, n: u32) -> Result<Self> {
        if m < 2 || n < 2 || (m + n - 2) as usize > u8::MAX as usize {
            return Err(Error::InvalidAlphabet(format!("unsupported orders {m}, {n}")));
        }
        let mut names = Vec::new();
        let mut syllables = Vec::new();
        for (f, (order, base)) in [(m, 'a'), (n, 'b')].into_iter().enumerate() {
            for e in 1..order {
                let name = if e == 1 {
                    base.to_string()
                } else if e == order - 1 {
                    base.to_ascii_uppercase().to_string()
                } else {
                    format!("{base}{e}")
                };
                names.push(name);
                syllables.push((f as u8, e));
            }
        }
        let letter_of = |f: u8, e: u32| -> usize {
            if f == 0 {
                (e - 1) as usize
            } else {
                (m - 1 + e - 1) as usize
            }
        };
        let inverse = syllables
            .iter()
            .map(|&(f, e)| letter_of(f, [m, n][f as usize] - e))
            .collect();
        Ok(GroupModel {
            kind: GroupKind::FreeProduct { orders: [m, n] },
            alphabet: Alphabet::new(names, inverse)?,
            syllables,
            caps: EnumerationCaps::default(),
        })
    }

    pub fn with_caps(mut self, caps: EnumerationCaps) -> Self {
        self.caps = caps;
        self
    }

    pub fn caps(&self) -> EnumerationCaps {
        self.caps
    }

    pub fn kind(&self) -> GroupKind {
        self.kind
    }

    pub fn descriptor(&self) -> String {
        self.to_string()
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn is_free(&self) -> bool {
        matches!(self.kind, GroupKind::Free { .. })
    }

    /// Largest order of a finite subgroup (`M`).
    pub fn max_finite_subgroup_order(&self) -> u32 {
        match self.kind {
            GroupKind::Free { .. } => 1,
            GroupKind::FreeProduct { orders: [m, n] } => m.max(n),
        }
    }

    pub fn parse_word(&self, s: &str) -> Result<Word> {
        self.alphabet.parse(s)
    }

    pub fn format_word(&self, w: &Word) -> String {
        self.alphabet.format(w)
    }

    #[inline]
    fn factor(&self, l: Letter) -> u8 {
        self.syllables[l.index()].0
    }

    /// Product of two letters from the same factor, `None` if trivial.
    fn merge(&self, x: Letter, y: Letter) -> Option<Letter> {
        let GroupKind::FreeProduct { orders } = self.kind else {
            unreachable!("merge is only used for free products")
        };
        let (f, e1) = self.syllables[x.index()];
        let (_, e2) = self.syllables[y.index()];
        let order = orders[f as usize];
        let e = (e1 + e2) % order;
        if e == 0 {
            return None;
        }
        let idx = if f == 0 { e - 1 } else { orders[0] - 1 + e - 1 };
        Some(Letter(idx as u8))
    }

    /// Whether `next` may follow `prev` in a geodesic word.
    #[inline]
    pub fn can_follow(&self, prev: Letter, next: Letter) -> bool {
        match self.kind {
            GroupKind::Free { .. } => next != self.alphabet.inv(prev),
            GroupKind::FreeProduct { .. } => self.factor(prev) != self.factor(next),
        }
    }

    /// Geodesic normal form of the element represented by `w`.
    pub fn geodesic_form(&self, w: &Word) -> Word {
        match self.kind {
            GroupKind::Free { .. } => self.alphabet.free_reduce(w),
            GroupKind::FreeProduct { .. } => {
                let mut out: Vec<Letter> = Vec::with_capacity(w.len());
                for &l in w.letters() {
                    match out.last() {
                        Some(&top) if self.factor(top) == self.factor(l) => {
                            out.pop();
                            if let Some(m) = self.merge(top, l) {
                                out.push(m);
                            }
                        }
                        _ => out.push(l),
                    }
                }
                Word::new(out)
            }
        }
    }

    pub fn is_geodesic(&self, w: &Word) -> bool {
        w.letters().windows(2).all(|p| self.can_follow(p[0], p[1]))
    }

    pub fn multiply(&self, u: &Word, v: &Word) -> Word {
        self.geodesic_form(&u.concat(v))
    }

    pub fn inverse(&self, w: &Word) -> Word {
        self.geodesic_form(&self.alphabet.inverse_word(w))
    }

    /// Word-metric length `|w|`.
    pub fn length(&self, w: &Word) -> usize {
        self.geodesic_form(w).len()
    }

    pub fn is_identity(&self, w: &Word) -> bool {
        self.geodesic_form(w).is_empty()
    }

    /// A shortest conjugate of `w`, cyclically reduced (free group) or
    /// cyclically alternating (free product).
    pub fn cyclic_normal_form(&self, w: &Word) -> Word {
        match self.kind {
            GroupKind::Free { .. } => self.alphabet.cyclic_reduce(w),
            GroupKind::FreeProduct { .. } => {
                let mut v = self.geodesic_form(w).into_letters();
                while v.len() >= 2 && self.factor(v[0]) == self.factor(v[v.len() - 1]) {
                    // conjugate by the first letter: f M l -> M (l f)
                    let f = v.remove(0);
                    let l = v.pop().unwrap();
                    if let Some(m) = self.merge(l, f) {
                        v.push(m);
                    }
                }
                Word::new(v)
            }
        }
    }

    /// Minimal length in the conjugacy class of `w`.
    pub fn conj_length(&self, w: &Word) -> usize {
        self.cyclic_normal_form(w).len()
    }

    /// Whether `w` is a geodesic of minimal length in its conjugacy class.
    pub fn is_conj_geodesic(&self, w: &Word) -> bool {
        self.is_geodesic(w) && self.cyclic_normal_form(w).len() == w.len()
    }

    pub fn conj_key(&self, w: &Word) -> ConjKey {
        ConjKey(self.cyclic_normal_form(w).lex_min_rotation())
    }

    pub fn has_finite_order(&self, w: &Word) -> bool {
        let c = self.cyclic_normal_form(w);
        match self.kind {
            GroupKind::Free { .. } => c.is_empty(),
            GroupKind::FreeProduct { .. } => c.len() <= 1,
        }
    }

    /// Primitive root `r` and maximal exponent `e` with `r^e` conjugate to `w`.
    /// The root is returned as a prefix of the conjugacy key.
    pub fn primitive_root(&self, w: &Word) -> Result<(Word, usize)> {
        if self.has_finite_order(w) {
            return Err(Error::TorsionInput);
        }
        let key = self.conj_key(w).0;
        let p = key.cyclic_period();
        Ok((key.prefix(p), key.len() / p))
    }

    pub fn is_primitive(&self, w: &Word) -> bool {
        matches!(self.primitive_root(w), Ok((_, 1)))
    }

    pub fn comm_key(&self, w: &Word) -> CommKey {
        match self.primitive_root(w) {
            Err(_) => CommKey::Torsion,
            Ok((root, _)) => {
                let k1 = self.conj_key(&root);
                let k2 = self.conj_key(&self.alphabet.inverse_word(&root));
                CommKey::Class(k1.min(k2))
            }
        }
    }

    /// Exact number of elements of length `n`.
    pub fn sphere_size(&self, n: usize) -> BigUint {
        if n == 0 {
            return BigUint::one();
        }
        match self.kind {
            GroupKind::Free { rank } => {
                let k = rank as u64;
                BigUint::from(2 * k) * BigUint::from(2 * k - 1).pow(n as u32 - 1)
            }
            GroupKind::FreeProduct { orders: [m, n2] } => {
                let (p, q) = (BigUint::from(m - 1), BigUint::from(n2 - 1));
                // alternating words starting in either factor
                let half = (n / 2) as u32;
                if n.is_multiple_of(2) {
                    BigUint::from(2u32) * (&p * &q).pow(half)
                } else {
                    (&p + &q) * (&p * &q).pow(half)
                }
            }
        }
    }

    pub fn ball_size(&self, n: usize) -> BigUint {
        (0..=n).map(|i| self.sphere_size(i)).sum()
    }

    /// Largest `n` whose sphere fits `sphere_budget`.
    pub fn sphere_cap(&self) -> usize {
        let budget = BigUint::from(self.caps.sphere_budget);
        (0..=self.caps.max_length)
            .take_while(|&n| self.sphere_size(n) <= budget)
            .last()
            .unwrap_or(0)
    }

    /// Largest `n` whose ball fits `ball_budget`.
    pub fn ball_cap(&self) -> usize {
        let budget = BigUint::from(self.caps.ball_budget);
        (0..=self.caps.max_length)
            .take_while(|&n| self.ball_size(n) <= budget)
            .last()
            .unwrap_or(0)
    }

    fn check_sphere_cap(&self, n: usize) -> Result<()> {
        let cap = self.sphere_cap();
        if n > cap {
            return Err(Error::ResourceCap {
                what: "sphere enumeration length",
                requested: n as u64,
                cap: cap as u64,
            });
        }
        Ok(())
    }

    /// All elements of length exactly `n`, in normal form and lex order.
    pub fn enumerate_sphere(&self, n: usize) -> Result<SphereIter<'_>> {
        self.check_sphere_cap(n)?;
        Ok(SphereIter::new(self, n, &[]))
    }

    /// The part of the sphere whose words start with `prefix` (which must be geodesic).
    pub fn sphere_shard(&self, n: usize, prefix: &[Letter]) -> Result<SphereIter<'_>> {
        self.check_sphere_cap(n)?;
        Ok(SphereIter::new(self, n, prefix))
    }

    /// Geodesic prefixes of length `min(depth, n)`, used to split a sphere into shards.
    pub fn shard_prefixes(&self, n: usize, depth: usize) -> Vec<Vec<Letter>> {
        let d = depth.min(n);
        SphereIter::new(self, d, &[]).map(Word::into_letters).collect()
    }

    /// All elements of length at most `radius`, shortest first.
    pub fn ball(&self, radius: usize) -> Result<Vec<Word>> {
        let mut out = Vec::new();
        for n in 0..=radius {
            out.extend(self.enumerate_sphere(n)?);
        }
        Ok(out)
    }
}

impl GroupModel {
    /// Automaton accepting exactly the geodesic words (one per element).
    pub fn geodesic_dfa(&self) -> Dfa {
        explore(
            Symbols::plain(self.alphabet.names().to_vec()),
            Some(None::<Letter>),
            |_| true,
            |prev, s| {
                let l = Letter(s as u8);
                prev.is_none_or(|p| self.can_follow(p, l)).then_some(Some(l))
            },
        )
        .minimize()
    }

    /// Automaton accepting the geodesic words of minimal length in their
    /// conjugacy class.
    pub fn conj_geodesic_dfa(&self) -> Dfa {
        // (first letter, last letter, length is 1)
        explore(
            Symbols::plain(self.alphabet.names().to_vec()),
            Some(None::<(Letter, Letter, bool)>),
            |st| match *st {
                None => true,
                Some((_, _, true)) => true,
                Some((f, l, false)) => self.can_follow(l, f),
            },
            |st, s| {
                let x = Letter(s as u8);
                match *st {
                    None => Some(Some((x, x, true))),
                    Some((f, l, _)) => self.can_follow(l, x).then_some(Some((f, x, false))),
                }
            },
        )
        .minimize()
    }

    pub fn word_symbols(&self, w: &Word) -> Vec<usize> {
        w.letters().iter().map(|l| l.index()).collect()
    }
}

/// Lexicographic odometer over the geodesic words of a fixed length.
pub struct SphereIter<'a> {
    model: &'a GroupModel,
    fixed: usize,
    cur: Option<Vec<Letter>>,
}

impl<'a> SphereIter<'a> {
    fn new(model: &'a GroupModel, n: usize, prefix: &[Letter]) -> Self {
        let mut it = SphereIter { model, fixed: prefix.len().min(n), cur: None };
        if prefix.len() > n || !model.is_geodesic(&Word::new(prefix.to_vec())) {
            return it;
        }
        let mut v = prefix.to_vec();
        if it.fill(&mut v, n) {
            it.cur = Some(v);
        }
        it
    }

    fn smallest_after(&self, prev: Option<Letter>, from: usize) -> Option<Letter> {
        (from..self.model.alphabet.len())
            .map(|i| Letter(i as u8))
            .find(|&l| prev.is_none_or(|p| self.model.can_follow(p, l)))
    }

    /// Extends `v` to length `n` with the smallest valid letters.
    fn fill(&self, v: &mut Vec<Letter>, n: usize) -> bool {
        while v.len() < n {
            match self.smallest_after(v.last().copied(), 0) {
                Some(l) => v.push(l),
                None => return false,
            }
        }
        true
    }
}

impl Iterator for SphereIter<'_> {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        let cur = self.cur.take()?;
        let n = cur.len();
        let mut v = cur.clone();
        // advance to the lexicographic successor
        let mut i = n;
        while i > self.fixed {
            i -= 1;
            let prev = if i == 0 { None } else { Some(v[i - 1]) };
            if let Some(l) = self.smallest_after(prev, v[i].index() + 1) {
                v[i] = l;
                v.truncate(i + 1);
                if self.fill(&mut v, n) {
                    self.cur = Some(v);
                }
                break;
            }
        }
        Some(Word::new(cur))
    }
}

//! Letters, words and the free-monoid combinatorics underneath everything else.
//!
//! An [`Alphabet`] is a finite ordered set of letters with an involutive
//! inversion. The letter order is the index order, so the derived `Ord` on
//! [`Word`] is the lexicographic extension of the alphabet order.

use std::fmt;

use crate::error::{Error, Result};

/// A letter, identified by its index in the owning [`Alphabet`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter(pub u8);

impl Letter {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// A finite sequence of letters. The empty word is the identity.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn new(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    pub fn from_indices(idx: &[u8]) -> Self {
        Word(idx.iter().map(|&i| Letter(i)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.0
    }

    pub fn first(&self) -> Option<Letter> {
        self.0.first().copied()
    }

    pub fn last(&self) -> Option<Letter> {
        self.0.last().copied()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn prefix(&self, j: usize) -> Word {
        Word(self.0[..j.min(self.len())].to_vec())
    }

    /// The word shifted left by `k` places: `w[k..] w[..k]`.
    pub fn rotate(&self, k: usize) -> Word {
        if self.is_empty() {
            return Word::empty();
        }
        let k = k % self.len();
        let mut v = Vec::with_capacity(self.len());
        v.extend_from_slice(&self.0[k..]);
        v.extend_from_slice(&self.0[..k]);
        Word(v)
    }

    /// All `len` cyclic shifts, starting with the word itself. The empty word
    /// has the single rotation `""`.
    pub fn rotations(&self) -> Vec<Word> {
        if self.is_empty() {
            return vec![Word::empty()];
        }
        (0..self.len()).map(|k| self.rotate(k)).collect()
    }

    /// Index of the lexicographically least rotation (smallest such index on ties).
    pub fn least_rotation_index(&self) -> usize {
        least_rotation(&self.0)
    }

    pub fn lex_min_rotation(&self) -> Word {
        self.rotate(self.least_rotation_index())
    }

    /// Smallest `p` dividing the length with `rotate(p) == self`; 0 for the empty word.
    pub fn cyclic_period(&self) -> usize {
        let n = self.len();
        (1..=n)
            .find(|&p| n.is_multiple_of(p) && (0..n).all(|i| self.0[i] == self.0[(i + p) % n]))
            .unwrap_or(0)
    }

    pub fn pow(&self, e: usize) -> Word {
        let mut v = Vec::with_capacity(self.len() * e);
        for _ in 0..e {
            v.extend_from_slice(&self.0);
        }
        Word(v)
    }
}

impl From<Vec<Letter>> for Word {
    fn from(v: Vec<Letter>) -> Self {
        Word(v)
    }
}

fn least_rotation(s: &[Letter]) -> usize {
    let n = s.len();
    let mut best = 0;
    for k in 1..n {
        let cand = s[k..].iter().chain(&s[..k]);
        let cur = s[best..].iter().chain(&s[..best]);
        if cand.lt(cur) {
            best = k;
        }
    }
    best
}

/// Ordered letters with an involutive inversion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alphabet {
    names: Vec<String>,
    inverse: Vec<Letter>,
    single_char: bool,
}

impl Alphabet {
    /// Builds an alphabet from letter tokens (in order) and an inversion table.
    pub fn new(names: Vec<String>, inverse: Vec<usize>) -> Result<Self> {
        if names.len() != inverse.len() {
            return Err(Error::InvalidAlphabet("inverse table has wrong length".into()));
        }
        if names.len() > u8::MAX as usize {
            return Err(Error::InvalidAlphabet(format!("{} letters is too many", names.len())));
        }
        for (i, &j) in inverse.iter().enumerate() {
            if j >= names.len() || inverse[j] != i {
                return Err(Error::InvalidAlphabet(format!("inverse is not an involution at {i}")));
            }
        }
        for (i, name) in names.iter().enumerate() {
            if name.is_empty() || name.contains(',') || name.contains('$') {
                return Err(Error::InvalidAlphabet(format!("bad token {name:?}")));
            }
            if names[..i].contains(name) {
                return Err(Error::InvalidAlphabet(format!("duplicate token {name:?}")));
            }
        }
        let single_char = names.iter().all(|n| n.chars().count() == 1);
        Ok(Alphabet {
            names,
            inverse: inverse.into_iter().map(|j| Letter(j as u8)).collect(),
            single_char,
        })
    }

    /// Symmetric alphabet of a free group of rank `k`, ordered
    /// `a1 < a1^-1 < a2 < a2^-1 < ...`.
    pub fn free(rank: usize) -> Result<Self> {
        if rank == 0 || 2 * rank > u8::MAX as usize {
            return Err(Error::InvalidAlphabet(format!("unsupported rank {rank}")));
        }
        let mut names = Vec::with_capacity(2 * rank);
        for i in 0..rank {
            if rank <= 13 {
                let c = (b'a' + i as u8) as char;
                names.push(c.to_string());
                names.push(c.to_ascii_uppercase().to_string());
            } else {
                names.push(format!("x{}", i + 1));
                names.push(format!("X{}", i + 1));
            }
        }
        let inverse = (0..2 * rank).map(|i| i ^ 1).collect();
        Alphabet::new(names, inverse)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        (0..self.names.len()).map(|i| Letter(i as u8))
    }

    pub fn name(&self, l: Letter) -> &str {
        &self.names[l.index()]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    #[inline]
    pub fn inv(&self, l: Letter) -> Letter {
        self.inverse[l.index()]
    }

    pub fn contains(&self, w: &Word) -> bool {
        w.letters().iter().all(|l| l.index() < self.len())
    }

    /// Formal inverse: reversed, letterwise inverted.
    pub fn inverse_word(&self, w: &Word) -> Word {
        Word(w.letters().iter().rev().map(|&l| self.inv(l)).collect())
    }

    pub fn is_freely_reduced(&self, w: &Word) -> bool {
        w.letters().windows(2).all(|p| p[1] != self.inv(p[0]))
    }

    pub fn is_cyclically_reduced(&self, w: &Word) -> bool {
        self.is_freely_reduced(w)
            && match (w.first(), w.last()) {
                (Some(f), Some(l)) => w.len() == 1 || f != self.inv(l),
                _ => true,
            }
    }

    /// Free reduction with a single stack pass.
    pub fn free_reduce(&self, w: &Word) -> Word {
        let mut out: Vec<Letter> = Vec::with_capacity(w.len());
        for &l in w.letters() {
            match out.last() {
                Some(&top) if top == self.inv(l) => {
                    out.pop();
                }
                _ => out.push(l),
            }
        }
        Word(out)
    }

    /// Free reduction followed by stripping matched inverse ends.
    pub fn cyclic_reduce(&self, w: &Word) -> Word {
        let r = self.free_reduce(w);
        let s = r.letters();
        let (mut i, mut j) = (0, s.len());
        while j - i >= 2 && s[i] == self.inv(s[j - 1]) {
            i += 1;
            j -= 1;
        }
        Word(s[i..j].to_vec())
    }

    /// Renders a word: concatenated tokens when every token is one character,
    /// comma-separated tokens otherwise.
    pub fn format(&self, w: &Word) -> String {
        let toks = w.letters().iter().map(|&l| self.name(l));
        if self.single_char {
            toks.collect()
        } else {
            toks.collect::<Vec<_>>().join(",")
        }
    }

    pub fn parse(&self, s: &str) -> Result<Word> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Word::empty());
        }
        let lookup = |tok: &str| {
            self.names
                .iter()
                .position(|n| n == tok)
                .map(|i| Letter(i as u8))
                .ok_or_else(|| Error::UnknownLetter { token: tok.to_string() })
        };
        if self.single_char && !s.contains(',') {
            s.chars().map(|c| lookup(c.encode_utf8(&mut [0; 4]))).collect::<Result<Vec<_>>>().map(Word)
        } else {
            s.split(',').map(|t| lookup(t.trim())).collect::<Result<Vec<_>>>().map(Word)
        }
    }

    /// Display adapter for a word over this alphabet.
    pub fn show<'a>(&'a self, w: &'a Word) -> impl fmt::Display + 'a {
        struct Show<'a>(&'a Alphabet, &'a Word);
        impl fmt::Display for Show<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0.format(self.1))
            }
        }
        Show(self, w)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f2() -> Alphabet {
        Alphabet::free(2).unwrap()
    }

    fn w(s: &str) -> Word {
        f2().parse(s).unwrap()
    }

    /// Rewrites adjacent inverse pairs one at a time until none remain.
    fn reduce_by_scanning(a: &Alphabet, w: &Word) -> Word {
        let mut v = w.letters().to_vec();
        loop {
            let hit = (0..v.len().saturating_sub(1)).find(|&i| v[i + 1] == a.inv(v[i]));
            match hit {
                Some(i) => {
                    v.drain(i..i + 2);
                }
                None => return Word::new(v),
            }
        }
    }

    #[test]
    fn free_reduce_examples() {
        let a = f2();
        assert_eq!(a.free_reduce(&w("")), w(""));
        assert_eq!(a.free_reduce(&w("abBA")), w(""));
        assert_eq!(a.free_reduce(&w("abBb")), w("ab"));
        assert_eq!(reduce_by_scanning(&a, &w("abBb")), w("ab"));
    }

    #[test]
    fn cyclic_reduce_examples() {
        let a = f2();
        assert_eq!(a.cyclic_reduce(&w("Aba")), w("b"));
        assert_eq!(a.cyclic_reduce(&w("ab")), w("ab"));
        assert_eq!(a.cyclic_reduce(&w("abAB")), w("abAB"));
        assert_eq!(a.cyclic_reduce(&w("aA")), w(""));
        assert_eq!(a.cyclic_reduce(&w("abaA")), w("ab"));
    }

    #[test]
    fn rotation_examples() {
        assert_eq!(w("ab").rotations(), vec![w("ab"), w("ba")]);
        assert_eq!(w("aa").rotations(), vec![w("aa"), w("aa")]);
        assert_eq!(w("").rotations(), vec![w("")]);
        assert_eq!(w("ba").lex_min_rotation(), w("ab"));
        assert_eq!(w("aaa").lex_min_rotation(), w("aaa"));
        assert_eq!(w("bab").lex_min_rotation(), w("abb"));
        // a < A < b < B
        assert_eq!(w("BA").lex_min_rotation(), w("AB"));
    }

    #[test]
    fn period() {
        assert_eq!(w("abab").cyclic_period(), 2);
        assert_eq!(w("aba").cyclic_period(), 3);
        assert_eq!(w("aaaa").cyclic_period(), 1);
        assert_eq!(w("").cyclic_period(), 0);
    }

    #[test]
    fn token_formats() {
        let a = f2();
        assert_eq!(a.names(), &["a", "A", "b", "B"]);
        assert_eq!(a.format(&w("abAB")), "abAB");
        assert!(a.parse("abx").is_err());
        assert_eq!(a.parse("a,b,A").unwrap(), w("abA"));

        let big = Alphabet::free(14).unwrap();
        let x = big.parse("x3,X7,x14").unwrap();
        assert_eq!(x.letters(), &[Letter(4), Letter(13), Letter(26)]);
        assert_eq!(big.format(&x), "x3,X7,x14");
        assert_eq!(big.parse("").unwrap(), Word::empty());
    }

    #[test]
    fn alphabet_validation() {
        assert!(Alphabet::new(vec!["a".into(), "b".into()], vec![1, 1]).is_err());
        assert!(Alphabet::new(vec!["a".into(), "a".into()], vec![0, 1]).is_err());
        assert!(Alphabet::new(vec!["a".into(), "b".into()], vec![0, 1]).is_ok());
    }

    #[test]
    fn free_reduce_idempotent_exhaustive() {
        let a = f2();
        let mut count = 0usize;
        let mut stack = vec![Vec::<u8>::new()];
        while let Some(v) = stack.pop() {
            let word = Word::from_indices(&v);
            let r = a.free_reduce(&word);
            assert_eq!(a.free_reduce(&r), r);
            assert!(a.is_freely_reduced(&r));
            count += 1;
            if v.len() < 12 {
                for l in 0..4u8 {
                    let mut nv = v.clone();
                    nv.push(l);
                    stack.push(nv);
                }
            }
        }
        assert_eq!(count, (0..=12).map(|k| 4usize.pow(k)).sum::<usize>());
    }

    fn arb_word(max: usize) -> impl Strategy<Value = Word> {
        proptest::collection::vec(0u8..4, 0..max).prop_map(|v| Word::from_indices(&v))
    }

    proptest! {
        #[test]
        fn reduction_matches_scanning(x in arb_word(16)) {
            let a = f2();
            prop_assert_eq!(a.free_reduce(&x), reduce_by_scanning(&a, &x));
        }

        #[test]
        fn inversion_anti_homomorphism(x in arb_word(16)) {
            let a = f2();
            prop_assert_eq!(a.free_reduce(&a.inverse_word(&x)), a.inverse_word(&a.free_reduce(&x)));
        }

        #[test]
        fn cyclic_reduce_is_conjugate(x in arb_word(14)) {
            let a = f2();
            let r = a.free_reduce(&x);
            let c = a.cyclic_reduce(&x);
            prop_assert!(a.is_cyclically_reduced(&c));
            // r = t c t^-1 for the stripped prefix t
            let k = (r.len() - c.len()) / 2;
            let t = r.prefix(k);
            let rebuilt = a.free_reduce(&t.concat(&c).concat(&a.inverse_word(&t)));
            prop_assert_eq!(rebuilt, r);
        }

        #[test]
        fn lex_min_rotation_is_class_invariant(x in arb_word(10)) {
            let m = x.lex_min_rotation();
            for r in x.rotations() {
                prop_assert_eq!(r.lex_min_rotation(), m.clone());
                prop_assert!(m <= r);
            }
        }

        #[test]
        fn format_roundtrip(x in arb_word(20)) {
            let a = f2();
            prop_assert_eq!(a.parse(&a.format(&x)).unwrap(), x);
        }
    }
}

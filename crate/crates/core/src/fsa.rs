//! Finite automata over indexed symbol alphabets.
//!
//! Symbols are indices into a [`Symbols`] table, which is a product of one or
//! more component alphabets (a plain alphabet has one component). Product
//! symbols are encoded in mixed radix with the first coordinate most
//! significant, so symbol order is the lexicographic order of tuples.
//!
//! Every [`Dfa`] has an explicit fail state at index 0 which is never
//! accepting and loops on every symbol.

use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;
use std::hash::Hash;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::IntPoly;

pub const FAIL: u32 = 0;

/// Above this many live states `rational_gf` reconstructs from counts instead
/// of eliminating over `Z[z]`.
const BAREISS_LIMIT: usize = 40;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Symbols {
    components: Vec<Vec<String>>,
    strides: Vec<usize>,
    len: usize,
}

impl Symbols {
    pub fn plain(names: Vec<String>) -> Arc<Self> {
        Symbols::product(vec![names])
    }

    pub fn product(components: Vec<Vec<String>>) -> Arc<Self> {
        assert!(!components.is_empty(), "at least one component");
        let mut strides = vec![1; components.len()];
        for i in (0..components.len() - 1).rev() {
            strides[i] = strides[i + 1] * components[i + 1].len();
        }
        let len = components.iter().map(Vec::len).product();
        Arc::new(Symbols { components, strides, len })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn arity(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Vec<String>] {
        &self.components
    }

    pub fn encode(&self, coords: &[usize]) -> usize {
        debug_assert_eq!(coords.len(), self.arity());
        coords.iter().zip(&self.strides).map(|(c, s)| c * s).sum()
    }

    pub fn decode(&self, mut sym: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.arity());
        for s in &self.strides {
            out.push(sym / s);
            sym %= s;
        }
        out
    }

    pub fn coord(&self, sym: usize, i: usize) -> usize {
        (sym / self.strides[i]) % self.components[i].len()
    }

    pub fn name(&self, sym: usize) -> String {
        if self.arity() == 1 {
            return self.components[0][sym].clone();
        }
        let parts: Vec<&str> = self
            .decode(sym)
            .into_iter()
            .enumerate()
            .map(|(i, c)| self.components[i][c].as_str())
            .collect();
        format!("({})", parts.join(","))
    }

    /// Alphabet made of the chosen coordinates, in the given order.
    pub fn select(&self, coords: &[usize]) -> Arc<Symbols> {
        Symbols::product(coords.iter().map(|&i| self.components[i].clone()).collect())
    }
}

/// Deterministic automaton with a total transition table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dfa {
    symbols: Arc<Symbols>,
    delta: Vec<u32>,
    accepting: Vec<bool>,
    start: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoolOp {
    Union,
    Intersection,
    Difference,
}

/// Breadth-first construction from an implicit state space. `step` returns
/// `None` for the fail state. State numbering follows discovery order.
pub(crate) fn explore<K, F, A>(symbols: Arc<Symbols>, start: Option<K>, accept: A, step: F) -> Dfa
where
    K: Hash + Eq + Clone,
    A: Fn(&K) -> bool,
    F: FnMut(&K, usize) -> Option<K>,
{
    explore_capped(symbols, start, accept, step, usize::MAX).expect("uncapped")
}

/// As [`explore`], giving up with `None` once more than `cap` states are found.
pub(crate) fn explore_capped<K, F, A>(
    symbols: Arc<Symbols>,
    start: Option<K>,
    accept: A,
    mut step: F,
    cap: usize,
) -> Option<Dfa>
where
    K: Hash + Eq + Clone,
    A: Fn(&K) -> bool,
    F: FnMut(&K, usize) -> Option<K>,
{
    let ns = symbols.len();
    let mut ids: HashMap<K, u32> = HashMap::new();
    let mut keys: Vec<K> = Vec::new();
    let mut delta = vec![FAIL; ns];
    let mut accepting = vec![false];
    let Some(start) = start else {
        return Some(Dfa { symbols, delta, accepting, start: FAIL });
    };
    ids.insert(start.clone(), 1);
    keys.push(start);
    let mut i = 0;
    while i < keys.len() {
        let key = keys[i].clone();
        accepting.push(accept(&key));
        for s in 0..ns {
            let t = match step(&key, s) {
                None => FAIL,
                Some(next) => match ids.get(&next) {
                    Some(&id) => id,
                    None => {
                        let id = keys.len() as u32 + 1;
                        ids.insert(next.clone(), id);
                        keys.push(next);
                        id
                    }
                },
            };
            delta.push(t);
        }
        i += 1;
        if keys.len() > cap {
            return None;
        }
    }
    Some(Dfa { symbols, delta, accepting, start: 1 })
}

impl Dfa {
    /// Builds from an explicit table; state 0 must be the fail state.
    pub fn from_table(
        symbols: Arc<Symbols>,
        start: u32,
        accepting: Vec<bool>,
        transitions: Vec<Vec<u32>>,
    ) -> Result<Self> {
        let n = accepting.len();
        let ns = symbols.len();
        if n == 0 || transitions.len() != n || start as usize >= n {
            return Err(Error::Malformed("state count mismatch".into()));
        }
        if accepting[0] || transitions[0].iter().any(|&t| t != FAIL) {
            return Err(Error::Malformed("state 0 must be a non-accepting sink".into()));
        }
        let mut delta = Vec::with_capacity(n * ns);
        for row in &transitions {
            if row.len() != ns || row.iter().any(|&t| t as usize >= n) {
                return Err(Error::Malformed("bad transition row".into()));
            }
            delta.extend_from_slice(row);
        }
        Ok(Dfa { symbols, delta, accepting, start })
    }

    pub fn empty(symbols: Arc<Symbols>) -> Self {
        explore::<u8, _, _>(symbols, None, |_| false, |_, _| None)
    }

    /// Accepts only the empty word.
    pub fn epsilon(symbols: Arc<Symbols>) -> Self {
        explore(symbols, Some(()), |_| true, |_, _| None)
    }

    pub fn all_words(symbols: Arc<Symbols>) -> Self {
        explore(symbols, Some(()), |_| true, |_, _| Some(()))
    }

    /// Finite language given as symbol sequences.
    pub fn from_words(symbols: Arc<Symbols>, words: &[Vec<usize>]) -> Self {
        let words: Vec<&[usize]> = words.iter().map(Vec::as_slice).collect();
        explore(
            symbols,
            Some(Vec::<usize>::new()),
            |p| words.contains(&p.as_slice()),
            |p, s| {
                let mut q = p.clone();
                q.push(s);
                words.iter().any(|w| w.starts_with(&q)).then_some(q)
            },
        )
        .minimize()
    }

    pub fn symbols(&self) -> &Arc<Symbols> {
        &self.symbols
    }

    pub fn num_states(&self) -> usize {
        self.accepting.len()
    }

    pub fn start(&self) -> u32 {
        self.start
    }

    pub fn is_accepting(&self, q: u32) -> bool {
        self.accepting[q as usize]
    }

    #[inline]
    pub fn step(&self, q: u32, sym: usize) -> u32 {
        self.delta[q as usize * self.symbols.len() + sym]
    }

    pub fn run(&self, mut q: u32, word: &[usize]) -> u32 {
        for &s in word {
            q = self.step(q, s);
        }
        q
    }

    pub fn accepts(&self, word: &[usize]) -> bool {
        self.is_accepting(self.run(self.start, word))
    }

    pub fn is_empty_language(&self) -> bool {
        let m = self.minimize();
        m.start == FAIL
    }

    fn check_same(&self, other: &Dfa) -> Result<()> {
        if Arc::ptr_eq(&self.symbols, &other.symbols) || self.symbols == other.symbols {
            Ok(())
        } else {
            Err(Error::AlphabetMismatch)
        }
    }

    /// Product construction, minimized.
    pub fn boolean_combine(&self, other: &Dfa, op: BoolOp) -> Result<Dfa> {
        self.check_same(other)?;
        let alive = |p: u32, q: u32| match op {
            BoolOp::Union => p != FAIL || q != FAIL,
            BoolOp::Intersection => p != FAIL && q != FAIL,
            BoolOp::Difference => p != FAIL,
        };
        let acc = |p: u32, q: u32| {
            let (a, b) = (self.is_accepting(p), other.is_accepting(q));
            match op {
                BoolOp::Union => a || b,
                BoolOp::Intersection => a && b,
                BoolOp::Difference => a && !b,
            }
        };
        let start = alive(self.start, other.start).then_some((self.start, other.start));
        Ok(explore(
            self.symbols.clone(),
            start,
            |&(p, q)| acc(p, q),
            |&(p, q), s| {
                let (p2, q2) = (self.step(p, s), other.step(q, s));
                alive(p2, q2).then_some((p2, q2))
            },
        )
        .minimize())
    }

    pub fn union(&self, other: &Dfa) -> Result<Dfa> {
        self.boolean_combine(other, BoolOp::Union)
    }

    pub fn intersection(&self, other: &Dfa) -> Result<Dfa> {
        self.boolean_combine(other, BoolOp::Intersection)
    }

    pub fn difference(&self, other: &Dfa) -> Result<Dfa> {
        self.boolean_combine(other, BoolOp::Difference)
    }

    /// Intersection of several automata over one alphabet in a single product.
    pub fn intersect_all(parts: &[&Dfa]) -> Result<Dfa> {
        let first = parts.first().ok_or_else(|| Error::Malformed("no automata".into()))?;
        for p in &parts[1..] {
            first.check_same(p)?;
        }
        let start: Vec<u32> = parts.iter().map(|d| d.start).collect();
        let start = start.iter().all(|&q| q != FAIL).then_some(start);
        Ok(explore(
            first.symbols.clone(),
            start,
            |qs: &Vec<u32>| qs.iter().zip(parts).all(|(&q, d)| d.is_accepting(q)),
            |qs, s| {
                let mut next = Vec::with_capacity(qs.len());
                for (&q, d) in qs.iter().zip(parts) {
                    let t = d.step(q, s);
                    if t == FAIL {
                        return None;
                    }
                    next.push(t);
                }
                Some(next)
            },
        )
        .minimize())
    }

    /// `{ w : phi(w) accepted }` for a morphism from `source` symbols into this
    /// automaton's symbols.
    pub fn morphism_preimage(&self, source: Arc<Symbols>, phi: &[Vec<usize>]) -> Result<Dfa> {
        self.check_morphism(source.len(), phi, self.symbols.len())?;
        let ns = source.len();
        let n = self.num_states();
        let mut delta = Vec::with_capacity(n * ns);
        for q in 0..n as u32 {
            for image in phi {
                delta.push(self.run(q, image));
            }
        }
        let raw = Dfa { symbols: source, delta, accepting: self.accepting.clone(), start: self.start };
        Ok(raw.minimize())
    }

    fn check_morphism(&self, ns: usize, phi: &[Vec<usize>], target: usize) -> Result<()> {
        if phi.len() != ns || phi.iter().flatten().any(|&t| t >= target) {
            return Err(Error::Malformed("morphism is not total on the alphabet".into()));
        }
        Ok(())
    }

    /// `{ phi(w) : w accepted }` as an epsilon-free NFA over `target`.
    pub fn morphism_image(&self, target: Arc<Symbols>, phi: &[Vec<usize>]) -> Result<Nfa> {
        self.check_morphism(self.symbols.len(), phi, target.len())?;
        // states: original states, then intermediate states for long images
        let n = self.num_states();
        let mut eps: Vec<Vec<u32>> = vec![Vec::new(); n];
        let mut edges: Vec<Vec<(usize, u32)>> = vec![Vec::new(); n];
        for q in 1..n as u32 {
            for (s, image) in phi.iter().enumerate() {
                let r = self.step(q, s);
                if r == FAIL {
                    continue;
                }
                match image.len() {
                    0 => eps[q as usize].push(r),
                    _ => {
                        let mut cur = q;
                        for (i, &t) in image.iter().enumerate() {
                            let next = if i + 1 == image.len() {
                                r
                            } else {
                                eps.push(Vec::new());
                                edges.push(Vec::new());
                                (edges.len() - 1) as u32
                            };
                            edges[cur as usize].push((t, next));
                            cur = next;
                        }
                    }
                }
            }
        }
        let total = edges.len();
        let mut accepting = self.accepting.clone();
        accepting.resize(total, false);

        // epsilon closures, then fold them into the letter moves
        let closure = |q: usize| -> Vec<u32> {
            let mut seen = vec![false; total];
            let mut stack = vec![q as u32];
            seen[q] = true;
            let mut out = Vec::new();
            while let Some(p) = stack.pop() {
                out.push(p);
                for &r in &eps[p as usize] {
                    if !seen[r as usize] {
                        seen[r as usize] = true;
                        stack.push(r);
                    }
                }
            }
            out
        };
        let nt = target.len();
        let mut trans = vec![vec![Vec::new(); nt]; total];
        let mut acc = vec![false; total];
        for q in 0..total {
            for p in closure(q) {
                acc[q] |= accepting[p as usize];
                for &(t, r) in &edges[p as usize] {
                    trans[q][t].push(r);
                }
            }
            for row in trans[q].iter_mut() {
                row.sort_unstable();
                row.dedup();
            }
        }
        let starts = if self.start == FAIL { vec![] } else { vec![self.start] };
        Ok(Nfa { symbols: target, trans, accepting: acc, starts })
    }

    /// Image under the projection onto `coords`, determinized and minimized.
    pub fn project(&self, coords: &[usize]) -> Dfa {
        let target = self.symbols.select(coords);
        let phi: Vec<Vec<usize>> = (0..self.symbols.len())
            .map(|s| {
                let c: Vec<usize> = coords.iter().map(|&i| self.symbols.coord(s, i)).collect();
                vec![target.encode(&c)]
            })
            .collect();
        self.morphism_image(target, &phi)
            .expect("projection is a total morphism")
            .determinize()
            .minimize()
    }

    /// Preimage under the projection of the product alphabet `source` onto
    /// `coords`, which must reproduce this automaton's alphabet.
    pub fn inverse_projection(&self, source: Arc<Symbols>, coords: &[usize]) -> Result<Dfa> {
        if *source.select(coords) != *self.symbols {
            return Err(Error::AlphabetMismatch);
        }
        let phi: Vec<Vec<usize>> = (0..source.len())
            .map(|s| {
                let c: Vec<usize> = coords.iter().map(|&i| source.coord(s, i)).collect();
                vec![self.symbols.encode(&c)]
            })
            .collect();
        self.morphism_preimage(source, &phi)
    }

    /// Minimal automaton with canonical numbering: fail state 0, the rest in
    /// breadth-first order from the start state, symbols in index order.
    pub fn minimize(&self) -> Dfa {
        let n = self.num_states();
        let ns = self.symbols.len();

        // co-reachable states
        let mut rev: Vec<Vec<u32>> = vec![Vec::new(); n];
        for q in 0..n {
            for s in 0..ns {
                rev[self.delta[q * ns + s] as usize].push(q as u32);
            }
        }
        let mut live = vec![false; n];
        let mut stack: Vec<usize> = (0..n).filter(|&q| self.accepting[q]).collect();
        for &q in &stack {
            live[q] = true;
        }
        while let Some(q) = stack.pop() {
            for &p in &rev[q] {
                if !live[p as usize] {
                    live[p as usize] = true;
                    stack.push(p as usize);
                }
            }
        }
        if !live[self.start as usize] {
            return Dfa::empty(self.symbols.clone());
        }

        // Moore refinement; dead states start in class 0 with the fail state
        let mut class: Vec<u32> = (0..n)
            .map(|q| if !live[q] { 0 } else if self.accepting[q] { 1 } else { 2 })
            .collect();
        let mut count = {
            let mut seen = [false; 3];
            class.iter().for_each(|&c| seen[c as usize] = true);
            seen.iter().filter(|&&b| b).count()
        };
        // state 0 is the fail sink, so the dead class is never empty
        loop {
            let mut sig_ids: HashMap<Vec<u32>, u32> = HashMap::new();
            let mut next = vec![0u32; n];
            let mut sig = Vec::with_capacity(ns + 1);
            // keep the dead class pinned at 0
            sig_ids.insert(vec![u32::MAX], 0);
            for q in 0..n {
                sig.clear();
                if class[q] == 0 {
                    sig.push(u32::MAX);
                } else {
                    sig.push(class[q]);
                    sig.extend((0..ns).map(|s| class[self.delta[q * ns + s] as usize]));
                }
                let len = sig_ids.len() as u32;
                next[q] = *sig_ids.entry(sig.clone()).or_insert(len);
            }
            let new_count = sig_ids.len();
            class = next;
            if new_count == count {
                break;
            }
            count = new_count;
        }

        // canonical renumbering
        let mut rep: HashMap<u32, usize> = HashMap::new();
        for q in 0..n {
            rep.entry(class[q]).or_insert(q);
        }
        let mut new_id: HashMap<u32, u32> = HashMap::new();
        new_id.insert(0, FAIL);
        let mut order: Vec<u32> = Vec::new();
        let mut queue = VecDeque::new();
        let sc = class[self.start as usize];
        new_id.insert(sc, 1);
        order.push(sc);
        queue.push_back(sc);
        while let Some(c) = queue.pop_front() {
            let q = rep[&c];
            for s in 0..ns {
                let t = class[self.delta[q * ns + s] as usize];
                if let std::collections::hash_map::Entry::Vacant(e) = new_id.entry(t) {
                    e.insert(order.len() as u32 + 1);
                    order.push(t);
                    queue.push_back(t);
                }
            }
        }
        let mut delta = vec![FAIL; ns];
        let mut accepting = vec![false];
        for &c in &order {
            let q = rep[&c];
            accepting.push(self.accepting[q]);
            for s in 0..ns {
                delta.push(new_id[&class[self.delta[q * ns + s] as usize]]);
            }
        }
        Dfa { symbols: self.symbols.clone(), delta, accepting, start: 1 }
    }

    /// Exact number of accepted words of each length `0..=n_max`.
    pub fn count_per_length(&self, n_max: usize) -> Vec<BigUint> {
        let n = self.num_states();
        let ns = self.symbols.len();
        let mut v = vec![BigUint::zero(); n];
        v[self.start as usize] = BigUint::one();
        let mut out = Vec::with_capacity(n_max + 1);
        for len in 0..=n_max {
            let total: BigUint = (1..n).filter(|&q| self.accepting[q]).map(|q| &v[q]).sum();
            out.push(total);
            if len == n_max {
                break;
            }
            let mut w = vec![BigUint::zero(); n];
            for q in 1..n {
                if v[q].is_zero() {
                    continue;
                }
                for s in 0..ns {
                    let t = self.delta[q * ns + s] as usize;
                    if t != 0 {
                        w[t] += &v[q];
                    }
                }
            }
            v = w;
        }
        out
    }

    /// All accepted words of length `n`, in symbol order.
    pub fn words_of_length(&self, n: usize) -> Vec<Vec<usize>> {
        // states that can still accept in exactly k more steps
        let ns = self.symbols.len();
        let states = self.num_states();
        let mut can: Vec<Vec<bool>> = vec![self.accepting.clone()];
        for k in 1..=n {
            let prev = &can[k - 1];
            let row = (0..states)
                .map(|q| q != 0 && (0..ns).any(|s| prev[self.step(q as u32, s) as usize]))
                .collect();
            can.push(row);
        }
        let mut out = Vec::new();
        let mut path = Vec::with_capacity(n);
        self.collect_words(self.start, n, &can, &mut path, &mut out);
        out
    }

    fn collect_words(&self, q: u32, left: usize, can: &[Vec<bool>], path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if !can[left][q as usize] {
            return;
        }
        if left == 0 {
            out.push(path.clone());
            return;
        }
        for s in 0..self.symbols.len() {
            path.push(s);
            self.collect_words(self.step(q, s), left - 1, can, path, out);
            path.pop();
        }
    }

    /// Generating function `sum_n count(n) z^n` as a reduced fraction,
    /// solved by fraction-free elimination on `(I - zT) x = accept`.
    pub fn rational_gf(&self) -> RationalGf {
        let m = self.minimize();
        let n = m.num_states() - 1;
        if n == 0 {
            return RationalGf { numerator: IntPoly::zero(), denominator: IntPoly::one() };
        }
        let ns = m.symbols.len();
        // unknown for state q (1-based) at column q-1, start state last
        let start = m.start as usize;
        let col = |q: usize| -> usize {
            if q == start {
                n - 1
            } else if q < start {
                q - 1
            } else {
                q - 2
            }
        };
        if n > BAREISS_LIMIT {
            let terms: Vec<BigInt> = m.count_per_length(2 * n).into_iter().map(BigInt::from).collect();
            let (numerator, denominator) =
                crate::poly::rational_from_terms(&terms, n).expect("a DFA series is rational of degree <= its state count");
            return RationalGf { numerator, denominator };
        }
        let mut counts = vec![vec![0i64; n]; n];
        for q in 1..=n {
            for s in 0..ns {
                let t = m.delta[q * ns + s] as usize;
                if t != 0 {
                    counts[col(q)][col(t)] += 1;
                }
            }
        }
        let mut a: Vec<Vec<IntPoly>> = vec![vec![IntPoly::zero(); n + 1]; n];
        for q in 1..=n {
            let r = col(q);
            for c in 0..n {
                let diag = i64::from(r == c);
                let k = counts[r][c];
                a[r][c] = IntPoly::from_i64(&[diag, -k]);
            }
            a[r][n] = IntPoly::from_i64(&[i64::from(m.accepting[q])]);
        }
        let (num, den) = bareiss_last_unknown(a);
        RationalGf::reduced(num, den)
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph dfa {\n  rankdir=LR;\n  node [shape=circle];\n");
        let _ = writeln!(out, "  // {} states including the undrawn fail state 0", self.num_states());
        let _ = writeln!(out, "  __start [shape=point];");
        if self.start != FAIL {
            let _ = writeln!(out, "  __start -> {};", self.start);
        }
        for q in 1..self.num_states() {
            let shape = if self.accepting[q] { "doublecircle" } else { "circle" };
            let _ = writeln!(out, "  {q} [shape={shape}];");
        }
        for q in 1..self.num_states() as u32 {
            for s in 0..self.symbols.len() {
                let t = self.step(q, s);
                if t != FAIL {
                    let label = self.symbols.name(s).replace('"', "\\\"");
                    let _ = writeln!(out, "  {q} -> {t} [label=\"{label}\"];");
                }
            }
        }
        out.push_str("}\n");
        out
    }

    pub fn to_json_value(&self) -> DfaJson {
        let ns = self.symbols.len();
        DfaJson {
            schema: 1,
            components: self.symbols.components.clone(),
            symbols: (0..ns).map(|s| self.symbols.name(s)).collect(),
            states: self.num_states(),
            start: self.start,
            accepting: (0..self.num_states() as u32).filter(|&q| self.is_accepting(q)).collect(),
            transitions: self.delta.chunks(ns.max(1)).map(<[u32]>::to_vec).collect(),
        }
    }

    pub fn from_json_value(j: &DfaJson) -> Result<Dfa> {
        let symbols = Symbols::product(j.components.clone());
        let mut accepting = vec![false; j.states];
        for &q in &j.accepting {
            *accepting
                .get_mut(q as usize)
                .ok_or_else(|| Error::Malformed("accepting state out of range".into()))? = true;
        }
        Dfa::from_table(symbols, j.start, accepting, j.transitions.clone())
    }
}

/// Serialized automaton.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DfaJson {
    pub schema: u32,
    pub components: Vec<Vec<String>>,
    pub symbols: Vec<String>,
    pub states: usize,
    pub start: u32,
    pub accepting: Vec<u32>,
    pub transitions: Vec<Vec<u32>>,
}

/// Fraction-free forward elimination on the augmented system `[A | b]` whose
/// last unknown is wanted. Returns `(numerator, denominator)` of that unknown.
fn bareiss_last_unknown(mut a: Vec<Vec<IntPoly>>) -> (IntPoly, IntPoly) {
    let n = a.len();
    let mut prev = IntPoly::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                panic!("I - zT is invertible over Q(z)");
            };
            a.swap(k, p);
        }
        if k + 1 == n {
            break;
        }
        for i in k + 1..n {
            for j in k + 1..=n {
                let lhs = &a[k][k] * &a[i][j];
                let rhs = &a[i][k] * &a[k][j];
                a[i][j] = (lhs - rhs).exact_div(&prev);
            }
            a[i][k] = IntPoly::zero();
        }
        prev = a[k][k].clone();
    }
    (a[n - 1][n].clone(), a[n - 1][n - 1].clone())
}

/// `numerator / denominator` with integer coefficients and `denominator(0) = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalGf {
    pub numerator: IntPoly,
    pub denominator: IntPoly,
}

impl RationalGf {
    pub fn reduced(num: IntPoly, den: IntPoly) -> RationalGf {
        if num.is_zero() {
            return RationalGf { numerator: num, denominator: IntPoly::one() };
        }
        let g = num.gcd(&den);
        let (mut num, mut den) = (num.exact_div(&g), den.exact_div(&g));
        let c = {
            use num_integer::Integer;
            num.content().gcd(&den.content())
        };
        num = num.div_scalar(&c);
        den = den.div_scalar(&c);
        if den.coeff(0) < BigInt::zero() {
            num = -num;
            den = -den;
        }
        RationalGf { numerator: num, denominator: den }
    }

    /// First `n` coefficients of the power series.
    pub fn series(&self, n: usize) -> Vec<BigInt> {
        self.numerator.series_div(&self.denominator, n)
    }
}

impl std::fmt::Display for RationalGf {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.denominator == IntPoly::one() {
            write!(f, "{}", self.numerator)
        } else {
            let wrap = |p: &IntPoly| {
                if p.coeffs().iter().filter(|c| !c.is_zero()).count() > 1 {
                    format!("({p})")
                } else {
                    p.to_string()
                }
            };
            write!(f, "{}/{}", wrap(&self.numerator), wrap(&self.denominator))
        }
    }
}

/// Epsilon-free nondeterministic automaton.
#[derive(Clone, Debug)]
pub struct Nfa {
    symbols: Arc<Symbols>,
    trans: Vec<Vec<Vec<u32>>>,
    accepting: Vec<bool>,
    starts: Vec<u32>,
}

impl Nfa {
    pub fn new(symbols: Arc<Symbols>, trans: Vec<Vec<Vec<u32>>>, accepting: Vec<bool>, starts: Vec<u32>) -> Result<Nfa> {
        let n = trans.len();
        if accepting.len() != n
            || starts.iter().any(|&s| s as usize >= n)
            || trans.iter().any(|row| row.len() != symbols.len() || row.iter().flatten().any(|&t| t as usize >= n))
        {
            return Err(Error::Malformed("inconsistent NFA tables".into()));
        }
        Ok(Nfa { symbols, trans, accepting, starts })
    }

    pub fn symbols(&self) -> &Arc<Symbols> {
        &self.symbols
    }

    pub fn num_states(&self) -> usize {
        self.trans.len()
    }

    pub fn accepts(&self, word: &[usize]) -> bool {
        let mut cur: Vec<u32> = self.starts.clone();
        for &s in word {
            let mut next: Vec<u32> = cur.iter().flat_map(|&q| self.trans[q as usize][s].iter().copied()).collect();
            next.sort_unstable();
            next.dedup();
            cur = next;
        }
        cur.iter().any(|&q| self.accepting[q as usize])
    }

    /// Subset construction; the empty subset is the fail state.
    pub fn determinize(&self) -> Dfa {
        let mut start = self.starts.clone();
        start.sort_unstable();
        start.dedup();
        let start = (!start.is_empty()).then_some(start);
        explore(
            self.symbols.clone(),
            start,
            |set: &Vec<u32>| set.iter().any(|&q| self.accepting[q as usize]),
            |set, s| {
                let mut next: Vec<u32> = set.iter().flat_map(|&q| self.trans[q as usize][s].iter().copied()).collect();
                next.sort_unstable();
                next.dedup();
                (!next.is_empty()).then_some(next)
            },
        )
    }
}

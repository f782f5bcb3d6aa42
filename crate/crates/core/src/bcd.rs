//! Padded-alphabet automata for synchronously fellow-travelling conjugate
//! pairs, and the map sending a conjugacy geodesic to the lexicographically
//! least partner it can reach.
//!
//! Both base alphabets are the model's generating set. The padding symbol `$`
//! is the identity element and sorts after every base letter.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::fsa::{Dfa, Nfa, Symbols};
use crate::group::GroupModel;
use crate::word::{Letter, Word};

/// Largest fellow-travel constant accepted by [`BcdConfig::new`].
pub const K_MAX: usize = 4;

pub const PAD: &str = "$";

/// `Y^$`, `B = X^$ x Y^$` and `C = X^$ x Y^$ x Y^$` for a model.
#[derive(Clone, Debug)]
pub struct PaddedAlphabet {
    letters: Vec<String>,
    single: Arc<Symbols>,
    pairs: Arc<Symbols>,
    triples: Arc<Symbols>,
}

impl PaddedAlphabet {
    pub fn new(model: &GroupModel) -> Self {
        let mut letters = model.alphabet().names().to_vec();
        letters.push(PAD.to_string());
        PaddedAlphabet {
            single: Symbols::plain(letters.clone()),
            pairs: Symbols::product(vec![letters.clone(), letters.clone()]),
            triples: Symbols::product(vec![letters.clone(), letters.clone(), letters.clone()]),
            letters,
        }
    }

    /// Index of the padding symbol.
    pub fn pad(&self) -> usize {
        self.letters.len() - 1
    }

    pub fn single(&self) -> &Arc<Symbols> {
        &self.single
    }

    pub fn pairs(&self) -> &Arc<Symbols> {
        &self.pairs
    }

    pub fn triples(&self) -> &Arc<Symbols> {
        &self.triples
    }

    pub fn unpad(&self, v: &[usize]) -> Word {
        Word::new(v.iter().filter(|&&s| s != self.pad()).map(|&s| Letter(s as u8)).collect())
    }

    /// `w` followed by padding up to `len` symbols.
    pub fn pad_to(&self, w: &Word, len: usize) -> Vec<usize> {
        let mut v: Vec<usize> = w.letters().iter().map(|l| l.index()).collect();
        v.resize(len.max(w.len()), self.pad());
        v
    }

    pub fn format(&self, v: &[usize]) -> String {
        let single = self.letters.iter().all(|n| n.chars().count() == 1);
        let toks: Vec<&str> = v.iter().map(|&s| self.letters[s].as_str()).collect();
        if single {
            toks.concat()
        } else {
            toks.join(",")
        }
    }

    pub fn parse(&self, s: &str) -> Result<Vec<usize>> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Vec::new());
        }
        let lookup = |t: &str| {
            self.letters
                .iter()
                .position(|n| n == t)
                .ok_or_else(|| Error::UnknownLetter { token: t.to_string() })
        };
        let single = self.letters.iter().all(|n| n.chars().count() == 1);
        if single && !s.contains(',') {
            s.chars().map(|c| lookup(c.encode_utf8(&mut [0; 4]))).collect()
        } else {
            s.split(',').map(|t| lookup(t.trim())).collect()
        }
    }

    /// Zips equal-length padded words into a pair word over `B`.
    pub fn zip(&self, u: &[usize], v: &[usize]) -> Result<Vec<usize>> {
        if u.len() != v.len() {
            return Err(Error::LengthMismatch(u.len(), v.len()));
        }
        Ok(u.iter().zip(v).map(|(&x, &y)| self.pairs.encode(&[x, y])).collect())
    }
}

/// Model, fellow-travel constant `K` and the conjugator ball `B(K)`.
#[derive(Clone, Debug)]
pub struct BcdConfig {
    model: GroupModel,
    k: usize,
    padded: PaddedAlphabet,
    ball: Vec<Word>,
    ball_index: HashMap<Word, usize>,
    exclude: Vec<Word>,
}

impl BcdConfig {
    pub fn new(model: GroupModel, k: usize) -> Result<Self> {
        if k > K_MAX {
            return Err(Error::ResourceCap {
                what: "fellow-travel constant K",
                requested: k as u64,
                cap: K_MAX as u64,
            });
        }
        let ball = model.ball(k)?;
        let ball_index = ball.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect();
        Ok(BcdConfig { padded: PaddedAlphabet::new(&model), model, k, ball, ball_index, exclude: Vec::new() })
    }

    /// Finite set of conjugacy geodesics removed from the padded language `S`.
    pub fn with_exclusions(mut self, words: Vec<Word>) -> Self {
        self.exclude = words;
        self
    }

    pub fn model(&self) -> &GroupModel {
        &self.model
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn padded(&self) -> &PaddedAlphabet {
        &self.padded
    }

    pub fn conjugator_ball(&self) -> &[Word] {
        &self.ball
    }

    fn letter_elem(&self, s: usize) -> Word {
        if s == self.padded.pad() {
            Word::empty()
        } else {
            Word::new(vec![Letter(s as u8)])
        }
    }

    /// A conjugator `g` in `B(K)` witnessing that `(u, v)` is a `K`-synchronous
    /// pair, checked straight from the definition: `gU = Vg` and
    /// `|V_j^-1 g U_j| <= K` for every prefix length `j`.
    pub fn bcd_witness(&self, u: &[usize], v: &[usize]) -> Result<Option<Word>> {
        if u.len() != v.len() {
            return Err(Error::LengthMismatch(u.len(), v.len()));
        }
        let m = &self.model;
        let (uu, vv) = (self.padded.unpad(u), self.padded.unpad(v));
        'outer: for g in &self.ball {
            if m.multiply(g, &uu) != m.multiply(&vv, g) {
                continue;
            }
            for j in 0..=u.len() {
                let uj = self.padded.unpad(&u[..j]);
                let vj = self.padded.unpad(&v[..j]);
                let h = m.geodesic_form(&m.alphabet().inverse_word(&vj).concat(g).concat(&uj));
                if h.len() > self.k {
                    continue 'outer;
                }
            }
            return Ok(Some(g.clone()));
        }
        Ok(None)
    }

    pub fn bcd_pair_check(&self, u: &[usize], v: &[usize]) -> Result<bool> {
        Ok(self.bcd_witness(u, v)?.is_some())
    }

    /// Automaton over `B` accepting exactly the `K`-synchronous pairs: the union
    /// over `g` in `B(K)` of copies of the ball automaton with start and accept
    /// state `g` and moves `h -> x^-1 h y`.
    /// `tau[h][sym]`: index of the reduced `x^-1 h y` when it stays in the ball.
    fn offset_table(&self) -> Vec<Vec<Option<usize>>> {
        let pairs = &self.padded.pairs;
        let m = &self.model;
        self.ball
            .iter()
            .map(|h| {
                (0..pairs.len())
                    .map(|sym| {
                        let (x, y) = (pairs.coord(sym, 0), pairs.coord(sym, 1));
                        let xi = m.inverse(&self.letter_elem(x));
                        let e = m.geodesic_form(&xi.concat(h).concat(&self.letter_elem(y)));
                        self.ball_index.get(&e).copied()
                    })
                    .collect()
            })
            .collect()
    }

    pub fn build_bcd_automaton(&self) -> Dfa {
        let pairs = self.padded.pairs.clone();
        let nb = self.ball.len();
        let tau = self.offset_table();
        // state (g, h) of copy g lives at g * nb + h
        let mut trans = vec![vec![Vec::new(); pairs.len()]; nb * nb];
        let mut accepting = vec![false; nb * nb];
        for g in 0..nb {
            accepting[g * nb + g] = true;
            for h in 0..nb {
                for (sym, t) in tau[h].iter().enumerate() {
                    if let Some(t) = t {
                        trans[g * nb + h][sym].push((g * nb + t) as u32);
                    }
                }
            }
        }
        let starts = (0..nb).map(|g| (g * nb + g) as u32).collect();
        Nfa::new(pairs, trans, accepting, starts)
            .expect("tables are consistent by construction")
            .determinize()
            .minimize()
    }

    /// Padded words `V` whose unpadding is a conjugacy geodesic not in the
    /// exclusion list.
    pub fn build_s(&self) -> Dfa {
        let mut geo = self.model.conj_geodesic_dfa();
        if !self.exclude.is_empty() {
            let words: Vec<Vec<usize>> = self.exclude.iter().map(|w| self.model.word_symbols(w)).collect();
            let finite = Dfa::from_words(geo.symbols().clone(), &words);
            geo = geo.difference(&finite).expect("same alphabet");
        }
        let pad = self.padded.pad();
        let unpad: Vec<Vec<usize>> = (0..=pad).map(|s| if s == pad { vec![] } else { vec![s] }).collect();
        geo.morphism_preimage(self.padded.single.clone(), &unpad).expect("unpad is total")
    }

    pub fn build_delta(&self) -> DeltaMachine {
        self.build_delta_with(DeltaFormula::Corrected)
    }

    /// `M & p2^-1(S)`: synchronous pairs whose second coordinate lies in `S`.
    fn partner_pairs(&self, m: &Dfa, s: &Dfa) -> Dfa {
        let s_pairs = s.inverse_projection(self.padded.pairs.clone(), &[1]).expect("coordinates match");
        m.intersection(&s_pairs).expect("same alphabet")
    }

    /// Minimal-partner machine. Its states are produced on demand by
    /// [`PartnerStepper`]; the full DFA is materialized only through
    /// [`DeltaMachine::m2`].
    pub fn build_delta_with(&self, formula: DeltaFormula) -> DeltaMachine {
        let m = self.build_bcd_automaton();
        let s = self.build_s();
        let stepper = PartnerStepper {
            pairs: self.padded.pairs.clone(),
            width: self.padded.letters.len(),
            nb: self.ball.len(),
            tau: self.offset_table(),
            s: s.clone(),
            formula,
        };
        DeltaMachine { cfg: self.clone(), m, s, stepper, m2: OnceLock::new() }
    }

    /// The same language assembled from explicit regular operations over the
    /// triple alphabet:
    /// `T1 = p12^-1(M) & p13^-1(M) & p2^-1(S) & p3^-1(S)`,
    /// `T2 = T1 & p23^-1(lex <)`, then `(M & p2^-1(S)) - p13(T2)` or
    /// `p12(T2) - p13(T2)`. The product grows quickly with `K`.
    pub fn build_delta_explicit(&self, formula: DeltaFormula) -> DeltaMachine {
        let c = self.padded.triples.clone();
        let m = self.build_bcd_automaton();
        let s = self.build_s();
        let lex = build_lex_automaton(&self.padded);
        let pre = |d: &Dfa, coords: &[usize]| d.inverse_projection(c.clone(), coords).expect("coordinates match");
        let t1 = Dfa::intersect_all(&[&pre(&m, &[0, 1]), &pre(&m, &[0, 2]), &pre(&s, &[1]), &pre(&s, &[2])])
            .expect("same alphabet");
        let t2 = t1.intersection(&pre(&lex, &[1, 2])).expect("same alphabet");
        let beaten = t2.project(&[0, 2]);
        let m2 = match formula {
            DeltaFormula::Corrected => self.partner_pairs(&m, &s).difference(&beaten),
            DeltaFormula::Literal => t2.project(&[0, 1]).difference(&beaten),
        }
        .expect("same alphabet");
        let mut dm = self.build_delta_with(formula);
        dm.m2 = OnceLock::from(Some(m2));
        dm
    }
}

/// Which expression defines the minimal-partner language.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DeltaFormula {
    /// `(M & p2^-1(S)) - p13(T2)`: every input with at least one partner keeps
    /// its least partner.
    Corrected,
    /// `p12(T2) - p13(T2)`: drops inputs whose partner is unique.
    Literal,
}

/// Comparator over `Y^$ x Y^$` accepting pairs whose first coordinate is
/// strictly lex-smaller. States: fail (= greater), undecided, less.
pub fn build_lex_automaton(pa: &PaddedAlphabet) -> Dfa {
    #[derive(Clone, PartialEq, Eq, Hash)]
    enum Cmp {
        Undecided,
        Less,
    }
    let pairs = pa.pairs.clone();
    crate::fsa::explore(
        pairs.clone(),
        Some(Cmp::Undecided),
        |c| *c == Cmp::Less,
        |c, sym| {
            let (a, b) = (pairs.coord(sym, 0), pairs.coord(sym, 1));
            match c {
                Cmp::Less => Some(Cmp::Less),
                Cmp::Undecided if a < b => Some(Cmp::Less),
                Cmp::Undecided if a == b => Some(Cmp::Undecided),
                Cmp::Undecided => None,
            }
        },
    )
    .minimize()
}

/// State budget for materializing the minimal-partner DFA.
pub const M2_STATE_BUDGET: usize = 200_000;

type PartnerKey = (Vec<u32>, Vec<u32>, Vec<u32>);

/// On-the-fly states of the minimal-partner automaton over pair symbols.
///
/// A configuration `(g, h, t)` is copy `g` of the conjugator tracker at
/// offset `h`, together with state `t` of `S` on the second coordinate. A
/// state holds the configurations of `(U, V)` itself and the union of the
/// configurations of `(U, V')` over every `V'` already lex-smaller (for the
/// literal formula, also lex-greater) than `V`. Some `V'` is accepted iff that
/// union contains an accepting configuration, so this is the determinized
/// projection of `T2` fused with the final difference.
#[derive(Clone, Debug)]
struct PartnerStepper {
    pairs: Arc<Symbols>,
    width: usize,
    nb: usize,
    tau: Vec<Vec<Option<usize>>>,
    s: Dfa,
    formula: DeltaFormula,
}

impl PartnerStepper {
    fn pack(&self, g: usize, h: usize, t: u32) -> u32 {
        ((g * self.nb + h) * self.s.num_states() + t as usize) as u32
    }

    fn unpack(&self, c: u32) -> (usize, usize, u32) {
        let (c, ns) = (c as usize, self.s.num_states());
        (c / ns / self.nb, c / ns % self.nb, (c % ns) as u32)
    }

    fn advance(&self, set: &[u32], x: usize, ys: std::ops::Range<usize>, out: &mut Vec<u32>) {
        for &c in set {
            let (g, h, t) = self.unpack(c);
            for y in ys.clone() {
                let t2 = self.s.step(t, y);
                if t2 == 0 {
                    continue;
                }
                if let Some(h2) = self.tau[h][self.pairs.encode(&[x, y])] {
                    out.push(self.pack(g, h2, t2));
                }
            }
        }
    }

    fn accepted(&self, set: &[u32]) -> bool {
        set.iter().any(|&c| {
            let (g, h, t) = self.unpack(c);
            g == h && self.s.is_accepting(t)
        })
    }

    fn start(&self) -> Option<PartnerKey> {
        let t = self.s.start();
        (t != 0).then(|| ((0..self.nb).map(|g| self.pack(g, g, t)).collect(), Vec::new(), Vec::new()))
    }

    fn accept(&self, (cur, less, greater): &PartnerKey) -> bool {
        self.accepted(cur)
            && !self.accepted(less)
            && (self.formula == DeltaFormula::Corrected || self.accepted(greater))
    }

    fn step(&self, (cur, less, greater): &PartnerKey, sym: usize) -> Option<PartnerKey> {
        fn norm(mut v: Vec<u32>) -> Vec<u32> {
            v.sort_unstable();
            v.dedup();
            v
        }
        let (x, y) = (self.pairs.coord(sym, 0), self.pairs.coord(sym, 1));
        let mut c2 = Vec::new();
        self.advance(cur, x, y..y + 1, &mut c2);
        if c2.is_empty() {
            return None;
        }
        let mut l2 = Vec::new();
        self.advance(less, x, 0..self.width, &mut l2);
        self.advance(cur, x, 0..y, &mut l2);
        let mut g2 = Vec::new();
        if self.formula == DeltaFormula::Literal {
            self.advance(greater, x, 0..self.width, &mut g2);
            self.advance(cur, x, y + 1..self.width, &mut g2);
        }
        Some((norm(c2), norm(l2), norm(g2)))
    }
}

/// Automata realizing the least-partner map.
#[derive(Clone, Debug)]
pub struct DeltaMachine {
    cfg: BcdConfig,
    /// Synchronous pairs `M`.
    pub m: Dfa,
    /// Padded conjugacy geodesics `S`.
    pub s: Dfa,
    stepper: PartnerStepper,
    m2: OnceLock<Option<Dfa>>,
}

/// Result of applying the least-partner map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaOutput {
    pub word: Word,
    pub padded: Vec<usize>,
    pub conjugator: Word,
}

impl DeltaMachine {
    pub fn config(&self) -> &BcdConfig {
        &self.cfg
    }

    pub fn formula(&self) -> DeltaFormula {
        self.stepper.formula
    }

    /// Minimal DFA of pairs `(U, V)` with `V` the least `S`-partner of `U`.
    /// Built on first use; fails once it passes [`M2_STATE_BUDGET`] states.
    pub fn m2(&self) -> Result<&Dfa> {
        let st = &self.stepper;
        self.m2
            .get_or_init(|| {
                crate::fsa::explore_capped(
                    st.pairs.clone(),
                    st.start(),
                    |k| st.accept(k),
                    |k, sym| st.step(k, sym),
                    M2_STATE_BUDGET,
                )
                .map(|d| d.minimize())
            })
            .as_ref()
            .ok_or(Error::ResourceCap {
                what: "minimal-partner automaton states",
                requested: M2_STATE_BUDGET as u64 + 1,
                cap: M2_STATE_BUDGET as u64,
            })
    }

    /// Every second coordinate `V` with `(u, V)` accepted, in lex order. Only
    /// the states reachable along `u` are visited.
    pub fn partners(&self, u: &[usize]) -> Vec<Vec<usize>> {
        let st = &self.stepper;
        let Some(start) = st.start() else { return Vec::new() };
        let mut layer = vec![start];
        // back[j][i]: predecessors (index in layer j, symbol y) of node i in layer j + 1
        let mut back: Vec<Vec<Vec<(usize, usize)>>> = Vec::with_capacity(u.len());
        for &x in u {
            let mut ids: HashMap<PartnerKey, usize> = HashMap::new();
            let mut next = Vec::new();
            let mut preds: Vec<Vec<(usize, usize)>> = Vec::new();
            for (i, key) in layer.iter().enumerate() {
                for y in 0..st.width {
                    if let Some(k2) = st.step(key, st.pairs.encode(&[x, y])) {
                        let id = *ids.entry(k2.clone()).or_insert_with(|| {
                            next.push(k2);
                            preds.push(Vec::new());
                            next.len() - 1
                        });
                        preds[id].push((i, y));
                    }
                }
            }
            back.push(preds);
            layer = next;
        }
        fn unwind(back: &[Vec<Vec<(usize, usize)>>], j: usize, i: usize, suffix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if j == 0 {
                out.push(suffix.iter().rev().copied().collect());
                return;
            }
            for &(p, y) in &back[j - 1][i] {
                suffix.push(y);
                unwind(back, j - 1, p, suffix, out);
                suffix.pop();
            }
        }
        let mut out = Vec::new();
        for (i, key) in layer.iter().enumerate() {
            if st.accept(key) {
                unwind(&back, u.len(), i, &mut Vec::new(), &mut out);
            }
        }
        out.sort();
        out
    }

    /// `unpad(V)` for the unique `V` with `(U, V)` accepted, with a witnessing conjugator.
    pub fn apply(&self, u: &Word) -> Result<DeltaOutput> {
        let model = self.cfg.model();
        if !model.is_conj_geodesic(u) {
            return Err(Error::NotConjGeodesic(model.format_word(u)));
        }
        let us = self.cfg.padded.pad_to(u, u.len());
        let found = self.partners(&us);
        let [v] = found.as_slice() else {
            return Err(Error::Invariant(format!(
                "{} accepted partners for {}",
                found.len(),
                model.format_word(u)
            )));
        };
        let conjugator = self
            .cfg
            .bcd_witness(&us, v)?
            .ok_or_else(|| Error::Invariant("accepted pair has no conjugator".into()))?;
        Ok(DeltaOutput { word: self.cfg.padded.unpad(v), padded: v.clone(), conjugator })
    }
}

/// Second coordinates accepted alongside a fixed first coordinate.
pub fn second_coordinates(pairs_dfa: &Dfa, u: &[usize]) -> Vec<Vec<usize>> {
    let sy = pairs_dfa.symbols().clone();
    let width = sy.components()[1].len();
    let n = u.len();
    // alive[j][q]: from q, the suffix u[j..] can still be completed
    let states = pairs_dfa.num_states();
    let mut alive = vec![vec![false; states]; n + 1];
    for q in 0..states {
        alive[n][q] = pairs_dfa.is_accepting(q as u32);
    }
    for j in (0..n).rev() {
        for q in 1..states {
            alive[j][q] = (0..width).any(|y| alive[j + 1][pairs_dfa.step(q as u32, sy.encode(&[u[j], y])) as usize]);
        }
    }
    let mut out = Vec::new();
    let mut path = Vec::with_capacity(n);
    fn walk(
        d: &Dfa,
        sy: &Symbols,
        u: &[usize],
        alive: &[Vec<bool>],
        q: u32,
        path: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        let j = path.len();
        if !alive[j][q as usize] {
            return;
        }
        if j == u.len() {
            out.push(path.clone());
            return;
        }
        for y in 0..sy.components()[1].len() {
            path.push(y);
            walk(d, sy, u, alive, d.step(q, sy.encode(&[u[j], y])), path, out);
            path.pop();
        }
    }
    walk(pairs_dfa, &sy, u, &alive, pairs_dfa.start(), &mut path, &mut out);
    out
}

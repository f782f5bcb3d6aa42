//! Exact growth tables: ball, conjugacy, primitive-conjugacy and
//! commensurability counts.
//!
//! Two engines: `Enumerate` walks spheres and deduplicates canonical class
//! keys (any model); `Formula` uses necklace counting over cyclically reduced
//! words (free groups only).

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{CommKey, ConjKey, GroupKind, GroupModel};
use crate::word::Word;

pub const FORMULA_CAP: usize = 30;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GrowthKind {
    Ball,
    Conj,
    Pconj,
    Comm,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Strict,
    Cumulative,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    #[serde(rename = "enum")]
    Enumerate,
    Formula,
}

macro_rules! str_enum {
    ($t:ty { $($v:ident => $s:literal),* $(,)? }) => {
        impl fmt::Display for $t {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(match self { $(Self::$v => $s),* })
            }
        }
        impl FromStr for $t {
            type Err = Error;
            fn from_str(s: &str) -> Result<Self> {
                match s {
                    $($s => Ok(Self::$v),)*
                    _ => Err(Error::Malformed(format!("unknown {} {s:?}", stringify!($t)))),
                }
            }
        }
    };
}

str_enum!(GrowthKind { Ball => "ball", Conj => "conj", Pconj => "pconj", Comm => "comm" });
str_enum!(Mode { Strict => "strict", Cumulative => "cumulative" });
str_enum!(Engine { Enumerate => "enum", Formula => "formula" });

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrowthTable {
    pub group: String,
    pub kind: GrowthKind,
    pub mode: Mode,
    pub engine: Engine,
    pub coeffs: Vec<BigUint>,
}

impl GrowthTable {
    pub fn n_max(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// Strict and cumulative forms are related by `sum s_n z^n = (1 - z) sum c_n z^n`.
    pub fn convert_mode(&self) -> Result<GrowthTable> {
        let coeffs = match self.mode {
            Mode::Strict => {
                let mut acc = BigUint::zero();
                self.coeffs
                    .iter()
                    .map(|c| {
                        acc += c;
                        acc.clone()
                    })
                    .collect()
            }
            Mode::Cumulative => {
                let mut prev = BigUint::zero();
                let mut out = Vec::with_capacity(self.coeffs.len());
                for (n, c) in self.coeffs.iter().enumerate() {
                    if *c < prev {
                        return Err(Error::NegativeDifference(n));
                    }
                    out.push(c - &prev);
                    prev = c.clone();
                }
                out
            }
        };
        let mode = match self.mode {
            Mode::Strict => Mode::Cumulative,
            Mode::Cumulative => Mode::Strict,
        };
        Ok(GrowthTable { coeffs, mode, ..self.clone() })
    }

    pub fn to_mode(&self, mode: Mode) -> Result<GrowthTable> {
        if self.mode == mode {
            Ok(self.clone())
        } else {
            self.convert_mode()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum ClassKey {
    Element(Word),
    Conj(ConjKey),
    Comm(CommKey),
}

fn class_key(model: &GroupModel, kind: GrowthKind, w: &Word) -> Option<ClassKey> {
    match kind {
        GrowthKind::Ball => Some(ClassKey::Element(w.clone())),
        GrowthKind::Conj => Some(ClassKey::Conj(model.conj_key(w))),
        GrowthKind::Pconj => model.is_primitive(w).then(|| ClassKey::Conj(model.conj_key(w))),
        GrowthKind::Comm => Some(ClassKey::Comm(model.comm_key(w))),
    }
}

/// Growth table of the requested kind for lengths `0..=n_max`.
pub fn count_growth(model: &GroupModel, kind: GrowthKind, mode: Mode, n_max: usize, engine: Engine) -> Result<GrowthTable> {
    let strict = match engine {
        Engine::Enumerate => enumerate_strict(model, kind, n_max)?,
        Engine::Formula => formula_strict(model, kind, n_max)?,
    };
    let table = GrowthTable {
        group: model.descriptor(),
        kind,
        mode: Mode::Strict,
        engine,
        coeffs: strict,
    };
    table.to_mode(mode)
}

/// Streams spheres `0..=n_max` and counts classes first met at each length.
fn enumerate_strict(model: &GroupModel, kind: GrowthKind, n_max: usize) -> Result<Vec<BigUint>> {
    let cap = model.ball_cap();
    if n_max > cap {
        return Err(Error::ResourceCap {
            what: "enumeration growth length",
            requested: n_max as u64,
            cap: cap as u64,
        });
    }
    let mut seen: HashSet<ClassKey> = HashSet::new();
    let mut out = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let shards = model.shard_prefixes(n, 2);
        let found: Vec<HashSet<ClassKey>> = shards
            .par_iter()
            .map(|prefix| -> Result<HashSet<ClassKey>> {
                let mut set = HashSet::new();
                for w in model.sphere_shard(n, prefix)? {
                    if let Some(k) = class_key(model, kind, &w) {
                        set.insert(k);
                    }
                }
                Ok(set)
            })
            .collect::<Result<_>>()?;
        let mut fresh = 0u64;
        for set in found {
            for k in set {
                if seen.insert(k) {
                    fresh += 1;
                }
            }
        }
        out.push(BigUint::from(fresh));
    }
    Ok(out)
}

fn free_rank(model: &GroupModel) -> Result<usize> {
    match model.kind() {
        GroupKind::Free { rank } => Ok(rank),
        GroupKind::FreeProduct { .. } => Err(Error::FormulaUnavailable(model.descriptor())),
    }
}

fn formula_strict(model: &GroupModel, kind: GrowthKind, n_max: usize) -> Result<Vec<BigUint>> {
    let k = free_rank(model)?;
    if n_max > FORMULA_CAP {
        return Err(Error::ResourceCap {
            what: "formula growth length",
            requested: n_max as u64,
            cap: FORMULA_CAP as u64,
        });
    }
    Ok(match kind {
        GrowthKind::Ball => (0..=n_max).map(|n| model.sphere_size(n)).collect(),
        GrowthKind::Conj => necklace_counts_free(k, n_max),
        GrowthKind::Pconj => primitive_necklace_counts_free(k, n_max),
        GrowthKind::Comm => {
            // {r, r^-1} pairs of primitive classes; r is never conjugate to r^-1
            let p = primitive_necklace_counts_free(k, n_max);
            let two = BigUint::from(2u32);
            std::iter::once(BigUint::one()).chain(p.into_iter().skip(1).map(|x| x / &two)).collect()
        }
    })
}

/// Number of cyclically reduced words of each length `0..=n_max` in `F_k`:
/// traces of powers of the non-backtracking letter transfer matrix.
pub fn cyclically_reduced_counts(k: usize, n_max: usize) -> Vec<BigUint> {
    let size = 2 * k;
    let t: Vec<Vec<u64>> = (0..size)
        .map(|x| (0..size).map(|y| u64::from(y != (x ^ 1))).collect())
        .collect();
    let mut power: Vec<Vec<BigUint>> = (0..size)
        .map(|x| (0..size).map(|y| BigUint::from(u8::from(x == y))).collect())
        .collect();
    let mut out = vec![BigUint::one()];
    for _ in 1..=n_max {
        let next: Vec<Vec<BigUint>> = (0..size)
            .map(|i| {
                (0..size)
                    .map(|j| (0..size).filter(|&m| t[m][j] != 0).map(|m| &power[i][m]).sum())
                    .collect()
            })
            .collect();
        power = next;
        out.push((0..size).map(|i| &power[i][i]).sum());
    }
    out
}

fn divisors(n: usize) -> impl Iterator<Item = usize> {
    (1..=n).filter(move |d| n.is_multiple_of(*d))
}

fn euler_phi(n: usize) -> u64 {
    (1..=n).filter(|&i| i.gcd(&n) == 1).count() as u64
}

fn mobius(mut n: usize) -> i64 {
    let mut result = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            result = -result;
        }
        p += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

/// Strict conjugacy counts of `F_k` by Burnside over rotations:
/// `(1/n) sum_{d | n} phi(d) c(n/d)`.
pub fn necklace_counts_free(k: usize, n_max: usize) -> Vec<BigUint> {
    let c = cyclically_reduced_counts(k, n_max);
    let mut out = vec![BigUint::one()];
    for n in 1..=n_max {
        let total: BigUint = divisors(n).map(|d| BigUint::from(euler_phi(d)) * &c[n / d]).sum();
        out.push(total / BigUint::from(n));
    }
    out
}

/// Strict primitive-conjugacy counts of `F_k` (aperiodic necklaces):
/// `(1/n) sum_{d | n} mu(d) c(n/d)`.
pub fn primitive_necklace_counts_free(k: usize, n_max: usize) -> Vec<BigUint> {
    let c = cyclically_reduced_counts(k, n_max);
    let mut out = vec![BigUint::zero()];
    for n in 1..=n_max {
        let (mut pos, mut neg) = (BigUint::zero(), BigUint::zero());
        for d in divisors(n) {
            match mobius(d) {
                1 => pos += &c[n / d],
                -1 => neg += &c[n / d],
                _ => {}
            }
        }
        out.push((pos - neg) / BigUint::from(n));
    }
    out
}

/// Cumulative ball sizes from the geodesic-word automaton.
pub fn ball_counts(model: &GroupModel, n_max: usize) -> Vec<BigUint> {
    let dfa = model.geodesic_dfa();
    let strict: Vec<BigUint> = if model.is_free() {
        dfa.rational_gf()
            .series(n_max + 1)
            .into_iter()
            .map(|c| c.to_biguint().expect("counts are non-negative"))
            .collect()
    } else {
        dfa.count_per_length(n_max)
    };
    let mut acc = BigUint::zero();
    strict
        .into_iter()
        .map(|c| {
            acc += c;
            acc.clone()
        })
        .collect()
}

/// Groups the primitive conjugacy classes met in the ball of radius `max_len`
/// by commensurability class.
pub fn primitive_classes_by_comm(model: &GroupModel, max_len: usize) -> Result<HashMap<CommKey, BTreeSet<ConjKey>>> {
    let mut map: HashMap<CommKey, BTreeSet<ConjKey>> = HashMap::new();
    for n in 0..=max_len {
        for w in model.enumerate_sphere(n)? {
            if model.is_primitive(&w) {
                map.entry(model.comm_key(&w)).or_default().insert(model.conj_key(&w));
            }
        }
    }
    Ok(map)
}

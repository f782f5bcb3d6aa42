//! Exact growth counting for conjugacy classes, primitive conjugacy classes and
//! commensurability classes in free groups and free products of two finite
//! cyclic groups, together with the padded-alphabet automata that pick a
//! lexicographically least conjugacy representative.

#![allow(clippy::needless_range_loop)]

pub mod bcd;
pub mod error;
pub mod fsa;
pub mod group;
pub mod growth;
pub mod io;
pub mod poly;
pub mod series;
pub mod word;

pub use error::{Error, Result};
pub use fsa::{BoolOp, Dfa, Nfa, RationalGf, Symbols};
pub use group::{CommKey, ConjKey, EnumerationCaps, GroupKind, GroupModel};
pub use growth::{Engine, GrowthKind, GrowthTable, Mode};
pub use word::{Alphabet, Letter, Word};

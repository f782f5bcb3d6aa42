use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown letter token {token:?}")]
    UnknownLetter { token: String },

    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),

    #[error("invalid group descriptor {0:?} (expected e.g. \"free:2\" or \"zm*zn:2,3\")")]
    BadDescriptor(String),

    #[error("element has finite order")]
    TorsionInput,

    #[error("resource cap exceeded: {what} (requested {requested}, cap {cap})")]
    ResourceCap {
        what: &'static str,
        requested: u64,
        cap: u64,
    },

    #[error("closed-form engine is only available for free groups, not {0}")]
    FormulaUnavailable(String),

    #[error("automata are over different symbol alphabets")]
    AlphabetMismatch,

    #[error("padded words have different lengths ({0} vs {1})")]
    LengthMismatch(usize, usize),

    #[error("word {0:?} is not of minimal length in its conjugacy class")]
    NotConjGeodesic(String),

    #[error("cumulative table decreases at n = {0}")]
    NegativeDifference(usize),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("range error: {0}")]
    RangeError(String),

    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("checksum mismatch in {}", path.display())]
    Checksum { path: PathBuf },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

/// Errors raised by the library.
///
/// `Parse` variants come from the text-format readers; everything else is a
/// domain error (bad arguments, violated preconditions, failed validation).
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid space: need n >= 2 and r >= 1, got n = {n}, r = {r}")]
    InvalidSpace { n: u32, r: u32 },

    #[error("letter {letter} out of alphabet range 1..={n}")]
    LetterOutOfRange { letter: u32, n: u32 },

    #[error("root {root} out of range 1..={r}")]
    RootOutOfRange { root: u32, r: u32 },

    #[error("space mismatch: ({0}, {1}) vs ({2}, {3})", .left.0, .left.1, .right.0, .right.1)]
    SpaceMismatch { left: (u32, u32), right: (u32, u32) },

    #[error("empty period is not allowed")]
    EmptyPeriod,

    #[error("cone {address} does not contain the point {point}")]
    ConeDoesNotContain { address: String, point: String },

    #[error("addresses {first} and {second} overlap (one is a prefix of the other)")]
    OverlappingAddresses { first: String, second: String },

    #[error("prefix code is incomplete: nothing covers {address}")]
    IncompletePrefixCode { address: String },

    #[error("cannot split a set of {cones} cones into {requested} pieces: \
             need m >= {cones} and m = {cones} mod {modulus}")]
    BadSplit { cones: usize, requested: usize, modulus: u32 },

    #[error("no Thompson-like homeomorphism exists: type {left} != type {right} (mod {modulus})")]
    TypeMismatch { left: u32, right: u32, modulus: u32 },

    #[error("clopen set is empty where a nonempty set is required")]
    EmptyClopen,

    #[error("clopen set must be a proper subset of the space")]
    ImproperClopen,

    #[error("element does not fix the point {point}")]
    PointNotFixed { point: String },

    #[error("element is not supported on the required clopen set (moves {address})")]
    NotSupported { address: String },

    #[error("point {point} does not belong to the set")]
    PointNotInSet { point: String },

    #[error("not isomorphic: the sets have different sizes ({left} vs {right})")]
    SizeMismatch { left: usize, right: usize },

    #[error("invalid bijection between the point sets")]
    InvalidBijection,

    #[error("layer cap {cap} exceeded while computing the conjugator table")]
    LayerCapExceeded { cap: usize },

    #[error("oracle inconclusive: exponent bound {bound} exceeded")]
    OracleBoundExceeded { bound: i64 },

    #[error("invalid construction data: {message}")]
    InvalidData { message: String },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

impl Error {
    /// Stable process exit code: 2 for parse errors, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse { .. } => 2,
            _ => 1,
        }
    }

    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

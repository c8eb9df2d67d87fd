use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("exponent s must be at least 1")]
    ZeroExponent,

    #[error("{p}^{s} does not fit in 64 bits")]
    ModulusOverflow { p: u64, s: u32 },

    #[error("ring mismatch: Z_{left} vs Z_{right}")]
    RingMismatch { left: u64, right: u64 },

    #[error("{value} is not a residue modulo {modulus}")]
    OutOfRange { value: u64, modulus: u64 },

    #[error("shape mismatch in {op}: {left:?} vs {right:?}")]
    ShapeMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },

    #[error("block of shape {block:?} does not fit at ({row}, {col}) in a {target:?} matrix")]
    BlockOutOfBounds {
        row: usize,
        col: usize,
        block: (usize, usize),
        target: (usize, usize),
    },

    #[error("empty vector")]
    EmptyVector,

    #[error("not a permutation: {0}")]
    InvalidPermutation(String),

    #[error("permutation of degree {degree} applied to {len} coordinates")]
    DegreeMismatch { degree: usize, len: usize },

    #[error("invalid block layout: {0}")]
    InvalidLayout(String),

    #[error("block-minor index out of range: i = {i}, j = {j}, s = {s}")]
    MinorIndex { i: usize, j: usize, s: usize },

    #[error("matrix does not have the unit-subdiagonal Hessenberg shape: {0}")]
    NotStructured(String),

    #[error("enumeration of {what} exceeds the budget of 2^{budget_log2}")]
    BudgetExceeded {
        what: &'static str,
        budget_log2: u32,
    },

    #[error("this construction needs Z_4, got Z_{p}^{s}")]
    WrongRing { p: u64, s: u32 },

    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid benchmark grid: {0}")]
    InvalidGrid(String),

    #[error(
        "operation counters disagree with the closed form for {method} at s = {s}: \
         counted big {counted_big:?} and small {counted_small:?} (mults, adds), \
         predicted {predicted_big} big and {predicted_small} small pairs"
    )]
    CounterMismatch {
        method: &'static str,
        s: u32,
        counted_big: (u64, u64),
        counted_small: (u64, u64),
        predicted_big: u64,
        predicted_small: u64,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

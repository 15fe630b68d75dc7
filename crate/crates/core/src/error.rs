use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unsupported radix {0}; expected one of 3, 4, 5, 6")]
    UnsupportedRadix(u32),
    #[error("radix mismatch: {left} vs {right}")]
    RadixMismatch { left: u32, right: u32 },
    #[error("`{0}` is not of the form ±ξ^k")]
    NotAUnitRoot(String),
    #[error("`{value}` is not divisible by {divisor}")]
    NotDivisible { value: String, divisor: i64 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("entry {index} (`{value}`) is not a sign value ξ^k")]
    NotASign { index: usize, value: String },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("size limit exceeded: {size} > {limit}")]
    SizeLimit { size: usize, limit: usize },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unknown permutation name `{0}`")]
    UnknownName(String),
    #[error("column indices do not form a permutation")]
    NotAPermutation,
    #[error("spectrum is not flat at index {index} (`{value}`)")]
    NotFlat { index: usize, value: String },
    #[error("spectrum is not strict at index {index} (`{value}`)")]
    NotStrict { index: usize, value: String },
    #[error("strict spectra require an even number of variables, got n = {0}")]
    OddVariableCount(usize),
    #[error("negated sign has entry {index} (`{value}`) outside the value set")]
    NotAFunction { index: usize, value: String },
    #[error("seed produced {0} distinct functions, expected 18")]
    DegenerateSeed(usize),
    #[error("function is not bent: {0}")]
    NotBent(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
}

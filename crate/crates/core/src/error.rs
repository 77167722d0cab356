use alloc::string::String;
use alloc::vec::Vec;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("{0} is not a supported field order (need a prime or 2^m with m <= 16)")]
    UnsupportedFieldOrder(u64),
    #[error("modulus {0:#x} is not irreducible")]
    ReducibleModulus(u32),
    #[error("value {value:#x} is not a canonical element of GF({q})")]
    ContextMismatch { value: u64, q: u32 },
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("{n} does not divide q - 1 = {group_order}")]
    NoRootOfUnity { n: u64, group_order: u64 },
    #[error("division by the zero polynomial")]
    ZeroPolynomialDivisor,
    #[error("repeated abscissa {0:#x}")]
    RepeatedAbscissa(u32),
    #[error("part {index} has degree {degree}, limit is {limit}")]
    DegreeViolation { index: usize, degree: usize, limit: usize },
    #[error("{0}")]
    InvalidParameters(String),
    #[error("expected length {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("index {index} out of range (limit {limit})")]
    IndexOutOfRange { index: usize, limit: usize },
    #[error("linear system is inconsistent")]
    Inconsistent,
    #[error("linear system is underdetermined: rank {rank} < {unknowns} unknowns")]
    Underdetermined { rank: usize, unknowns: usize },
    #[error("need at least {needed} helpers, got {got}")]
    InsufficientHelpers { needed: usize, got: usize },
    #[error("helper {0} listed twice")]
    DuplicateHelper(usize),
    #[error("helper {helper} is not in the local group of node {failed}")]
    CrossGroupHelper { helper: usize, failed: usize },
    #[error("node {0} cannot help repair itself")]
    SelfHelper(usize),
    #[error("dependency kernel has dimension {found}, expected K = {expected}")]
    KernelDimension { expected: usize, found: usize },
    #[error("K = {k} is not rate-optimal; nearest valid values: {candidates:?}")]
    NotRateOptimal { k: usize, candidates: Vec<usize> },
    #[error("code has dimension zero")]
    ZeroDimensional,
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameters(msg.into())
}

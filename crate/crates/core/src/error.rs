use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("p must be prime (got {0})")]
    NotPrime(u32),
    #[error("p = {0} exceeds the supported range")]
    PrimeTooLarge(u32),
    #[error("mismatched primes: {0} vs {1}")]
    PrimeMismatch(u32, u32),
    #[error("expected {expected} entries, found {found}")]
    Arity { expected: usize, found: usize },
    #[error("coefficient overflow in cyclotomic arithmetic")]
    Overflow,
    #[error("{0} is not a unit modulo {1}")]
    NotAUnit(i64, u32),
    #[error("index {index} out of range for p = {p}")]
    IndexOutOfRange { index: usize, p: u32 },
    #[error("inner product sum is not divisible by p")]
    NonIntegralInnerProduct,
    #[error("value at g^{0} is not divisible by p")]
    NonIntegral(usize),
    #[error("image is not a permutation: {0}")]
    NotABijection(String),
    #[error("cannot parse isometry literal: {0}")]
    Parse(String),
    #[error("isometry is not perfect: {0}")]
    NotPerfect(String),
    #[error("{mode} enumeration is limited to p <= {bound} (got p = {p})")]
    Infeasible { p: u32, mode: &'static str, bound: u32 },
}

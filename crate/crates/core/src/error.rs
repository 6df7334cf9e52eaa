use thiserror::Error;

/// Errors raised while building or analysing sequences.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{value} is outside the supported range: {constraint}")]
    OutOfRange {
        value: u64,
        constraint: &'static str,
    },

    #[error("p = {0} is not an odd prime")]
    NotOddPrime(u64),

    #[error("f = {f} must be even, positive and divide p - 1 = {p_minus_1}")]
    BadF { f: u64, p_minus_1: u64 },

    #[error("n = {0} must be at least 1")]
    BadExponent(u32),

    #[error("2p^n does not fit below 2^63 (p = {p}, n = {n})")]
    ModulusTooLarge { p: u64, n: u32 },

    #[error("b = {b} must satisfy 0 <= b < p^(n-1) f = {limit}")]
    BadShift { b: u64, limit: u64 },

    #[error("g = {g} is not an odd primitive root modulo {modulus}")]
    BadGenerator { g: u64, modulus: u64 },

    #[error("{a} and {m} are not coprime")]
    NotCoprime { a: u64, m: u64 },

    #[error("{x} is not a unit modulo {modulus}")]
    NotAUnit { x: u64, modulus: u64 },

    #[error("level {level} is outside 1..={n}")]
    BadLevel { level: u32, n: u32 },

    #[error("gcd of two zero polynomials is undefined")]
    ZeroGcd,

    #[error("division by the zero polynomial")]
    DivisionByZero,

    #[error("extension degree m = {m} exceeds the supported maximum of 64")]
    FieldTooLarge { m: u64 },

    #[error("field element {0:#x} does not belong to this field")]
    ForeignElement(u64),

    #[error("conjecture hypothesis not satisfied: {0}")]
    HypothesisNotSatisfied(&'static str),

    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("extension degree {0} is outside the supported range 2..=24")]
    UnsupportedDegree(u32),

    #[error("modulus {modulus:#x} has degree {found}, expected {expected}")]
    DegreeMismatch { expected: u32, found: u32, modulus: u64 },

    #[error("modulus {0:#x} is reducible over GF(2)")]
    ReducibleModulus(u64),

    #[error("division by zero")]
    DivisionByZero,

    #[error("degenerate quadratic: both leading coefficients vanish")]
    DegenerateEquation,

    #[error("element {0:#x} has absolute trace 0; the tower needs a trace-1 element")]
    BadTrace(u32),

    #[error("element {0:#x} is not in GF(q)")]
    NotInField(u32),

    #[error("argument is not a (q+1)-st root of unity")]
    NotOnMu,

    #[error("{d} does not divide q - 1 = {order}")]
    BadDivisor { d: u64, order: u64 },

    #[error("alpha and beta must both be nonzero")]
    ZeroCoefficient,

    #[error("substitution would not terminate: replacement has degree {rep} >= {mono} in the rewritten variables")]
    NonTerminating { mono: u32, rep: u32 },

    #[error("polynomial has degree 0 in {0}")]
    ZeroDegree(String),

    #[error("inexact division")]
    InexactDivision,

    #[error("exponent overflow in monomial arithmetic")]
    ExponentOverflow,

    #[error("unknown variable {0:?}")]
    UnknownVariable(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("projected work {projected} exceeds budget {budget}")]
    ResourceLimit { projected: u64, budget: u64 },

    #[error("case id {0} is not in 1..=5")]
    BadCase(u8),
}

pub type Result<T> = std::result::Result<T, Error>;

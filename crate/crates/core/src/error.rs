use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("polynomial has degree zero")]
    DegreeZero,
    #[error("polynomial is not monic")]
    NotMonic,
    #[error("polynomial is not squarefree")]
    NotSquarefree,
    #[error("no real root above 1 at rank {rank} ({real_roots} real roots found)")]
    NoRealRootAboveOne { rank: usize, real_roots: usize },
    #[error("division by zero")]
    DivisionByZero,
    #[error("element is a zero divisor modulo the defining polynomial")]
    NotInvertible,
    #[error("element has {got} coefficients, field degree is {expected}")]
    DegreeMismatch { expected: usize, got: usize },
    #[error("base must satisfy 1 < beta <= m + 1 (m = {m})")]
    BaseOutOfRange { m: u32 },
    #[error("digit bound m must be at least 1")]
    InvalidDigitBound,
    #[error("point lies outside the interval [0, m/(beta-1)]")]
    OutsideInterval,
    #[error("invalid expansion rule: {0}")]
    InvalidRule(String),
    #[error("transition matrix is zero or empty")]
    ZeroMatrix,
    #[error("condition 1 is not established ({0})")]
    Condition1NotEstablished(String),
    #[error("enumeration of {count} words exceeds the limit of {limit}")]
    TooLarge { count: u128, limit: u128 },
    #[error("need at least two points to compute gaps")]
    TooFewPoints,
    #[error("invalid orbit graph: {0}")]
    InvalidGraph(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("refinement cap of {0} rounds exceeded while comparing elements")]
    RefinementCap(usize),
}

pub type Result<T> = std::result::Result<T, Error>;

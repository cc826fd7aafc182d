//! Error types shared across the crate.

use thiserror::Error;

/// Syntax errors carry the byte offset of the offending token.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at position {pos}: {msg}")]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

impl ParseError {
    pub fn new(pos: usize, msg: impl Into<String>) -> Self {
        ParseError { pos, msg: msg.into() }
    }
}

/// Domain errors for ordinal, sigma, codec and phi operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("left subtraction undefined: {minuend} < {subtrahend}")]
    SubLeftUnderflow { subtrahend: String, minuend: String },
    #[error("kappa must be an infinite cardinal (aleph level), got {0}")]
    FiniteKappa(String),
    #[error("atom level {level} above the configured maximum {max}")]
    LevelOverflow { level: u32, max: u32 },
    #[error("delta' undefined: normal form of {delta} has {reason}")]
    DeltaPrimeUndefined { delta: String, reason: String },
    #[error("{arg} out of domain: expected {expected}, got {got}")]
    OutOfDomain { arg: &'static str, expected: String, got: String },
    #[error("pattern out of range: {0}")]
    PatternOutOfRange(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("no witness below the requested bound {bound}")]
    WitnessBoundInfeasible { bound: String },
}

/// Errors from the topology laboratory.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TopoError {
    #[error("malformed space document: {0}")]
    Document(String),
    #[error("family is not a topology: {0}")]
    NotATopology(String),
    #[error("space too large for exhaustive search: {what} = {got}, cap = {cap}")]
    SizeCap { what: &'static str, got: usize, cap: usize },
    #[error("space is not regular: {0}")]
    NotRegular(String),
    #[error("unknown point name {0:?}")]
    UnknownPoint(String),
    #[error("family member {0} is not open in this space")]
    NotOpen(String),
    #[error("covering hypothesis fails: no family member contains the closure of {0}")]
    HypothesisFails(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("step budget exhausted after {0} steps")]
    StepBudget(usize),
}

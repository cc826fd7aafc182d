//! Exact symbolic machinery for canonical kappa-functions on ordinal
//! notations, together with a desk-scale topology laboratory for
//! Shapirovskii pi-bases, free sequences and cardinal invariants.
//!
//! The crate has two halves:
//!
//! - **Ordinal side** — [`term::OrdinalTerm`] is a Cantor-normal-form
//!   notation with cardinal atoms `w1..wk`; [`sigma`] computes the
//!   sigma-normal form, the pressing-down `gamma` and the derived interval
//!   endpoint; [`codec`] provides the pairing bijection and the block
//!   surjections `f_delta` with constructive witnesses; [`phi`] assembles
//!   them into the canonical kappa-function `phi` and realizes its
//!   below-every-block surjectivity witness.
//! - **Topology side** — [`topo`] holds finite spaces given by explicit open
//!   families, the rational-line and ordinal-interval oracles, cardinal
//!   invariant calculators, the free-sequence/covering dichotomy extractor,
//!   and the stagewise pi-base builder with its condition checkers.
//!
//! Everything is exact: no floats, arbitrary-precision coefficients, and
//! deterministic outputs (sampling operations take explicit seeds).

pub mod arith;
pub mod cardinal;
pub mod codec;
pub mod error;
pub mod parse;
pub mod phi;
pub mod sample;
pub mod sigma;
pub mod term;
pub mod topo;

pub use cardinal::{CardinalLevel, DEFAULT_MAX_LEVEL, HARD_MAX_LEVEL};
pub use error::{Error, ParseError, TopoError};
pub use term::{Monomial, OrdinalTerm};

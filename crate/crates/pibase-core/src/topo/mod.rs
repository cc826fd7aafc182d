//! Desk-scale topology laboratory: finite spaces, cardinal invariants, free
//! sequences, the covering dichotomy, and the stagewise pi-base builder.

pub mod build;
pub mod free;
pub mod invariants;
pub mod lemma24;
pub mod oracle;
pub mod space;

pub use build::{build_prefix, def21_check, BuildOptions, Def21Report, PiBasePrefix, PrefixDoc};
pub use free::{is_free_sequence, left_separated_order, max_free_sequence};
pub use invariants::{invariants, min_pibase_order, point_order, InvariantReport, SearchCaps};
pub use lemma24::{
    enumerate_topologies, lemma24_bruteforce, lemma24_extract, BruteReport, Lemma24Outcome,
};
pub use oracle::{BuilderSpace, FiniteOracle, OrdinalInterval, RationalLine};
pub use space::{FiniteSpace, Mask};

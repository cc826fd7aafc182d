//! Cardinality values: finite sizes and aleph levels.

use std::fmt;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::Error;

/// Default bound on atom levels: terms may mention `w1`..`w5` out of the box.
pub const DEFAULT_MAX_LEVEL: u32 = 5;

/// Hard representational bound on atom levels, independent of configuration.
pub const HARD_MAX_LEVEL: u32 = 32;

/// The cardinality of an ordinal: either a finite size or an aleph.
///
/// `Aleph(0)` is the countable cardinal (the value `w` viewed as a cardinal),
/// `Aleph(k)` for `k >= 1` is the cardinal `wk`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CardinalLevel {
    Finite(BigUint),
    Aleph(u32),
}

impl CardinalLevel {
    pub fn finite(n: u64) -> Self {
        CardinalLevel::Finite(BigUint::from(n))
    }

    pub fn aleph(k: u32) -> Self {
        CardinalLevel::Aleph(k)
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, CardinalLevel::Aleph(_))
    }

    /// The aleph index, if infinite.
    pub fn aleph_level(&self) -> Option<u32> {
        match self {
            CardinalLevel::Aleph(k) => Some(*k),
            CardinalLevel::Finite(_) => None,
        }
    }

    /// Requires an infinite level (the kappa parameter of every sigma/phi
    /// operation), with a level check against `max_level`.
    pub fn require_infinite(&self, max_level: u32) -> Result<u32, Error> {
        match self {
            CardinalLevel::Aleph(k) if *k <= max_level => Ok(*k),
            CardinalLevel::Aleph(k) => Err(Error::LevelOverflow { level: *k, max: max_level }),
            CardinalLevel::Finite(n) => Err(Error::FiniteKappa(n.to_string())),
        }
    }
}

impl PartialOrd for CardinalLevel {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for CardinalLevel {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        use CardinalLevel::*;
        match (self, other) {
            (Finite(a), Finite(b)) => a.cmp(b),
            (Finite(_), Aleph(_)) => std::cmp::Ordering::Less,
            (Aleph(_), Finite(_)) => std::cmp::Ordering::Greater,
            (Aleph(a), Aleph(b)) => a.cmp(b),
        }
    }
}

impl fmt::Display for CardinalLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CardinalLevel::Finite(n) => write!(f, "finite({n})"),
            CardinalLevel::Aleph(k) => write!(f, "aleph_{k}"),
        }
    }
}

//! Ordinal notations: Cantor normal form base `w` with cardinal atoms.
//!
//! A term is a finite descending sum of monomials `w^e * c` where the
//! exponents are themselves terms and the coefficients are positive naturals.
//! The atoms `w1, w2, ...` stand for the uncountable cardinals; since every
//! uncountable cardinal is an epsilon number (`w^wk = wk`), the atom is its
//! own Cantor normal form and the representation would otherwise regress.
//! The normalizer identifies the one-monomial sum `w^wk * 1` with the atom
//! `wk` itself, so every value in the system has exactly one representation.
//!
//! Values are immutable; all operations are pure functions, so terms can be
//! shared freely across threads.

use std::borrow::Cow;
use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::cardinal::CardinalLevel;

/// One monomial `w^exp * coeff` of a Cantor normal form; `coeff >= 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub exp: OrdinalTerm,
    pub coeff: BigUint,
}

impl Monomial {
    pub fn new(exp: OrdinalTerm, coeff: impl Into<BigUint>) -> Self {
        let coeff = coeff.into();
        debug_assert!(!coeff.is_zero(), "monomial coefficients are positive");
        Monomial { exp, coeff }
    }
}

/// An exact ordinal notation in canonical form.
///
/// Invariants (maintained by every constructor and operation):
/// - `Sum` exponents are strictly decreasing and coefficients positive;
/// - the empty `Sum` denotes 0;
/// - the value `wk` is always the leaf `Atom(k)`, never `Sum([w^wk * 1])`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum OrdinalTerm {
    /// The cardinal `wk`, `k >= 1`.
    Atom(u32),
    /// `w^e0*c0 + ... + w^em*cm` with `e0 > e1 > ... > em`.
    Sum(Vec<Monomial>),
}

impl OrdinalTerm {
    pub fn zero() -> Self {
        OrdinalTerm::Sum(Vec::new())
    }

    pub fn one() -> Self {
        Self::from_nat(1u32)
    }

    pub fn omega() -> Self {
        OrdinalTerm::Sum(vec![Monomial::new(Self::one(), 1u32)])
    }

    /// The cardinal `wk`; panics on `k = 0` (that value is just `w`).
    pub fn atom(k: u32) -> Self {
        assert!(k >= 1, "atom levels start at 1; omega itself is w^1");
        OrdinalTerm::Atom(k)
    }

    pub fn from_nat(n: impl Into<BigUint>) -> Self {
        let n = n.into();
        if n.is_zero() {
            Self::zero()
        } else {
            OrdinalTerm::Sum(vec![Monomial { exp: Self::zero(), coeff: n }])
        }
    }

    /// `w^e`, collapsing `w^wk` to the atom `wk`.
    pub fn omega_pow(e: OrdinalTerm) -> Self {
        match e {
            OrdinalTerm::Atom(k) => OrdinalTerm::Atom(k),
            e => OrdinalTerm::Sum(vec![Monomial::new(e, 1u32)]),
        }
    }

    /// Builds a term from a descending monomial list, applying the atom
    /// identification. Debug builds verify the descending invariant.
    pub(crate) fn from_monomials(monomials: Vec<Monomial>) -> Self {
        debug_assert!(
            monomials.windows(2).all(|w| w[0].exp > w[1].exp),
            "monomial exponents must strictly decrease"
        );
        debug_assert!(monomials.iter().all(|m| !m.coeff.is_zero()));
        if monomials.len() == 1 && monomials[0].coeff.is_one() {
            if let OrdinalTerm::Atom(k) = monomials[0].exp {
                return OrdinalTerm::Atom(k);
            }
        }
        OrdinalTerm::Sum(monomials)
    }

    /// The monomial view; atoms read as the single monomial `w^wk * 1`.
    pub(crate) fn monomials(&self) -> Cow<'_, [Monomial]> {
        match self {
            OrdinalTerm::Sum(ms) => Cow::Borrowed(ms.as_slice()),
            OrdinalTerm::Atom(k) => {
                Cow::Owned(vec![Monomial::new(OrdinalTerm::Atom(*k), 1u32)])
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, OrdinalTerm::Sum(ms) if ms.is_empty())
    }

    /// A successor ordinal: nonzero with a finite last monomial.
    pub fn is_successor(&self) -> bool {
        match self {
            OrdinalTerm::Atom(_) => false,
            OrdinalTerm::Sum(ms) => ms.last().is_some_and(|m| m.exp.is_zero()),
        }
    }

    /// A limit ordinal: nonzero and not a successor.
    pub fn is_limit(&self) -> bool {
        !self.is_zero() && !self.is_successor()
    }

    /// The natural number value, if finite.
    pub fn as_nat(&self) -> Option<&BigUint> {
        match self {
            OrdinalTerm::Sum(ms) if ms.is_empty() => Some(nat_zero()),
            OrdinalTerm::Sum(ms) if ms.len() == 1 && ms[0].exp.is_zero() => Some(&ms[0].coeff),
            _ => None,
        }
    }

    /// Predecessor of a successor ordinal.
    pub fn pred(&self) -> Option<OrdinalTerm> {
        if !self.is_successor() {
            return None;
        }
        let mut ms = self.monomials().into_owned();
        let last = ms.last_mut().expect("successor is nonzero");
        if last.coeff.is_one() {
            ms.pop();
        } else {
            last.coeff -= 1u32;
        }
        Some(OrdinalTerm::from_monomials(ms))
    }

    /// The largest atom level appearing anywhere in the term, 0 if none.
    pub fn max_atom_level(&self) -> u32 {
        match self {
            OrdinalTerm::Atom(k) => *k,
            OrdinalTerm::Sum(ms) => ms.iter().map(|m| m.exp.max_atom_level()).max().unwrap_or(0),
        }
    }

    /// Exact cardinality: `finite(n)` below `w`, otherwise the aleph of the
    /// largest atom level mentioned (countable if none).
    pub fn cardinality(&self) -> CardinalLevel {
        if let Some(n) = self.as_nat() {
            CardinalLevel::Finite(n.clone())
        } else {
            CardinalLevel::Aleph(self.max_atom_level())
        }
    }

    /// Cofinality as an ordinal: 0, 1, or a regular cardinal (`w` or `wk`).
    ///
    /// For a limit the last monomial decides: `cf(x + w^e * c) = cf(w^e)`,
    /// `cf(w^(e+1)) = w`, and `cf(w^e) = cf(e)` for `e` limit; the atoms are
    /// regular, `cf(wk) = wk`.
    pub fn cofinality(&self) -> OrdinalTerm {
        match self {
            OrdinalTerm::Atom(k) => OrdinalTerm::Atom(*k),
            OrdinalTerm::Sum(ms) => match ms.last() {
                None => OrdinalTerm::zero(),
                Some(m) if m.exp.is_zero() => OrdinalTerm::one(),
                Some(m) if m.exp.is_successor() => OrdinalTerm::omega(),
                Some(m) => m.exp.cofinality(),
            },
        }
    }

    /// Structural size, used by enumerators and samplers to rank terms.
    pub fn size(&self) -> usize {
        match self {
            OrdinalTerm::Atom(_) => 1,
            OrdinalTerm::Sum(ms) => {
                1 + ms
                    .iter()
                    .map(|m| m.exp.size() + (m.coeff.bits() as usize / 8))
                    .sum::<usize>()
            }
        }
    }
}

fn nat_zero() -> &'static BigUint {
    use std::sync::OnceLock;
    static ZERO: OnceLock<BigUint> = OnceLock::new();
    ZERO.get_or_init(BigUint::zero)
}

impl Ord for OrdinalTerm {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (OrdinalTerm::Atom(a), OrdinalTerm::Atom(b)) => a.cmp(b),
            _ => {
                let am = self.monomials();
                let bm = other.monomials();
                for (x, y) in am.iter().zip(bm.iter()) {
                    match x.exp.cmp(&y.exp) {
                        Ordering::Equal => {}
                        ord => return ord,
                    }
                    match x.coeff.cmp(&y.coeff) {
                        Ordering::Equal => {}
                        ord => return ord,
                    }
                }
                am.len().cmp(&bm.len())
            }
        }
    }
}

impl PartialOrd for OrdinalTerm {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Canonical printer for the expression grammar: descending monomials joined
/// by ` + `, e.g. `w1*2 + w^2 + 3`. Exponents that are not a single token
/// are parenthesized: `w^(w1+1)*2`.
impl fmt::Display for OrdinalTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrdinalTerm::Atom(k) => write!(f, "w{k}"),
            OrdinalTerm::Sum(ms) if ms.is_empty() => write!(f, "0"),
            OrdinalTerm::Sum(ms) => {
                for (i, m) in ms.iter().enumerate() {
                    if i > 0 {
                        write!(f, " + ")?;
                    }
                    write_monomial(f, m)?;
                }
                Ok(())
            }
        }
    }
}

fn write_monomial(f: &mut fmt::Formatter<'_>, m: &Monomial) -> fmt::Result {
    if m.exp.is_zero() {
        return write!(f, "{}", m.coeff);
    }
    if m.exp == OrdinalTerm::one() {
        write!(f, "w")?;
    } else if let OrdinalTerm::Atom(k) = m.exp {
        write!(f, "w{k}")?;
    } else if m.exp.as_nat().is_some() {
        write!(f, "w^{}", m.exp)?;
    } else if m.exp == OrdinalTerm::omega() {
        write!(f, "w^w")?;
    } else {
        write!(f, "w^({})", m.exp)?;
    }
    if !m.coeff.is_one() {
        write!(f, "*{}", m.coeff)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_atom_identification() {
        let w1 = OrdinalTerm::atom(1);
        assert_eq!(OrdinalTerm::omega_pow(w1.clone()), w1);
        let collapsed = OrdinalTerm::from_monomials(vec![Monomial::new(w1.clone(), 1u32)]);
        assert_eq!(collapsed, w1);
    }

    #[test]
    fn ordering_basics() {
        let w = OrdinalTerm::omega();
        let w1 = OrdinalTerm::atom(1);
        let five = OrdinalTerm::from_nat(5u32);
        assert!(OrdinalTerm::zero() < five);
        assert!(five < w);
        assert!(w < w1);
        assert!(w1 < OrdinalTerm::atom(2));
    }

    #[test]
    fn successor_limit_classification() {
        assert!(!OrdinalTerm::zero().is_successor());
        assert!(!OrdinalTerm::zero().is_limit());
        assert!(OrdinalTerm::one().is_successor());
        assert!(OrdinalTerm::omega().is_limit());
        assert!(OrdinalTerm::atom(3).is_limit());
        assert_eq!(OrdinalTerm::one().pred(), Some(OrdinalTerm::zero()));
    }

    #[test]
    fn cardinality_examples() {
        // w^w is countable; w2*w + w1 has cardinality aleph_2; 7 is finite.
        let ww = OrdinalTerm::omega_pow(OrdinalTerm::omega());
        assert_eq!(ww.cardinality(), CardinalLevel::Aleph(0));
        assert_eq!(OrdinalTerm::from_nat(7u32).cardinality(), CardinalLevel::finite(7));
    }

    #[test]
    fn cofinality_examples() {
        assert_eq!(OrdinalTerm::zero().cofinality(), OrdinalTerm::zero());
        assert_eq!(OrdinalTerm::from_nat(9u32).cofinality(), OrdinalTerm::one());
        assert_eq!(OrdinalTerm::atom(1).cofinality(), OrdinalTerm::atom(1));
    }
}

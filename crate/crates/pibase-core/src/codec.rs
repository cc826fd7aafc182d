//! Pairing bijections and finite-set codecs on ordinal notations, and the
//! block surjections `f_delta` with constructive surjectivity witnesses.
//!
//! The term pairing interleaves the two Cantor normal forms position by
//! position: the code's monomials live on the union of the exponents, and at
//! each exponent the two coefficients are fused by the Rosenberg-Strong
//! pairing on naturals. This gives a total bijection terms x terms -> terms
//! with the two properties everything downstream leans on:
//!
//! 1. `pair(a, b) >= max(a, b)`;
//! 2. cardinal closure: if `a, b < wk` then `pair(a, b) < wk`, and finite
//!    inputs give a finite code.
//!
//! Finite patterns are coded as length-prefixed iterated pairs. Coordinates
//! are taken relative to a base point via left subtraction and then coded by
//! a structural numbering of the notation tree (built from the same pairing
//! on naturals), so a pattern's code is always small enough to fit in the
//! block that must reach it; index coordinates ride along as plain terms, so
//! the closure property above is inherited. Decoding is total: anything
//! ill-formed decodes to the empty pattern.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::arith::cardinal_term;
use crate::cardinal::{CardinalLevel, HARD_MAX_LEVEL};
use crate::error::Error;
use crate::sigma::{delta_prime_of_nf, gamma_of_nf, sigma_nf};
use crate::term::{Monomial, OrdinalTerm};

/// Longest list accepted by the pattern decoder.
const MAX_PATTERN_LEN: u64 = 4096;

// ---------------------------------------------------------------------------
// Pairing on naturals (Rosenberg-Strong): rs(x, y) = m^2 + m + x - y, m = max.
// ---------------------------------------------------------------------------

pub(crate) fn nat_pair(x: &BigUint, y: &BigUint) -> BigUint {
    let m = x.max(y);
    m * m + m + x - y
}

pub(crate) fn nat_unpair(z: &BigUint) -> (BigUint, BigUint) {
    let m = z.sqrt();
    let m2 = &m * &m;
    let d = z - &m2;
    if d <= m {
        (d, m)
    } else {
        let y = &m2 + 2u32 * &m - z;
        (m, y)
    }
}

// ---------------------------------------------------------------------------
// Pairing on terms.
// ---------------------------------------------------------------------------

/// The pairing bijection on terms. `pair(a, b) >= max(a, b)`, and the code
/// stays below every cardinal both inputs are below.
pub fn pair(a: &OrdinalTerm, b: &OrdinalTerm) -> OrdinalTerm {
    let am = a.monomials();
    let bm = b.monomials();
    let mut out: Vec<Monomial> = Vec::with_capacity(am.len() + bm.len());
    let (mut i, mut j) = (0, 0);
    let zero = BigUint::zero();
    while i < am.len() || j < bm.len() {
        let order = match (am.get(i), bm.get(j)) {
            (Some(x), Some(y)) => x.exp.cmp(&y.exp).reverse(),
            (Some(_), None) => std::cmp::Ordering::Less,
            (None, Some(_)) => std::cmp::Ordering::Greater,
            (None, None) => unreachable!(),
        };
        let (exp, cx, cy) = match order {
            std::cmp::Ordering::Less => {
                let x = &am[i];
                i += 1;
                (x.exp.clone(), &x.coeff, &zero)
            }
            std::cmp::Ordering::Greater => {
                let y = &bm[j];
                j += 1;
                (y.exp.clone(), &zero, &y.coeff)
            }
            std::cmp::Ordering::Equal => {
                let (x, y) = (&am[i], &bm[j]);
                i += 1;
                j += 1;
                (x.exp.clone(), &x.coeff, &y.coeff)
            }
        };
        out.push(Monomial { exp, coeff: nat_pair(cx, cy) });
    }
    OrdinalTerm::from_monomials(out)
}

/// Inverse of [`pair`]; total on all terms.
pub fn unpair(c: &OrdinalTerm) -> (OrdinalTerm, OrdinalTerm) {
    let mut xs: Vec<Monomial> = Vec::new();
    let mut ys: Vec<Monomial> = Vec::new();
    for m in c.monomials().iter() {
        let (cx, cy) = nat_unpair(&m.coeff);
        if !cx.is_zero() {
            xs.push(Monomial { exp: m.exp.clone(), coeff: cx });
        }
        if !cy.is_zero() {
            ys.push(Monomial { exp: m.exp.clone(), coeff: cy });
        }
    }
    (OrdinalTerm::from_monomials(xs), OrdinalTerm::from_monomials(ys))
}

// ---------------------------------------------------------------------------
// Structural numbering of notation trees (total injection into the naturals,
// with a validating partial inverse).
// ---------------------------------------------------------------------------

pub(crate) fn term_code(t: &OrdinalTerm) -> BigUint {
    match t {
        // odd codes for atoms
        OrdinalTerm::Atom(k) => BigUint::from(2 * k - 1),
        // even codes for sums
        OrdinalTerm::Sum(ms) => 2u32 * list_code(ms),
    }
}

fn list_code(ms: &[Monomial]) -> BigUint {
    match ms.split_first() {
        None => BigUint::zero(),
        Some((m, rest)) => {
            let head = nat_pair(&term_code(&m.exp), &(&m.coeff - 1u32));
            nat_pair(&head, &list_code(rest)) + 1u32
        }
    }
}

pub(crate) fn term_decode(code: &BigUint) -> Option<OrdinalTerm> {
    if code.bit(0) {
        let k = ((code + 1u32) / 2u32).to_u32()?;
        if k == 0 || k > HARD_MAX_LEVEL {
            return None;
        }
        Some(OrdinalTerm::Atom(k))
    } else {
        let ms = list_decode(&(code / 2u32), 0)?;
        // reject the non-canonical spelling of an atom
        if ms.len() == 1 && ms[0].coeff.is_one() {
            if let OrdinalTerm::Atom(_) = ms[0].exp {
                return None;
            }
        }
        Some(OrdinalTerm::Sum(ms))
    }
}

fn list_decode(code: &BigUint, depth: usize) -> Option<Vec<Monomial>> {
    if depth > 256 {
        return None;
    }
    if code.is_zero() {
        return Some(Vec::new());
    }
    let (head, rest) = nat_unpair(&(code - 1u32));
    let (exp_code, coeff_minus_one) = nat_unpair(&head);
    let exp = term_decode(&exp_code)?;
    let coeff = coeff_minus_one + 1u32;
    let tail = list_decode(&rest, depth + 1)?;
    if let Some(first) = tail.first() {
        if first.exp >= exp {
            return None; // exponents must strictly decrease
        }
    }
    let mut out = Vec::with_capacity(tail.len() + 1);
    out.push(Monomial { exp, coeff });
    out.extend(tail);
    Some(out)
}

// ---------------------------------------------------------------------------
// Finite patterns.
// ---------------------------------------------------------------------------

/// A pair `(first, second)` with `second` below the session's kappa.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IndexPair {
    pub first: OrdinalTerm,
    pub second: OrdinalTerm,
}

impl IndexPair {
    pub fn new(first: OrdinalTerm, second: OrdinalTerm) -> Self {
        IndexPair { first, second }
    }
}

impl fmt::Display for IndexPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.first, self.second)
    }
}

/// A finite set of index pairs, kept in canonical order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FinitePattern {
    pairs: BTreeSet<IndexPair>,
}

impl FinitePattern {
    pub fn empty() -> Self {
        FinitePattern::default()
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = IndexPair>) -> Self {
        FinitePattern { pairs: pairs.into_iter().collect() }
    }

    pub fn insert(&mut self, p: IndexPair) {
        self.pairs.insert(p);
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &IndexPair> {
        self.pairs.iter()
    }

    pub fn max_first(&self) -> Option<&OrdinalTerm> {
        self.pairs.iter().map(|p| &p.first).max()
    }

    /// Membership of the pattern in `bound x kappa`.
    pub fn within(&self, first_below: &OrdinalTerm, kappa_term: &OrdinalTerm) -> bool {
        self.pairs.iter().all(|p| p.first < *first_below && p.second < *kappa_term)
    }
}

impl fmt::Display for FinitePattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, p) in self.pairs.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "}}")
    }
}

/// Encodes a pattern relative to `base`: every first coordinate must be
/// `>= base`. First coordinates are coded structurally (so the code of the
/// offset is a natural number); second coordinates ride along as terms.
pub fn encode_pattern(a: &FinitePattern, base: &OrdinalTerm) -> Result<OrdinalTerm, Error> {
    let mut items = Vec::with_capacity(a.len());
    for p in a.iter() {
        let offset = p.first.sub_left(base).map_err(|_| {
            Error::Precondition(format!(
                "pattern coordinate {} is below the base {base}",
                p.first
            ))
        })?;
        let offset_code = OrdinalTerm::from_nat(term_code(&offset));
        items.push(pair(&offset_code, &p.second));
    }
    let mut chain = OrdinalTerm::zero();
    for item in items.iter().rev() {
        chain = pair(item, &chain);
    }
    Ok(pair(&OrdinalTerm::from_nat(a.len() as u64), &chain))
}

/// Total decoder: ill-formed codes (wrong arity, junk offsets, duplicate or
/// out-of-order items) yield the empty pattern.
pub fn decode_pattern(c: &OrdinalTerm, base: &OrdinalTerm) -> FinitePattern {
    decode_pattern_checked(c, base).unwrap_or_default()
}

fn decode_pattern_checked(c: &OrdinalTerm, base: &OrdinalTerm) -> Option<FinitePattern> {
    let (len_t, mut chain) = unpair(c);
    let len = len_t.as_nat()?.to_u64().filter(|&n| n <= MAX_PATTERN_LEN)?;
    let mut pairs = Vec::with_capacity(len as usize);
    for _ in 0..len {
        let (item, rest) = unpair(&chain);
        chain = rest;
        let (offset_code, second) = unpair(&item);
        let offset = term_decode(offset_code.as_nat()?)?;
        let first = base.add(&offset);
        pairs.push(IndexPair { first, second });
    }
    if !chain.is_zero() {
        return None;
    }
    // canonical item order, no duplicates
    if pairs.windows(2).any(|w| w[0] >= w[1]) {
        return None;
    }
    Some(FinitePattern { pairs: pairs.into_iter().collect() })
}

// ---------------------------------------------------------------------------
// The block surjections f_delta.
// ---------------------------------------------------------------------------

/// Geometry of the block of `d`: the pattern base `gamma(d)` and the interval
/// endpoint `d'`. For `d = 0` the block is `[0, kappa)` over base 0.
#[derive(Debug, Clone)]
pub struct BlockCtx {
    pub kappa: CardinalLevel,
    pub delta: OrdinalTerm,
    pub gamma: OrdinalTerm,
    pub delta_prime: OrdinalTerm,
}

impl BlockCtx {
    pub fn new(kappa: &CardinalLevel, d: &OrdinalTerm) -> Result<Self, Error> {
        kappa.require_infinite(HARD_MAX_LEVEL)?;
        if d.is_zero() {
            return Ok(BlockCtx {
                kappa: kappa.clone(),
                delta: OrdinalTerm::zero(),
                gamma: OrdinalTerm::zero(),
                delta_prime: cardinal_term(kappa),
            });
        }
        let nf = sigma_nf(kappa, d)?;
        if !nf.delta.is_zero() {
            return Err(Error::Precondition(format!(
                "delta = {d} has Delta = {} != 0 in its normal form",
                nf.delta
            )));
        }
        let gamma = gamma_of_nf(&nf);
        let delta_prime = delta_prime_of_nf(&nf, d)?;
        Ok(BlockCtx {
            kappa: kappa.clone(),
            delta: d.clone(),
            gamma,
            delta_prime,
        })
    }

    fn kappa_term(&self) -> OrdinalTerm {
        cardinal_term(&self.kappa)
    }
}

/// Evaluates `f_delta(xi)` for `xi in [delta, delta')`.
///
/// The offset of `xi` unpairs into a pattern code and a tag; the decoded
/// pattern is returned when it fits the codomain and sits below `xi`,
/// otherwise the value is the empty pattern.
pub fn f_delta(
    kappa: &CardinalLevel,
    d: &OrdinalTerm,
    xi: &OrdinalTerm,
) -> Result<FinitePattern, Error> {
    let ctx = BlockCtx::new(kappa, d)?;
    f_delta_in(&ctx, xi)
}

pub(crate) fn f_delta_in(ctx: &BlockCtx, xi: &OrdinalTerm) -> Result<FinitePattern, Error> {
    if *xi < ctx.delta || *xi >= ctx.delta_prime {
        return Err(Error::OutOfDomain {
            arg: "xi",
            expected: format!("[{}, {})", ctx.delta, ctx.delta_prime),
            got: xi.to_string(),
        });
    }
    let eta = xi.sub_left(&ctx.delta).expect("xi >= delta");
    let (code, _tag) = unpair(&eta);
    let a = decode_pattern(&code, &ctx.gamma);
    let kt = ctx.kappa_term();
    let in_codomain = a.within(&ctx.delta_prime, &kt);
    let below_xi = a.max_first().map_or(true, |m| *m < *xi);
    if in_codomain && below_xi {
        Ok(a)
    } else {
        Ok(FinitePattern::empty())
    }
}

/// Constructive surjectivity: a `xi in [delta, delta')` with
/// `f_delta(xi) = a` and `xi` above every first coordinate of `a`. With
/// `bound` given (and reachable), the witness stays below it.
pub fn f_delta_witness(
    kappa: &CardinalLevel,
    d: &OrdinalTerm,
    a: &FinitePattern,
    bound: Option<&OrdinalTerm>,
) -> Result<OrdinalTerm, Error> {
    let ctx = BlockCtx::new(kappa, d)?;
    f_delta_witness_in(&ctx, a, bound)
}

pub(crate) fn f_delta_witness_in(
    ctx: &BlockCtx,
    a: &FinitePattern,
    bound: Option<&OrdinalTerm>,
) -> Result<OrdinalTerm, Error> {
    let kt = ctx.kappa_term();
    for p in a.iter() {
        if p.first < ctx.gamma || p.first >= ctx.delta_prime || p.second >= kt {
            return Err(Error::PatternOutOfRange(format!(
                "{p} outside [{}, {}) x {kt}",
                ctx.gamma, ctx.delta_prime
            )));
        }
    }
    let code = encode_pattern(a, &ctx.gamma)?;
    let tag = witness_tag(ctx, a);
    let xi = ctx.delta.add(&pair(&code, &tag));
    debug_assert!(xi < ctx.delta_prime, "closure keeps the witness in the block");
    if let Some(b) = bound {
        if xi >= *b {
            return Err(Error::WitnessBoundInfeasible { bound: b.to_string() });
        }
    }
    debug_assert_eq!(&f_delta_in(ctx, &xi).expect("witness in domain"), a);
    Ok(xi)
}

/// The least tag that pushes the witness strictly above every coordinate of
/// the pattern (`pair(code, tag) >= tag` does the lifting).
fn witness_tag(ctx: &BlockCtx, a: &FinitePattern) -> OrdinalTerm {
    match a.max_first() {
        Some(m) if *m >= ctx.delta => {
            m.sub_left(&ctx.delta).expect("checked >= delta").succ()
        }
        _ => OrdinalTerm::zero(),
    }
}

/// A witness above `zeta`, witnessing that each pattern has unboundedly many
/// preimages in the block.
pub fn f_delta_witness_above(
    kappa: &CardinalLevel,
    d: &OrdinalTerm,
    a: &FinitePattern,
    zeta: &OrdinalTerm,
) -> Result<OrdinalTerm, Error> {
    let ctx = BlockCtx::new(kappa, d)?;
    for p in a.iter() {
        if p.first < ctx.gamma || p.first >= ctx.delta_prime || p.second >= ctx.kappa_term() {
            return Err(Error::PatternOutOfRange(p.to_string()));
        }
    }
    let code = encode_pattern(a, &ctx.gamma)?;
    let mut tag = witness_tag(&ctx, a);
    if *zeta >= ctx.delta {
        let needed = zeta.sub_left(&ctx.delta).expect("zeta >= delta").succ();
        if needed > tag {
            tag = needed;
        }
    }
    let xi = ctx.delta.add(&pair(&code, &tag));
    debug_assert!(*zeta < xi);
    debug_assert_eq!(&f_delta_in(&ctx, &xi)?, a);
    Ok(xi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse;

    fn t(s: &str) -> OrdinalTerm {
        parse(s).unwrap()
    }

    #[test]
    fn nat_pairing_roundtrip() {
        for x in 0u32..40 {
            for y in 0u32..40 {
                let (bx, by) = (BigUint::from(x), BigUint::from(y));
                let z = nat_pair(&bx, &by);
                assert!(z >= bx && z >= by);
                assert_eq!(nat_unpair(&z), (bx, by));
            }
        }
        assert!(nat_pair(&BigUint::zero(), &BigUint::zero()).is_zero());
    }

    #[test]
    fn term_pairing_properties() {
        let zero = OrdinalTerm::zero();
        assert_eq!(pair(&zero, &zero), zero);
        let a = t("w*2+1");
        let b = t("5");
        let c = pair(&a, &b);
        assert_eq!(unpair(&c), (a.clone(), b.clone()));
        assert!(c >= a && c >= b);
        // finite closure
        let c = pair(&t("3"), &t("4"));
        assert!(c < OrdinalTerm::omega());
        // cardinal closure at level 1
        let c = pair(&t("w^3+w"), &t("w*7"));
        assert!(c < OrdinalTerm::atom(1));
    }

    #[test]
    fn term_code_roundtrip() {
        for s in ["0", "1", "w", "w1", "w^2+w*3+5", "w2*4+w1+w^(w1+1)*2", "w^w"] {
            let x = t(s);
            // w2*4 + w1 + w^(w1+1)*2 is not in descending order as written;
            // parse normalizes, so the roundtrip is on the canonical form.
            assert_eq!(term_decode(&term_code(&x)), Some(x));
        }
        // junk codes decode to None or to some valid term, never panic
        for z in 0u64..2000 {
            let _ = term_decode(&BigUint::from(z));
        }
    }

    #[test]
    fn pattern_roundtrip() {
        let base = t("w");
        let mut a = FinitePattern::empty();
        a.insert(IndexPair::new(t("w"), t("0")));
        let c = encode_pattern(&a, &base).unwrap();
        assert_eq!(decode_pattern(&c, &base), a);
        // empty

        let e = encode_pattern(&FinitePattern::empty(), &base).unwrap();
        assert!(decode_pattern(&e, &base).is_empty());
        // below-base coordinate rejected
        let mut bad = FinitePattern::empty();
        bad.insert(IndexPair::new(t("3"), t("0")));
        assert!(encode_pattern(&bad, &base).is_err());
    }

    #[test]
    fn pattern_code_closure() {
        // all coordinates < base + w and indices < w give a code < w
        let base = t("w^2");
        let mut a = FinitePattern::empty();
        a.insert(IndexPair::new(t("w^2+3"), t("1")));
        a.insert(IndexPair::new(t("w^2+7"), t("0")));
        let c = encode_pattern(&a, &base).unwrap();
        assert!(c < OrdinalTerm::omega());
    }

    #[test]
    fn f_delta_basics() {
        let k = CardinalLevel::aleph(0);
        // xi = d: eta = 0: empty pattern
        let d = t("w^2");
        assert!(f_delta(&k, &d, &d).unwrap().is_empty());
        // witness roundtrip for {(3,0)} in (3, w^2+w)
        let mut a = FinitePattern::empty();
        a.insert(IndexPair::new(t("3"), t("0")));
        let xi = f_delta_witness(&k, &d, &a, None).unwrap();
        assert!(xi >= d && xi < t("w^2+w"));
        assert!(*a.max_first().unwrap() < xi);
        assert_eq!(f_delta(&k, &d, &xi).unwrap(), a);
        // out-of-domain xi
        assert!(f_delta(&k, &d, &t("w")).is_err());
        // Delta != 0 block rejected
        assert!(f_delta(&k, &t("w+1"), &t("w+1")).is_err());
    }

    #[test]
    fn f_delta_big_offsets() {
        // surjectivity reaches coordinates at the block's own scale:
        // d = w1, pattern over [0, w1*2) with a coordinate above w1
        let k = CardinalLevel::aleph(0);
        let d = t("w1");
        let mut a = FinitePattern::empty();
        a.insert(IndexPair::new(t("w1+5"), t("2")));
        a.insert(IndexPair::new(t("w^3"), t("0")));
        let xi = f_delta_witness(&k, &d, &a, None).unwrap();
        assert!(xi < t("w1*2"));
        assert_eq!(f_delta(&k, &d, &xi).unwrap(), a);
    }

    #[test]
    fn f_delta_zero_block() {
        let k = CardinalLevel::aleph(0);
        let zero = OrdinalTerm::zero();
        assert!(f_delta(&k, &zero, &zero).unwrap().is_empty());
        let mut a = FinitePattern::empty();
        a.insert(IndexPair::new(t("2"), t("1")));
        a.insert(IndexPair::new(t("5"), t("0")));
        let xi = f_delta_witness(&k, &zero, &a, None).unwrap();
        assert!(xi < OrdinalTerm::omega());
        assert_eq!(f_delta(&k, &zero, &xi).unwrap(), a);
    }

    #[test]
    fn distinct_tags_distinct_witnesses() {
        let k = CardinalLevel::aleph(0);
        let d = t("w^2");
        let mut a = FinitePattern::empty();
        a.insert(IndexPair::new(t("4"), t("1")));
        let w1 = f_delta_witness(&k, &d, &a, None).unwrap();
        let w2 = f_delta_witness_above(&k, &d, &a, &w1).unwrap();
        assert!(w2 > w1);
        assert_eq!(f_delta(&k, &d, &w2).unwrap(), a);
    }
}

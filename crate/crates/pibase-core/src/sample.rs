//! Deterministic term enumeration and seeded random sampling.
//!
//! The enumerator produces a canonical corpus ordered by structural size; the
//! samplers draw random terms, and random terms below a bound, from a seeded
//! generator. Both are used by the property suites and by the sampling
//! operations of the library itself, so runs are reproducible.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use rand::Rng;

use crate::term::{Monomial, OrdinalTerm};

/// A deterministic corpus of canonical terms with atoms up to `max_level`,
/// ordered by (size, value) and truncated to `count`.
pub fn enumerate_terms(max_level: u32, count: usize) -> Vec<OrdinalTerm> {
    let mut tier: Vec<OrdinalTerm> = Vec::new();
    tier.push(OrdinalTerm::zero());
    tier.push(OrdinalTerm::one());
    tier.push(OrdinalTerm::from_nat(2u32));
    tier.push(OrdinalTerm::from_nat(3u32));
    for k in 1..=max_level {
        tier.push(OrdinalTerm::atom(k));
    }

    let coeffs: [u32; 3] = [1, 2, 3];
    let mut seen: BTreeSet<OrdinalTerm> = tier.iter().cloned().collect();
    let mut pool: Vec<OrdinalTerm> = tier.clone();

    // two rounds of composition: sums of up to three monomials with
    // exponents drawn from the previous round
    for _ in 0..2 {
        let exps: Vec<OrdinalTerm> = pool.clone();
        let mut next: Vec<OrdinalTerm> = Vec::new();
        for e in &exps {
            for c in coeffs {
                let m = OrdinalTerm::from_monomials(vec![Monomial::new(e.clone(), c)]);
                next.push(m);
            }
        }
        // descending two- and three-monomial sums
        let singles = next.clone();
        for a in &singles {
            for b in &singles {
                if b < a {
                    next.push(a.add(b));
                    for c in &singles {
                        if c < b {
                            next.push(a.add(b).add(c));
                        }
                    }
                }
            }
            if seen.len() + next.len() > count * 8 {
                break;
            }
        }
        for t in next {
            if seen.insert(t.clone()) {
                pool.push(t);
            }
            if seen.len() >= count * 4 {
                break;
            }
        }
    }

    let mut all: Vec<OrdinalTerm> = seen.into_iter().collect();
    all.sort_by(|a, b| (a.size(), a).cmp(&(b.size(), b)));
    all.truncate(count);
    all
}

/// A random canonical term: at most `width` monomials, exponent recursion
/// depth `depth`, atoms up to `max_level`.
pub fn sample_term<R: Rng>(rng: &mut R, max_level: u32, depth: u32, width: usize) -> OrdinalTerm {
    let mut exps: BTreeSet<OrdinalTerm> = BTreeSet::new();
    let n = rng.gen_range(0..=width);
    for _ in 0..n {
        exps.insert(sample_exponent(rng, max_level, depth));
    }
    let mut ms: Vec<Monomial> = exps
        .into_iter()
        .map(|e| Monomial::new(e, rng.gen_range(1..=4u32)))
        .collect();
    ms.reverse(); // BTreeSet iterates ascending; monomials descend
    OrdinalTerm::from_monomials(ms)
}

fn sample_exponent<R: Rng>(rng: &mut R, max_level: u32, depth: u32) -> OrdinalTerm {
    let pick = rng.gen_range(0..10u32);
    match pick {
        0..=3 => OrdinalTerm::from_nat(rng.gen_range(0..4u64)),
        4..=6 if max_level >= 1 => OrdinalTerm::atom(rng.gen_range(1..=max_level)),
        _ if depth > 0 => sample_term(rng, max_level, depth - 1, 2),
        _ => OrdinalTerm::from_nat(rng.gen_range(0..3u64)),
    }
}

/// A random term strictly below `bound` (which must be nonzero): keep a
/// proper prefix of the bound's monomials and shrink the next one, then pad
/// with arbitrary smaller debris.
pub fn sample_below<R: Rng>(rng: &mut R, bound: &OrdinalTerm) -> OrdinalTerm {
    assert!(!bound.is_zero(), "no ordinal below 0");
    let ms = bound.monomials();
    let j = rng.gen_range(0..ms.len());
    let mut out: Vec<Monomial> = ms[..j].to_vec();
    let pivot = &ms[j];
    let one = BigUint::from(1u32);
    // choose: drop the pivot entirely, shrink its coefficient, or lower its exponent
    let coeff_room = pivot.coeff > one;
    let exp_room = !pivot.exp.is_zero();
    let choice = rng.gen_range(0..3u32);
    if choice == 0 || (!coeff_room && !exp_room) {
        // dropping the pivot already makes the term smaller
        return OrdinalTerm::from_monomials(out);
    }
    let tail_exp_bound;
    if choice == 1 && coeff_room {
        let delta = sample_biguint_below(rng, &(&pivot.coeff - &one)) + &one;
        out.push(Monomial::new(pivot.exp.clone(), delta));
        tail_exp_bound = pivot.exp.clone();
    } else if exp_room {
        let e = sample_below(rng, &pivot.exp);
        out.push(Monomial::new(e.clone(), rng.gen_range(1..=3u32)));
        tail_exp_bound = e;
    } else {
        let delta = sample_biguint_below(rng, &(&pivot.coeff - &one)) + &one;
        out.push(Monomial::new(pivot.exp.clone(), delta));
        tail_exp_bound = pivot.exp.clone();
    }
    // debris below the last exponent
    if !tail_exp_bound.is_zero() && rng.gen_bool(0.5) {
        let e = sample_below(rng, &tail_exp_bound);
        out.push(Monomial::new(e, rng.gen_range(1..=3u32)));
    }
    OrdinalTerm::from_monomials(out)
}

fn sample_biguint_below<R: Rng>(rng: &mut R, bound: &BigUint) -> BigUint {
    use num_traits::{ToPrimitive, Zero};
    if bound.is_zero() {
        return BigUint::zero();
    }
    match bound.to_u64() {
        Some(b) => BigUint::from(rng.gen_range(0..b.max(1))),
        None => BigUint::from(rng.gen_range(0..u64::MAX)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn enumeration_is_deterministic_and_dedup() {
        let a = enumerate_terms(3, 500);
        let b = enumerate_terms(3, 500);
        assert_eq!(a, b);
        assert_eq!(a.len(), 500);
        let set: BTreeSet<_> = a.iter().cloned().collect();
        assert_eq!(set.len(), a.len());
    }

    #[test]
    fn sample_below_is_below() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let bounds = enumerate_terms(2, 60);
        for b in bounds.iter().filter(|b| !b.is_zero()) {
            for _ in 0..50 {
                let x = sample_below(&mut rng, b);
                assert!(x < *b, "{x} >= {b}");
            }
        }
    }

    #[test]
    fn sampled_terms_are_canonical() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..200 {
            let t = sample_term(&mut rng, 3, 2, 3);
            // round-trip through the printer/parser as a canonicity probe
            let back = crate::parse::parse(&t.to_string()).unwrap();
            assert_eq!(back, t);
        }
    }
}

//! Free sequences and left-separated enumerations.
//!
//! A sequence is free when the closure of every initial segment is disjoint
//! from the closure of the rest. In a finite space closures are finitely
//! additive, so a sequence is free exactly when each point's closure avoids
//! the union of its predecessors' closures; the maximal length is a subset
//! DP over that append rule.

use crate::error::TopoError;
use crate::topo::space::{FiniteSpace, Mask};

/// Definitional check: every split has disjoint closures.
pub fn is_free_sequence(space: &FiniteSpace, seq: &[usize]) -> bool {
    let mut seen: Mask = 0;
    for &p in seq {
        if seen & (1 << p) != 0 {
            return false; // repeated point
        }
        seen |= 1 << p;
    }
    for cut in 0..=seq.len() {
        let before: Mask = seq[..cut].iter().fold(0, |m, &p| m | (1 << p));
        let after: Mask = seq[cut..].iter().fold(0, |m, &p| m | (1 << p));
        if space.closure(before) & space.closure(after) != 0 {
            return false;
        }
    }
    true
}

/// A longest free sequence, found by dynamic programming over point sets.
pub fn max_free_sequence(space: &FiniteSpace) -> Vec<usize> {
    let n = space.n();
    let full = space.full();
    let point_cl: Vec<Mask> = (0..n).map(|p| space.closure(1 << p)).collect();
    // closure of a set = union of point closures
    let mut reachable = vec![false; (full as usize) + 1];
    let mut parent: Vec<Option<(Mask, usize)>> = vec![None; (full as usize) + 1];
    reachable[0] = true;
    let mut best: Mask = 0;
    for s in 1..=(full as usize) {
        let s_mask = s as Mask;
        for p in 0..n {
            if s_mask & (1 << p) == 0 {
                continue;
            }
            let rest = s_mask & !(1 << p);
            if !reachable[rest as usize] {
                continue;
            }
            let rest_cl: Mask =
                (0..n).filter(|&q| rest & (1 << q) != 0).fold(0, |m, q| m | point_cl[q]);
            if rest_cl & point_cl[p] == 0 {
                reachable[s] = true;
                parent[s] = Some((rest, p));
                break;
            }
        }
        if reachable[s] && s_mask.count_ones() > best.count_ones() {
            best = s_mask;
        }
    }
    let mut seq = Vec::new();
    let mut cur = best;
    while let Some((rest, p)) = parent[cur as usize] {
        seq.push(p);
        cur = rest;
    }
    seq.reverse();
    debug_assert!(is_free_sequence(space, &seq));
    seq
}

/// A smallest dense subset (first in popcount-then-mask order).
pub fn min_dense(space: &FiniteSpace) -> Mask {
    let full = space.full();
    for k in 0..=space.n() as u32 {
        for m in 0..=(full as usize) {
            let m = m as Mask;
            if m.count_ones() == k && space.closure(m) == full {
                return m;
            }
        }
    }
    unreachable!("the full set is dense")
}

/// A left-separated enumeration of a smallest dense subset: every initial
/// segment relatively closed, length `d(X)`. Greedy over the minimal dense
/// set: repeatedly take the least point not yet swallowed by the closure of
/// the chosen prefix. Getting stuck would exhibit a dense set smaller than
/// the minimum, so this always succeeds.
pub fn left_separated_order(space: &FiniteSpace) -> Result<Vec<usize>, TopoError> {
    let dense = min_dense(space);
    let mut order = Vec::new();
    let mut chosen: Mask = 0;
    loop {
        let cl = space.closure(chosen);
        let candidate = (0..space.n()).find(|&p| dense & (1 << p) != 0 && cl & (1 << p) == 0);
        match candidate {
            Some(p) => {
                order.push(p);
                chosen |= 1 << p;
            }
            None => break,
        }
    }
    if space.closure(chosen) != space.full() || chosen.count_ones() != dense.count_ones() {
        return Err(TopoError::Precondition(
            "internal: greedy left-separated enumeration fell short".into(),
        ));
    }
    debug_assert!(is_left_separated(space, &order));
    Ok(order)
}

/// Check used by tests: closures of initial segments avoid the rest of the
/// enumeration.
pub fn is_left_separated(space: &FiniteSpace, seq: &[usize]) -> bool {
    for cut in 0..seq.len() {
        let before: Mask = seq[..cut].iter().fold(0, |m, &p| m | (1 << p));
        let after: Mask = seq[cut..].iter().fold(0, |m, &p| m | (1 << p));
        if space.closure(before) & after != 0 {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn discrete_everything_free() {
        let s = FiniteSpace::discrete(4);
        assert!(is_free_sequence(&s, &[2, 0, 3, 1]));
        assert_eq!(max_free_sequence(&s).len(), 4);
    }

    #[test]
    fn sierpinski_not_free() {
        let s = FiniteSpace::sierpinski();
        // (b, a): b lies in the closure of {a}
        assert!(!is_free_sequence(&s, &[1, 0]));
        assert!(!is_free_sequence(&s, &[0, 1]));
        assert!(is_free_sequence(&s, &[0]));
        assert_eq!(max_free_sequence(&s).len(), 1);
    }

    #[test]
    fn left_separated_orders() {
        let d = FiniteSpace::discrete(3);
        let order = left_separated_order(&d).unwrap();
        assert_eq!(order.len(), 3);
        // sierpinski: {a} is dense, enumeration <a>
        let s = FiniteSpace::sierpinski();
        let order = left_separated_order(&s).unwrap();
        assert_eq!(order, vec![0]);
    }

    #[test]
    fn single_point_free() {
        let s = FiniteSpace::discrete(1);
        assert!(is_free_sequence(&s, &[0]));
        assert!(is_free_sequence(&s, &[]));
    }
}

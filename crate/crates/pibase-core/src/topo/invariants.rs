//! Exact cardinal-invariant calculators for finite spaces, with witnesses.
//!
//! Everything is brute force over bitmask subsets, guarded by a size cap.
//! `m(X)` (the least possible order of a pi-base) uses one structural fact:
//! a minimal nonempty open set has no nonempty open proper subset, so every
//! pi-base must contain all of them, and the family of minimal opens is
//! itself a pi-base; orders only grow with the family, so the minimum is
//! attained there. Tests cross-check against plain subfamily brute force.

use serde::Serialize;

use crate::error::TopoError;
use crate::topo::free::{is_left_separated, left_separated_order, max_free_sequence, min_dense};
use crate::topo::space::{FiniteSpace, Mask};

/// Caps for the exponential searches.
#[derive(Debug, Clone, Copy)]
pub struct SearchCaps {
    pub max_points: usize,
    pub max_opens: usize,
}

impl Default for SearchCaps {
    fn default() -> Self {
        SearchCaps { max_points: 14, max_opens: 8192 }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct InvariantReport {
    pub size: usize,
    /// density with a witness dense set
    pub d: usize,
    pub dense_witness: Vec<String>,
    /// spread with a witness discrete subspace
    pub s: usize,
    pub discrete_witness: Vec<String>,
    /// pi-character per point and global
    pub pi_chi_points: Vec<usize>,
    pub pi_chi: usize,
    pub pi_chi_witness: Vec<String>,
    /// tightness
    pub t: usize,
    /// longest free sequence with witness
    pub f: usize,
    pub free_witness: Vec<String>,
    /// least pi-base order with witness family
    pub m: usize,
    pub min_order_witness: Vec<String>,
    /// left-separated dense enumeration of length d
    pub left_separated: Vec<String>,
    /// the inequality d <= m * s, read at face value on the finite reports
    pub d_le_m_times_s: bool,
}

fn names(space: &FiniteSpace, mask: Mask) -> Vec<String> {
    space.mask_points(mask).into_iter().map(|p| space.point_name(p).to_string()).collect()
}

pub fn check_caps(space: &FiniteSpace, caps: &SearchCaps) -> Result<(), TopoError> {
    if space.n() > caps.max_points {
        return Err(TopoError::SizeCap { what: "points", got: space.n(), cap: caps.max_points });
    }
    if space.opens().len() > caps.max_opens {
        return Err(TopoError::SizeCap {
            what: "opens",
            got: space.opens().len(),
            cap: caps.max_opens,
        });
    }
    Ok(())
}

/// Exact invariants with witnesses; `|X| >= 1` expected for the suprema to
/// be meaningful (the empty space reports zeros).
pub fn invariants(space: &FiniteSpace, caps: &SearchCaps) -> Result<InvariantReport, TopoError> {
    check_caps(space, caps)?;
    let n = space.n();
    let full = space.full();

    let dense = min_dense(space);
    let d = dense.count_ones() as usize;

    // spread: largest subset discrete in the subspace topology
    let mut spread_mask: Mask = 0;
    for m in 0..=(full as usize) {
        let m = m as Mask;
        if m.count_ones() <= spread_mask.count_ones() {
            continue;
        }
        if is_discrete_subspace(space, m) {
            spread_mask = m;
        }
    }
    let s = spread_mask.count_ones() as usize;

    // pi-character: a minimal neighborhood is a one-set local pi-base
    let pi_chi_points: Vec<usize> = (0..n).map(|_| 1).collect();
    let pi_chi = if n == 0 { 0 } else { 1 };
    let pi_chi_witness: Vec<String> =
        (0..n).map(|p| space.set_name(space.min_nbhd(p))).collect();
    debug_assert!((0..n).all(|p| {
        let u = space.min_nbhd(p);
        space.opens().iter().all(|&o| o & (1 << p) == 0 || u & !o == 0)
    }));

    let t = tightness(space);

    let free = max_free_sequence(space);
    let f = free.len();

    let (m_value, m_family) = min_pibase_order(space)?;

    let left = left_separated_order(space)?;
    debug_assert!(is_left_separated(space, &left));

    Ok(InvariantReport {
        size: n,
        d,
        dense_witness: names(space, dense),
        s,
        discrete_witness: names(space, spread_mask),
        pi_chi_points,
        pi_chi,
        pi_chi_witness,
        t,
        f,
        free_witness: free.iter().map(|&p| space.point_name(p).to_string()).collect(),
        m: m_value,
        min_order_witness: m_family.iter().map(|&o| space.set_name(o)).collect(),
        left_separated: left.iter().map(|&p| space.point_name(p).to_string()).collect(),
        d_le_m_times_s: d <= m_value.saturating_mul(s),
    })
}

fn is_discrete_subspace(space: &FiniteSpace, m: Mask) -> bool {
    space.mask_points(m).into_iter().all(|p| space.min_nbhd(p) & m == 1 << p)
}

/// Least `k` such that membership in a closure is always witnessed by a
/// subset of size at most `k`. (1 for every nonempty finite space; computed
/// by the definition regardless.)
fn tightness(space: &FiniteSpace) -> usize {
    let full = space.full() as usize;
    let mut t = 0;
    for a in 1..=full.max(0) {
        let a = a as Mask;
        let cl = space.closure(a);
        for p in space.mask_points(cl) {
            // least sub-witness size for p in cl(a); a singleton of
            // U_min(p) & a always works in a finite space, but fall back to
            // the full submask walk if it ever did not
            let singleton = space
                .mask_points(a)
                .into_iter()
                .any(|x| space.min_nbhd(p) & (1 << x) != 0);
            let best = if singleton { 1 } else { smallest_subwitness(space, a, p) };
            t = t.max(best);
        }
    }
    t.min(space.n())
}

fn smallest_subwitness(space: &FiniteSpace, a: Mask, p: usize) -> usize {
    let mut best = usize::MAX;
    let mut b = a;
    loop {
        if b != 0 && space.closure(b) & (1 << p) != 0 {
            best = best.min(b.count_ones() as usize);
        }
        if b == 0 {
            break;
        }
        b = (b - 1) & a;
    }
    best
}

/// Number of members of `family` containing `p`.
pub fn point_order(family: &[Mask], p: usize) -> usize {
    family.iter().filter(|&&u| u & (1 << p) != 0).count()
}

/// Maximal point order of a family.
pub fn family_order(space: &FiniteSpace, family: &[Mask]) -> usize {
    (0..space.n()).map(|p| point_order(family, p)).max().unwrap_or(0)
}

/// Is `family` a pi-base: every nonempty open contains a member.
pub fn is_pibase(space: &FiniteSpace, family: &[Mask]) -> bool {
    space.nonempty_opens().all(|u| family.iter().any(|&r| r != 0 && r & !u == 0))
}

/// The minimal nonempty open sets of the space.
pub fn minimal_opens(space: &FiniteSpace) -> Vec<Mask> {
    space
        .nonempty_opens()
        .filter(|&u| space.nonempty_opens().all(|v| v == u || v & !u != 0))
        .collect()
}

/// Least order of a pi-base, with the witness family attaining it.
pub fn min_pibase_order(space: &FiniteSpace) -> Result<(usize, Vec<Mask>), TopoError> {
    if space.n() == 0 {
        return Ok((0, Vec::new()));
    }
    let fam = minimal_opens(space);
    if !is_pibase(space, &fam) {
        return Err(TopoError::Precondition(
            "internal: minimal opens must form a pi-base".into(),
        ));
    }
    Ok((family_order(space, &fam), fam))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn discrete_invariants() {
        for n in 1..=5 {
            let s = FiniteSpace::discrete(n);
            let r = invariants(&s, &SearchCaps::default()).unwrap();
            assert_eq!(r.d, n);
            assert_eq!(r.s, n);
            assert_eq!(r.f, n);
            assert_eq!(r.pi_chi, 1);
            assert_eq!(r.t, 1);
            assert_eq!(r.m, 1);
        }
    }

    #[test]
    fn sierpinski_invariants() {
        let s = FiniteSpace::sierpinski();
        let r = invariants(&s, &SearchCaps::default()).unwrap();
        assert_eq!(r.f, 1);
        assert_eq!(r.d, 1); // {a} is dense
        assert_eq!(r.s, 1);
        assert_eq!(r.m, 1);
    }

    #[test]
    fn one_point_space() {
        let s = FiniteSpace::discrete(1);
        let r = invariants(&s, &SearchCaps::default()).unwrap();
        assert_eq!((r.d, r.s, r.f, r.pi_chi, r.t, r.m), (1, 1, 1, 1, 1, 1));
    }

    #[test]
    fn min_order_against_brute_force() {
        // exhaustive subfamily search agrees with the minimal-opens formula
        for space in [
            FiniteSpace::discrete(3),
            FiniteSpace::sierpinski(),
            FiniteSpace::from_base(
                vec!["a".into(), "b".into(), "c".into()],
                vec![0b011, 0b110],
            )
            .unwrap(),
        ] {
            let (m, fam) = min_pibase_order(&space).unwrap();
            assert!(is_pibase(&space, &fam));
            let opens: Vec<Mask> = space.nonempty_opens().collect();
            let mut brute = usize::MAX;
            for sub in 0..(1u32 << opens.len()) {
                let family: Vec<Mask> = opens
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| sub & (1 << i) != 0)
                    .map(|(_, &o)| o)
                    .collect();
                if is_pibase(&space, &family) {
                    brute = brute.min(family_order(&space, &family));
                }
            }
            assert_eq!(m, brute);
        }
    }

    #[test]
    fn point_order_singletons() {
        for n in 1..=6 {
            let s = FiniteSpace::discrete(n);
            let fam: Vec<Mask> = (0..n).map(|i| 1 << i).collect();
            for p in 0..n {
                assert_eq!(point_order(&fam, p), 1);
            }
            assert_eq!(family_order(&s, &fam), 1);
        }
    }

    #[test]
    fn size_cap_enforced() {
        let s = FiniteSpace::discrete(15);
        assert!(matches!(
            invariants(&s, &SearchCaps::default()),
            Err(TopoError::SizeCap { .. })
        ));
    }
}

//! The free-sequence/covering dichotomy and its finite-scale exploration.
//!
//! `extract` realizes the sufficiency argument at a finite cap `L`: given a
//! family in which every at-most-`L`-point subset of `Y` has its closure
//! inside some member, it either finds a subfamily of size at most `L`
//! covering `Y`, or runs the inductive pick to completion and hands back a
//! free sequence of length `L` (stage `d` consumes `d+1 <= L` chosen sets,
//! so the construction never needs more than `L` of them).
//!
//! `bruteforce` maps how the two sides relate on every labeled topology on
//! `n` points. Finite topologies are exactly the preorders (opens = up-closed
//! sets of the specialization order), so the enumerator walks reflexive
//! transitive relations; the labeled counts (1, 4, 29, 355, 6942 for
//! n = 1..5) double as a checksum. The covering side quantifies over all
//! `Y` and all admissible families; the search space collapses to choice
//! functions picking a minimal open above each closure, which preserves
//! counterexamples in both directions (shrinking a family keeps covers hard
//! and keeps the hypothesis satisfied by the chosen members).

use std::collections::{BTreeSet, HashSet};

use serde::Serialize;

use crate::error::TopoError;
use crate::topo::free::{is_free_sequence, max_free_sequence};
use crate::topo::space::{FiniteSpace, Mask};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Lemma24Outcome {
    /// A subfamily of size at most `L` covering `Y`.
    Cover(Vec<Mask>),
    /// A free sequence of length `L` inside `Y`.
    FreeSeq(Vec<usize>),
}

/// The dichotomy extractor. `family` members must be nonempty opens.
pub fn lemma24_extract(
    space: &FiniteSpace,
    y: Mask,
    family: &[Mask],
    l: usize,
) -> Result<Lemma24Outcome, TopoError> {
    for &u in family {
        if u == 0 || !space.is_open(u) {
            return Err(TopoError::NotOpen(space.set_name(u)));
        }
    }
    // hypothesis: every A subset of Y with |A| <= l has cl(A) inside a member
    let mut subsets = vec![0 as Mask];
    let y_points = space.mask_points(y);
    for k in 1..=l.min(y_points.len()) {
        collect_subsets(&y_points, k, &mut subsets);
    }
    for &a in &subsets {
        let cl = space.closure(a);
        if !family.iter().any(|&u| cl & !u == 0) {
            return Err(TopoError::HypothesisFails(space.set_name(a)));
        }
    }

    // try small covers, sizes 0..=l, in deterministic index order
    if let Some(cover) = find_cover(space, y, family, l) {
        return Ok(Lemma24Outcome::Cover(cover));
    }

    // inductive pick: U_d covers the closure so far, p_d dodges all picks
    let mut points: Vec<usize> = Vec::new();
    let mut used: Vec<Mask> = Vec::new();
    for _stage in 0..l {
        let p_mask: Mask = points.iter().fold(0, |m, &p| m | (1 << p));
        let cl = space.closure(p_mask);
        let u = family
            .iter()
            .copied()
            .find(|&u| cl & !u == 0)
            .expect("hypothesis was checked for every subset of this size");
        used.push(u);
        let union: Mask = used.iter().fold(0, |m, &u| m | u);
        let next = space
            .mask_points(y & !union)
            .into_iter()
            .next()
            .expect("no small subfamily covers Y, so some point survives");
        points.push(next);
    }
    debug_assert!(is_free_sequence(space, &points));
    Ok(Lemma24Outcome::FreeSeq(points))
}

fn collect_subsets(points: &[usize], k: usize, out: &mut Vec<Mask>) {
    fn rec(points: &[usize], k: usize, start: usize, acc: Mask, out: &mut Vec<Mask>) {
        if k == 0 {
            out.push(acc);
            return;
        }
        for i in start..points.len() {
            rec(points, k - 1, i + 1, acc | (1 << points[i]), out);
        }
    }
    rec(points, k, 0, 0, out);
}

fn find_cover(space: &FiniteSpace, y: Mask, family: &[Mask], l: usize) -> Option<Vec<Mask>> {
    let _ = space;
    fn rec(y: Mask, family: &[Mask], l: usize, start: usize, acc: &mut Vec<Mask>) -> bool {
        let union: Mask = acc.iter().fold(0, |m, &u| m | u);
        if y & !union == 0 {
            return true;
        }
        if acc.len() >= l {
            return false;
        }
        for i in start..family.len() {
            acc.push(family[i]);
            if rec(y, family, l, i + 1, acc) {
                return true;
            }
            acc.pop();
        }
        false
    }
    let mut acc = Vec::new();
    if rec(y, family, l, 0, &mut acc) {
        Some(acc)
    } else {
        None
    }
}

// ---------------------------------------------------------------------------
// Topology enumeration (preorders).
// ---------------------------------------------------------------------------

/// All labeled topologies on `n` points, `n <= 5`.
pub fn enumerate_topologies(n: usize) -> Result<Vec<FiniteSpace>, TopoError> {
    if n > 5 {
        return Err(TopoError::SizeCap { what: "points", got: n, cap: 5 });
    }
    let points: Vec<String> = (0..n).map(|i| format!("p{i}")).collect();
    if n == 0 {
        return Ok(vec![FiniteSpace::from_opens(points, vec![0]).expect("empty space")]);
    }
    let offdiag: Vec<(usize, usize)> =
        (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).collect();
    let mut out = Vec::new();
    for bits in 0u64..(1u64 << offdiag.len()) {
        let mut rel = vec![[false; 5]; n];
        for i in 0..n {
            rel[i][i] = true;
        }
        for (b, &(i, j)) in offdiag.iter().enumerate() {
            if bits & (1 << b) != 0 {
                rel[i][j] = true;
            }
        }
        let transitive = (0..n).all(|i| {
            (0..n).all(|j| !rel[i][j] || (0..n).all(|k| !rel[j][k] || rel[i][k]))
        });
        if !transitive {
            continue;
        }
        // opens = up-closed sets: the minimal neighborhood of i is rel[i]
        let up: Vec<Mask> = (0..n)
            .map(|i| (0..n).filter(|&j| rel[i][j]).fold(0, |m, j| m | (1 << j)))
            .collect();
        let full: Mask = (1 << n) - 1;
        let opens: Vec<Mask> = (0..=full)
            .filter(|&m| (0..n).all(|i| m & (1 << i) == 0 || up[i] & !m == 0))
            .collect();
        out.push(
            FiniteSpace::from_opens(points.clone(), opens).expect("up-sets form a topology"),
        );
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// The covering property, decided exactly.
// ---------------------------------------------------------------------------

/// A counterexample instance to the covering property at cap `l`.
#[derive(Debug, Clone, Serialize)]
pub struct CoverCounterexample {
    pub y: Vec<String>,
    pub family: Vec<Vec<String>>,
}

/// Searches for `Y` and an admissible family with no cover of size `<= l`.
///
/// Only choice-function ranges over minimal options need checking; the
/// search prunes any branch whose picks already contain a small cover and
/// memoizes on the picked set.
pub fn covering_counterexample(
    space: &FiniteSpace,
    l: usize,
    budget: &mut usize,
) -> Result<Option<(Mask, Vec<Mask>)>, TopoError> {
    let full = space.full();
    for y in 1..=(full as usize) {
        let y = y as Mask;
        let y_points = space.mask_points(y);
        // distinct closure requirements of nonempty subsets of size <= l
        let mut reqs: BTreeSet<Mask> = BTreeSet::new();
        let mut subsets = Vec::new();
        for k in 1..=l.min(y_points.len()) {
            collect_subsets(&y_points, k, &mut subsets);
        }
        for &a in &subsets {
            reqs.insert(space.closure(a));
        }
        let reqs: Vec<Mask> = reqs.into_iter().collect();
        // minimal opens above each requirement
        let options: Vec<Vec<Mask>> = reqs
            .iter()
            .map(|&r| {
                space
                    .nonempty_opens()
                    .filter(|&u| r & !u == 0)
                    .filter(|&u| {
                        space
                            .nonempty_opens()
                            .all(|v| v == u || r & !v != 0 || v & !u != 0)
                    })
                    .collect()
            })
            .collect();
        let mut picked: Vec<Mask> = Vec::new();
        let mut memo: HashSet<(usize, Vec<Mask>)> = HashSet::new();
        if search(space, y, &options, l, 0, &mut picked, &mut memo, budget)? {
            return Ok(Some((y, picked)));
        }
    }
    Ok(None)
}

#[allow(clippy::too_many_arguments)]
fn search(
    space: &FiniteSpace,
    y: Mask,
    options: &[Vec<Mask>],
    l: usize,
    idx: usize,
    picked: &mut Vec<Mask>,
    memo: &mut HashSet<(usize, Vec<Mask>)>,
    budget: &mut usize,
) -> Result<bool, TopoError> {
    if *budget == 0 {
        return Err(TopoError::StepBudget(0));
    }
    *budget -= 1;
    if idx == options.len() {
        return Ok(find_cover(space, y, picked, l).is_none());
    }
    let key = (idx, picked.clone());
    if !memo.insert(key) {
        return Ok(false);
    }
    for &u in &options[idx] {
        if picked.contains(&u) {
            if search(space, y, options, l, idx + 1, picked, memo, budget)? {
                return Ok(true);
            }
            continue;
        }
        picked.push(u);
        // prune: a small cover among the picks can never go away
        let early_cover = find_cover(space, y, picked, l).is_some();
        if !early_cover && search(space, y, options, l, idx + 1, picked, memo, budget)? {
            return Ok(true);
        }
        picked.pop();
    }
    Ok(false)
}

// ---------------------------------------------------------------------------
// The table.
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize)]
pub struct BruteRow {
    pub topology_index: usize,
    pub opens: Vec<Vec<String>>,
    pub free_max: usize,
    pub per_cap: Vec<BruteCell>,
}

#[derive(Debug, Clone, Serialize)]
pub struct BruteCell {
    pub l: usize,
    pub covering_holds: bool,
    /// no free sequence of length l+1 (i.e. F(X) <= l)
    pub no_free_succ: bool,
    /// "no free sequence of length l+1 implies covering" — counterexample if it fails
    pub forward_fails: Option<CoverCounterexample>,
    /// "covering implies no free sequence of length l+1" — witness if it fails
    pub backward_fails: Option<Vec<String>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct BruteReport {
    pub n: usize,
    pub topology_count: usize,
    pub rows: Vec<BruteRow>,
    pub forward_failures: usize,
    pub backward_failures: usize,
    pub budget_exhausted: bool,
}

/// Expected labeled-topology counts, used as an enumerator checksum.
pub fn expected_topology_count(n: usize) -> Option<usize> {
    [1usize, 1, 4, 29, 355, 6942].get(n).copied()
}

pub fn lemma24_bruteforce(n: usize) -> Result<BruteReport, TopoError> {
    if n > 5 {
        return Err(TopoError::SizeCap { what: "points", got: n, cap: 5 });
    }
    let spaces = enumerate_topologies(n)?;
    if let Some(expected) = expected_topology_count(n) {
        if spaces.len() != expected {
            return Err(TopoError::Precondition(format!(
                "enumerator checksum: got {} topologies on {n} points, expected {expected}",
                spaces.len()
            )));
        }
    }
    let mut rows = Vec::with_capacity(spaces.len());
    let mut forward_failures = 0;
    let mut backward_failures = 0;
    let mut budget_exhausted = false;
    for (i, space) in spaces.iter().enumerate() {
        let free = max_free_sequence(space);
        let mut per_cap = Vec::new();
        for l in 0..n {
            let mut budget = 2_000_000usize;
            let counter = match covering_counterexample(space, l, &mut budget) {
                Ok(c) => c,
                Err(TopoError::StepBudget(_)) => {
                    budget_exhausted = true;
                    None
                }
                Err(e) => return Err(e),
            };
            let covering_holds = counter.is_none();
            let no_free_succ = free.len() <= l;
            let forward_fails = if no_free_succ && !covering_holds {
                forward_failures += 1;
                counter.as_ref().map(|(y, fam)| CoverCounterexample {
                    y: space.mask_points(*y).iter().map(|&p| space.point_name(p).into()).collect(),
                    family: fam.iter().map(|&u| {
                        space.mask_points(u).iter().map(|&p| space.point_name(p).into()).collect()
                    }).collect(),
                })
            } else {
                None
            };
            let backward_fails = if covering_holds && !no_free_succ {
                backward_failures += 1;
                Some(free.iter().map(|&p| space.point_name(p).to_string()).collect())
            } else {
                None
            };
            per_cap.push(BruteCell { l, covering_holds, no_free_succ, forward_fails, backward_fails });
        }
        rows.push(BruteRow {
            topology_index: i,
            opens: space
                .opens()
                .iter()
                .map(|&o| {
                    space.mask_points(o).iter().map(|&p| space.point_name(p).into()).collect()
                })
                .collect(),
            free_max: free.len(),
            per_cap,
        });
    }
    Ok(BruteReport {
        n,
        topology_count: rows.len(),
        rows,
        forward_failures,
        backward_failures,
        budget_exhausted,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn extract_trivial_cover() {
        let s = FiniteSpace::sierpinski();
        let y = s.full();
        let out = lemma24_extract(&s, y, &[s.full()], 1).unwrap();
        assert_eq!(out, Lemma24Outcome::Cover(vec![s.full()]));
    }

    #[test]
    fn extract_free_sequence_two_point_singletons() {
        // discrete 2, singleton family, L = 1: one singleton cannot cover
        let s = FiniteSpace::discrete(2);
        match lemma24_extract(&s, s.full(), &[0b01, 0b10], 1).unwrap() {
            Lemma24Outcome::FreeSeq(seq) => {
                assert_eq!(seq.len(), 1);
                assert!(is_free_sequence(&s, &seq));
            }
            other => panic!("expected a free sequence, got {other:?}"),
        }
    }

    #[test]
    fn extract_free_sequence_on_discrete_pairs() {
        // discrete 5 with all two-point opens at L = 2: pairs absorb every
        // closure of size <= 2, but two pairs cover only four of five points
        let n = 5;
        let s = FiniteSpace::discrete(n);
        let mut family: Vec<Mask> = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                family.push((1 << i) | (1 << j));
            }
        }
        match lemma24_extract(&s, s.full(), &family, 2).unwrap() {
            Lemma24Outcome::FreeSeq(seq) => {
                assert_eq!(seq.len(), 2);
                assert!(is_free_sequence(&s, &seq));
            }
            other => panic!("expected a free sequence, got {other:?}"),
        }
    }

    #[test]
    fn extract_hypothesis_check() {
        // singletons cannot absorb two-point closures on a discrete space
        let s = FiniteSpace::discrete(3);
        let family: Vec<Mask> = (0..3).map(|i| 1 << i).collect();
        assert!(matches!(
            lemma24_extract(&s, s.full(), &family, 2),
            Err(TopoError::HypothesisFails(_))
        ));
        // empty member rejected
        assert!(matches!(
            lemma24_extract(&s, s.full(), &[0], 1),
            Err(TopoError::NotOpen(_))
        ));
    }

    #[test]
    fn enumerator_checksums() {
        assert_eq!(enumerate_topologies(1).unwrap().len(), 1);
        assert_eq!(enumerate_topologies(2).unwrap().len(), 4);
        assert_eq!(enumerate_topologies(3).unwrap().len(), 29);
    }

    #[test]
    fn brute_small() {
        let r = lemma24_bruteforce(2).unwrap();
        assert_eq!(r.topology_count, 4);
        assert!(!r.budget_exhausted);
        let r = lemma24_bruteforce(1).unwrap();
        assert_eq!(r.topology_count, 1);
    }

    #[test]
    fn covering_search_on_discrete() {
        // discrete 3, L = 1: the three singleton choices admit no 1-cover
        let s = FiniteSpace::discrete(3);
        let mut budget = 1_000_000;
        let c = covering_counterexample(&s, 1, &mut budget).unwrap();
        assert!(c.is_some());
        // L = 2: every admissible family contains a pair-or-bigger above
        // each two-point closure, and two such members always cover
        let mut budget = 1_000_000;
        let c = covering_counterexample(&s, 2, &mut budget).unwrap();
        assert!(c.is_none());
    }
}

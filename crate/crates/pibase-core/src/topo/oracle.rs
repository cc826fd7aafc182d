//! Builder-facing space oracles: a finite-space adapter, the rational line,
//! and ordinal intervals with the order topology.
//!
//! The builder needs little from a space: a canonical left-separated dense
//! enumeration, closures of finite point sets and of the opens it builds,
//! intersections/disjointness of those closures, deterministic point picks,
//! and a canonical local pi-base at each point whose members' closures avoid
//! a given closed set. Infinite spaces expose a nested neighborhood base so
//! the truncated local-pi-base condition is checkable.

use std::cell::RefCell;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::term::OrdinalTerm;
use crate::topo::free::left_separated_order;
use crate::topo::space::{FiniteSpace, Mask};

pub trait BuilderSpace {
    type Point: Clone + PartialEq;
    type Open: Clone;
    type Closed: Clone;

    fn describe(&self) -> String;
    fn check_regular(&self) -> Result<(), String>;
    fn point_label(&self, p: &Self::Point) -> String;
    fn open_label(&self, o: &Self::Open) -> String;
    fn closed_label(&self, c: &Self::Closed) -> String;

    /// The i-th point of the canonical left-separated dense enumeration.
    fn dense_point(&self, i: usize) -> Option<Self::Point>;
    fn closure_of_points(&self, pts: &[Self::Point]) -> Self::Closed;
    fn closure_of_open(&self, o: &Self::Open) -> Self::Closed;
    /// Intersection of finitely many closed sets (empty slice = whole space
    /// is not needed; callers pass at least one).
    fn intersect_closeds(&self, cs: &[Self::Closed]) -> Self::Closed;
    fn closed_is_empty(&self, c: &Self::Closed) -> bool;
    fn closed_contains(&self, c: &Self::Closed, p: &Self::Point) -> bool;
    fn closeds_disjoint(&self, a: &Self::Closed, b: &Self::Closed) -> bool;
    /// Deterministic pick of a point from a nonempty closed set.
    fn pick_point(&self, c: &Self::Closed) -> Option<Self::Point>;
    /// The i-th member of the canonical local pi-base at `p`; with `avoid`
    /// given, the member's closure must not meet it.
    fn local_base_member(
        &self,
        p: &Self::Point,
        i: usize,
        avoid: Option<&Self::Closed>,
    ) -> Option<Self::Open>;
    /// The j-th member of the canonical nested neighborhood base at `p`.
    fn nested_nbhd(&self, p: &Self::Point, j: usize) -> Self::Open;
    fn open_subset_of(&self, a: &Self::Open, b: &Self::Open) -> bool;
    /// Exact definitional local-pi-base check, where the space has one
    /// (finite spaces and isolated-point spaces). `None` means only the
    /// truncated nested-base check applies.
    fn exact_local_check(&self, p: &Self::Point, family: &[Self::Open]) -> Option<bool>;
}

// ---------------------------------------------------------------------------
// Finite spaces.
// ---------------------------------------------------------------------------

pub struct FiniteOracle {
    pub space: FiniteSpace,
    dense_order: Vec<usize>,
}

impl FiniteOracle {
    pub fn new(space: FiniteSpace) -> Result<Self, crate::error::TopoError> {
        let dense_order = left_separated_order(&space)?;
        Ok(FiniteOracle { space, dense_order })
    }
}

impl BuilderSpace for FiniteOracle {
    type Point = usize;
    type Open = Mask;
    type Closed = Mask;

    fn describe(&self) -> String {
        format!("finite space on {} points", self.space.n())
    }

    fn check_regular(&self) -> Result<(), String> {
        self.space.check_regular()
    }

    fn point_label(&self, p: &usize) -> String {
        self.space.point_name(*p).to_string()
    }

    fn open_label(&self, o: &Mask) -> String {
        self.space.set_name(*o)
    }

    fn closed_label(&self, c: &Mask) -> String {
        self.space.set_name(*c)
    }

    fn dense_point(&self, i: usize) -> Option<usize> {
        self.dense_order.get(i).copied()
    }

    fn closure_of_points(&self, pts: &[usize]) -> Mask {
        self.space.closure(pts.iter().fold(0, |m, &p| m | (1 << p)))
    }

    fn closure_of_open(&self, o: &Mask) -> Mask {
        self.space.closure(*o)
    }

    fn intersect_closeds(&self, cs: &[Mask]) -> Mask {
        cs.iter().fold(self.space.full(), |m, &c| m & c)
    }

    fn closed_is_empty(&self, c: &Mask) -> bool {
        *c == 0
    }

    fn closed_contains(&self, c: &Mask, p: &usize) -> bool {
        c & (1 << p) != 0
    }

    fn closeds_disjoint(&self, a: &Mask, b: &Mask) -> bool {
        a & b == 0
    }

    fn pick_point(&self, c: &Mask) -> Option<usize> {
        (0..self.space.n()).find(|&p| c & (1 << p) != 0)
    }

    fn local_base_member(&self, p: &usize, i: usize, avoid: Option<&Mask>) -> Option<Mask> {
        let u_min = self.space.min_nbhd(*p);
        self.space
            .nonempty_opens()
            .filter(|&o| o & !u_min == 0)
            .filter(|&o| match avoid {
                Some(a) => self.space.closure(o) & a == 0,
                None => true,
            })
            .nth(i)
    }

    fn nested_nbhd(&self, p: &usize, _j: usize) -> Mask {
        self.space.min_nbhd(*p)
    }

    fn open_subset_of(&self, a: &Mask, b: &Mask) -> bool {
        a & !b == 0
    }

    fn exact_local_check(&self, p: &usize, family: &[Mask]) -> Option<bool> {
        let u_min = self.space.min_nbhd(*p);
        Some(family.iter().any(|&s| s != 0 && s & !u_min == 0))
    }
}

// ---------------------------------------------------------------------------
// The rational line.
// ---------------------------------------------------------------------------

/// Closed sets the builder produces on the line: finite point sets and
/// closed segments.
#[derive(Debug, Clone, PartialEq)]
pub enum RatClosed {
    Points(Vec<BigRational>),
    Segment { lo: BigRational, hi: BigRational },
}

/// Open intervals with rational endpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct RatInterval {
    pub lo: BigRational,
    pub hi: BigRational,
}

pub struct RationalLine {
    enumeration: RefCell<Vec<BigRational>>,
    height: RefCell<i64>,
}

impl Default for RationalLine {
    fn default() -> Self {
        Self::new()
    }
}

impl RationalLine {
    pub fn new() -> Self {
        RationalLine {
            enumeration: RefCell::new(vec![BigRational::zero()]),
            height: RefCell::new(0),
        }
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    /// 0, 1, -1, 2, -2, 1/2, -1/2, 3, -3, 3/2, -3/2, 1/3, -1/3, 2/3, -2/3...
    /// (by height max(|num|, den), reduced fractions only).
    fn extend_enumeration(&self, upto: usize) {
        let mut e = self.enumeration.borrow_mut();
        let mut height = self.height.borrow_mut();
        while e.len() <= upto {
            *height += 1;
            let h = *height;
            for d in 1..=h {
                for n in 1..=h {
                    if n.max(d) != h || gcd(n, d) != 1 {
                        continue;
                    }
                    e.push(Self::rat(n, d));
                    e.push(Self::rat(-n, d));
                }
            }
        }
    }

    fn min_distance(&self, p: &BigRational, pts: &[BigRational]) -> Option<BigRational> {
        pts.iter().map(|q| (p - q).abs()).min()
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl BuilderSpace for RationalLine {
    type Point = BigRational;
    type Open = RatInterval;
    type Closed = RatClosed;

    fn describe(&self) -> String {
        "rational line".into()
    }

    fn check_regular(&self) -> Result<(), String> {
        Ok(()) // metric topology
    }

    fn point_label(&self, p: &BigRational) -> String {
        p.to_string()
    }

    fn open_label(&self, o: &RatInterval) -> String {
        format!("({},{})", o.lo, o.hi)
    }

    fn closed_label(&self, c: &RatClosed) -> String {
        match c {
            RatClosed::Points(ps) => {
                let items: Vec<String> = ps.iter().map(|p| p.to_string()).collect();
                format!("{{{}}}", items.join(","))
            }
            RatClosed::Segment { lo, hi } => format!("[{lo},{hi}]"),
        }
    }

    fn dense_point(&self, i: usize) -> Option<BigRational> {
        self.extend_enumeration(i);
        self.enumeration.borrow().get(i).cloned()
    }

    fn closure_of_points(&self, pts: &[BigRational]) -> RatClosed {
        let mut ps = pts.to_vec();
        ps.sort();
        ps.dedup();
        RatClosed::Points(ps)
    }

    fn closure_of_open(&self, o: &RatInterval) -> RatClosed {
        RatClosed::Segment { lo: o.lo.clone(), hi: o.hi.clone() }
    }

    fn intersect_closeds(&self, cs: &[RatClosed]) -> RatClosed {
        let mut acc = cs[0].clone();
        for c in &cs[1..] {
            acc = match (acc, c) {
                (RatClosed::Points(a), RatClosed::Points(b)) => {
                    RatClosed::Points(a.into_iter().filter(|p| b.contains(p)).collect())
                }
                (RatClosed::Points(a), RatClosed::Segment { lo, hi }) => RatClosed::Points(
                    a.into_iter().filter(|p| *lo <= *p && *p <= *hi).collect(),
                ),
                (RatClosed::Segment { lo, hi }, RatClosed::Points(b)) => RatClosed::Points(
                    b.iter().filter(|p| lo <= **p && **p <= hi).cloned().collect(),
                ),
                (RatClosed::Segment { lo, hi }, RatClosed::Segment { lo: lo2, hi: hi2 }) => {
                    let lo = lo.max(lo2.clone());
                    let hi = hi.min(hi2.clone());
                    if lo > hi {
                        RatClosed::Points(Vec::new())
                    } else {
                        RatClosed::Segment { lo, hi }
                    }
                }
            };
        }
        acc
    }

    fn closed_is_empty(&self, c: &RatClosed) -> bool {
        matches!(c, RatClosed::Points(ps) if ps.is_empty())
    }

    fn closed_contains(&self, c: &RatClosed, p: &BigRational) -> bool {
        match c {
            RatClosed::Points(ps) => ps.contains(p),
            RatClosed::Segment { lo, hi } => lo <= p && p <= hi,
        }
    }

    fn closeds_disjoint(&self, a: &RatClosed, b: &RatClosed) -> bool {
        self.closed_is_empty(&self.intersect_closeds(&[a.clone(), b.clone()]))
    }

    fn pick_point(&self, c: &RatClosed) -> Option<BigRational> {
        match c {
            RatClosed::Points(ps) => ps.first().cloned(),
            RatClosed::Segment { lo, .. } => Some(lo.clone()),
        }
    }

    fn local_base_member(
        &self,
        p: &BigRational,
        i: usize,
        avoid: Option<&RatClosed>,
    ) -> Option<RatInterval> {
        let nominal = Self::rat(1, (i as i64) + 1);
        let radius = match avoid {
            None => nominal,
            Some(RatClosed::Points(ps)) => match self.min_distance(p, ps) {
                None => nominal,
                Some(d) if d.is_zero() => return None, // p inside the avoided set
                Some(d) => nominal.min(d),
            },
            Some(seg @ RatClosed::Segment { lo, hi }) => {
                if self.closed_contains(seg, p) {
                    return None;
                }
                let d = if *p < *lo { lo - p } else { p - hi };
                nominal.min(d)
            }
        };
        // shrink past the constraint so the closure stays clear, doubling
        // the denominator with i so the members nest strictly
        let r = radius / pow_two(i as u32 + 2);
        Some(RatInterval { lo: p - &r, hi: p + &r })
    }

    fn nested_nbhd(&self, p: &BigRational, j: usize) -> RatInterval {
        let r = Self::rat(1, (j as i64) + 1);
        RatInterval { lo: p - &r, hi: p + &r }
    }

    fn open_subset_of(&self, a: &RatInterval, b: &RatInterval) -> bool {
        b.lo <= a.lo && a.hi <= b.hi
    }

    fn exact_local_check(&self, _p: &BigRational, _family: &[RatInterval]) -> Option<bool> {
        None
    }
}

fn pow_two(k: u32) -> BigRational {
    BigRational::from_integer(BigInt::from(2).pow(k))
}

// ---------------------------------------------------------------------------
// Ordinal intervals [0, beta) with the order topology.
// ---------------------------------------------------------------------------

/// At finite truncations the builder only ever touches isolated points
/// (successors and 0), whose canonical local base is the singleton; closed
/// sets in play are finite point sets.
pub struct OrdinalInterval {
    pub beta: OrdinalTerm,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrdSingleton(pub OrdinalTerm);

impl OrdinalInterval {
    pub fn new(beta: OrdinalTerm) -> Result<Self, crate::error::TopoError> {
        if beta.is_zero() {
            return Err(crate::error::TopoError::Document("empty ordinal interval".into()));
        }
        Ok(OrdinalInterval { beta })
    }
}

impl BuilderSpace for OrdinalInterval {
    type Point = OrdinalTerm;
    type Open = OrdSingleton;
    type Closed = Vec<OrdinalTerm>; // sorted finite point set

    fn describe(&self) -> String {
        format!("ordinal interval [0, {})", self.beta)
    }

    fn check_regular(&self) -> Result<(), String> {
        Ok(()) // order topologies are regular
    }

    fn point_label(&self, p: &OrdinalTerm) -> String {
        p.to_string()
    }

    fn open_label(&self, o: &OrdSingleton) -> String {
        format!("{{{}}}", o.0)
    }

    fn closed_label(&self, c: &Vec<OrdinalTerm>) -> String {
        let items: Vec<String> = c.iter().map(|p| p.to_string()).collect();
        format!("{{{}}}", items.join(","))
    }

    fn dense_point(&self, i: usize) -> Option<OrdinalTerm> {
        // isolated points in increasing order; below any infinite beta the
        // first omega of them are exactly the naturals
        let p = OrdinalTerm::from_nat(i as u64);
        if p < self.beta {
            Some(p)
        } else {
            None
        }
    }

    fn closure_of_points(&self, pts: &[OrdinalTerm]) -> Vec<OrdinalTerm> {
        let mut v = pts.to_vec();
        v.sort();
        v.dedup();
        v
    }

    fn closure_of_open(&self, o: &OrdSingleton) -> Vec<OrdinalTerm> {
        vec![o.0.clone()]
    }

    fn intersect_closeds(&self, cs: &[Vec<OrdinalTerm>]) -> Vec<OrdinalTerm> {
        let mut acc = cs[0].clone();
        for c in &cs[1..] {
            acc.retain(|p| c.contains(p));
        }
        acc
    }

    fn closed_is_empty(&self, c: &Vec<OrdinalTerm>) -> bool {
        c.is_empty()
    }

    fn closed_contains(&self, c: &Vec<OrdinalTerm>, p: &OrdinalTerm) -> bool {
        c.contains(p)
    }

    fn closeds_disjoint(&self, a: &Vec<OrdinalTerm>, b: &Vec<OrdinalTerm>) -> bool {
        a.iter().all(|p| !b.contains(p))
    }

    fn pick_point(&self, c: &Vec<OrdinalTerm>) -> Option<OrdinalTerm> {
        c.first().cloned()
    }

    fn local_base_member(
        &self,
        p: &OrdinalTerm,
        i: usize,
        avoid: Option<&Vec<OrdinalTerm>>,
    ) -> Option<OrdSingleton> {
        if i > 0 || p.is_limit() {
            return None;
        }
        if let Some(a) = avoid {
            if a.contains(p) {
                return None;
            }
        }
        Some(OrdSingleton(p.clone()))
    }

    fn nested_nbhd(&self, p: &OrdinalTerm, _j: usize) -> OrdSingleton {
        OrdSingleton(p.clone())
    }

    fn open_subset_of(&self, a: &OrdSingleton, b: &OrdSingleton) -> bool {
        a.0 == b.0
    }

    fn exact_local_check(&self, p: &OrdinalTerm, family: &[OrdSingleton]) -> Option<bool> {
        if p.is_limit() {
            return None;
        }
        Some(family.iter().any(|s| s.0 == *p))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    #[test]
    fn rational_enumeration() {
        let line = RationalLine::new();
        let q: Vec<String> = (0..9).map(|i| line.dense_point(i).unwrap().to_string()).collect();
        assert_eq!(q, vec!["0", "1", "-1", "2", "-2", "1/2", "-1/2", "3", "-3"]);
        // deterministic across sessions
        let line2 = RationalLine::new();
        for i in 0..40 {
            assert_eq!(line.dense_point(i), line2.dense_point(i));
        }
    }

    #[test]
    fn rational_local_base_avoids() {
        let line = RationalLine::new();
        let p = RationalLine::rat(1, 2);
        let avoid = line.closure_of_points(&[BigRational::zero(), BigRational::one()]);
        for i in 0..4 {
            let s = line.local_base_member(&p, i, Some(&avoid)).unwrap();
            let cl = line.closure_of_open(&s);
            assert!(line.closeds_disjoint(&cl, &avoid));
            assert!(line.open_subset_of(&s, &line.nested_nbhd(&p, i)));
        }
        // nesting is strict
        let s0 = line.local_base_member(&p, 0, Some(&avoid)).unwrap();
        let s1 = line.local_base_member(&p, 1, Some(&avoid)).unwrap();
        assert!(line.open_subset_of(&s1, &s0) && s0 != s1);
    }

    #[test]
    fn ordinal_interval_oracle() {
        let space = OrdinalInterval::new(crate::parse::parse("w^2").unwrap()).unwrap();
        assert_eq!(space.dense_point(3), Some(OrdinalTerm::from_nat(3u32)));
        let p = OrdinalTerm::from_nat(2u32);
        let s = space.local_base_member(&p, 0, None).unwrap();
        assert_eq!(space.closure_of_open(&s), vec![p.clone()]);
        assert_eq!(space.exact_local_check(&p, &[s]), Some(true));
        // no singleton base at a limit
        assert!(space
            .local_base_member(&crate::parse::parse("w").unwrap(), 0, None)
            .is_none());
    }
}

//! Finite topological spaces given by explicit open families.
//!
//! Point sets are bitmasks. Every finite topology has minimal open
//! neighborhoods `U_min(p)` (the intersection of all opens containing `p`),
//! which make closure and interior one-liners:
//! `p in cl(A) <=> U_min(p) meets A` and `p in int(A) <=> U_min(p) <= A`.

use std::collections::BTreeSet;

use serde::Deserialize;

use crate::error::TopoError;

pub type Mask = u32;

/// Hard cap on the number of points; subset searches run in `2^n`.
pub const MAX_POINTS: usize = 16;

#[derive(Debug, Clone)]
pub struct FiniteSpace {
    points: Vec<String>,
    opens: Vec<Mask>,
    is_open_table: Vec<bool>,
    min_nbhd: Vec<Mask>,
    full: Mask,
}

#[derive(Deserialize)]
struct SpaceDoc {
    points: Vec<String>,
    #[serde(default)]
    opens: Option<Vec<Vec<String>>>,
    #[serde(default)]
    base: Option<Vec<Vec<String>>>,
}

impl FiniteSpace {
    /// Strict loader: the family must already be a topology (contain the
    /// empty set and the full set, and be closed under union and
    /// intersection).
    pub fn from_opens(points: Vec<String>, opens: Vec<Mask>) -> Result<Self, TopoError> {
        let n = points.len();
        Self::check_points(&points)?;
        let full: Mask = if n == 0 { 0 } else { (1u32 << n) - 1 };
        let set: BTreeSet<Mask> = opens.iter().copied().collect();
        if !set.contains(&0) {
            return Err(TopoError::NotATopology("missing the empty set".into()));
        }
        if !set.contains(&full) {
            return Err(TopoError::NotATopology("missing the full set".into()));
        }
        for &a in &set {
            if a & !full != 0 {
                return Err(TopoError::NotATopology(format!("{a:#b} is not a subset")));
            }
            for &b in &set {
                if !set.contains(&(a | b)) {
                    return Err(TopoError::NotATopology(format!(
                        "not closed under union: {:?} | {:?}",
                        a, b
                    )));
                }
                if !set.contains(&(a & b)) {
                    return Err(TopoError::NotATopology(format!(
                        "not closed under intersection: {:?} & {:?}",
                        a, b
                    )));
                }
            }
        }
        Ok(Self::assemble(points, set))
    }

    /// Generates the topology from a base family: the closure of the family
    /// under unions and intersections (with the empty and full sets added).
    ///
    /// Every member of that closure is a union of minimal neighborhoods
    /// `U_min(p) = intersection of base members containing p`, so the opens
    /// are exactly the masks closed under `p -> U_min(p)`.
    pub fn from_base(points: Vec<String>, base: Vec<Mask>) -> Result<Self, TopoError> {
        Self::check_points(&points)?;
        let n = points.len();
        let full: Mask = if n == 0 { 0 } else { (1u32 << n) - 1 };
        let mut min_nbhd = vec![full; n];
        for p in 0..n {
            for &b in &base {
                if b & (1 << p) != 0 {
                    min_nbhd[p] &= b;
                }
            }
        }
        let mut set: BTreeSet<Mask> = BTreeSet::new();
        for m in 0..=(full as usize) {
            let m = m as Mask;
            let open = (0..n).all(|p| m & (1 << p) == 0 || min_nbhd[p] & !m == 0);
            if open {
                set.insert(m);
            }
        }
        Ok(Self::assemble(points, set))
    }

    fn check_points(points: &[String]) -> Result<(), TopoError> {
        if points.len() > MAX_POINTS {
            return Err(TopoError::SizeCap {
                what: "points",
                got: points.len(),
                cap: MAX_POINTS,
            });
        }
        let distinct: BTreeSet<&String> = points.iter().collect();
        if distinct.len() != points.len() {
            return Err(TopoError::Document("duplicate point names".into()));
        }
        Ok(())
    }

    fn assemble(points: Vec<String>, set: BTreeSet<Mask>) -> FiniteSpace {
        let n = points.len();
        let full: Mask = if n == 0 { 0 } else { (1u32 << n) - 1 };
        let opens: Vec<Mask> = set.iter().copied().collect();
        let mut is_open_table = vec![false; (full as usize) + 1];
        for &o in &opens {
            is_open_table[o as usize] = true;
        }
        let mut min_nbhd = vec![full; n];
        for p in 0..n {
            for &o in &opens {
                if o & (1 << p) != 0 {
                    min_nbhd[p] &= o;
                }
            }
        }
        FiniteSpace { points, opens, is_open_table, min_nbhd, full }
    }

    /// Parses the JSON document format: `points` plus either `opens`
    /// (strict) or `base` (generate).
    pub fn load_json(doc: &str) -> Result<Self, TopoError> {
        let doc: SpaceDoc =
            serde_json::from_str(doc).map_err(|e| TopoError::Document(e.to_string()))?;
        let points = doc.points.clone();
        let to_masks = |families: &[Vec<String>]| -> Result<Vec<Mask>, TopoError> {
            families
                .iter()
                .map(|family| {
                    let mut m: Mask = 0;
                    for name in family {
                        let idx = points
                            .iter()
                            .position(|p| p == name)
                            .ok_or_else(|| TopoError::UnknownPoint(name.clone()))?;
                        m |= 1 << idx;
                    }
                    Ok(m)
                })
                .collect()
        };
        match (&doc.opens, &doc.base) {
            (Some(opens), None) => Self::from_opens(points.clone(), to_masks(opens)?),
            (None, Some(base)) => Self::from_base(points.clone(), to_masks(base)?),
            _ => Err(TopoError::Document(
                "document must have exactly one of `opens` or `base`".into(),
            )),
        }
    }

    pub fn n(&self) -> usize {
        self.points.len()
    }

    pub fn full(&self) -> Mask {
        self.full
    }

    pub fn opens(&self) -> &[Mask] {
        &self.opens
    }

    pub fn nonempty_opens(&self) -> impl Iterator<Item = Mask> + '_ {
        self.opens.iter().copied().filter(|&o| o != 0)
    }

    pub fn is_open(&self, m: Mask) -> bool {
        self.is_open_table.get(m as usize).copied().unwrap_or(false)
    }

    pub fn min_nbhd(&self, p: usize) -> Mask {
        self.min_nbhd[p]
    }

    pub fn closure(&self, a: Mask) -> Mask {
        let mut cl = 0;
        for p in 0..self.n() {
            if self.min_nbhd[p] & a != 0 {
                cl |= 1 << p;
            }
        }
        cl
    }

    pub fn interior(&self, a: Mask) -> Mask {
        let mut int = 0;
        for p in 0..self.n() {
            if self.min_nbhd[p] & !a == 0 {
                int |= 1 << p;
            }
        }
        int
    }

    pub fn is_closed(&self, a: Mask) -> bool {
        self.closure(a) == a
    }

    /// Finite spaces are regular exactly when every minimal neighborhood is
    /// closed. Returns a witness of the failure otherwise.
    pub fn check_regular(&self) -> Result<(), String> {
        for p in 0..self.n() {
            let u = self.min_nbhd[p];
            let cl = self.closure(u);
            if cl != u {
                return Err(format!(
                    "cannot separate {} from the closure of its minimal neighborhood {}",
                    self.points[p],
                    self.set_name(u),
                ));
            }
        }
        Ok(())
    }

    pub fn point_name(&self, p: usize) -> &str {
        &self.points[p]
    }

    pub fn point_index(&self, name: &str) -> Result<usize, TopoError> {
        self.points
            .iter()
            .position(|p| p == name)
            .ok_or_else(|| TopoError::UnknownPoint(name.to_string()))
    }

    pub fn mask_of_names(&self, names: &[String]) -> Result<Mask, TopoError> {
        let mut m = 0;
        for name in names {
            m |= 1 << self.point_index(name)?;
        }
        Ok(m)
    }

    pub fn set_name(&self, m: Mask) -> String {
        let names: Vec<&str> =
            (0..self.n()).filter(|p| m & (1 << p) != 0).map(|p| self.point_name(p)).collect();
        format!("{{{}}}", names.join(","))
    }

    pub fn mask_points(&self, m: Mask) -> Vec<usize> {
        (0..self.n()).filter(|p| m & (1 << p) != 0).collect()
    }

    /// The discrete space on `n` points named p0..p{n-1}.
    pub fn discrete(n: usize) -> FiniteSpace {
        let points: Vec<String> = (0..n).map(|i| format!("p{i}")).collect();
        let base: Vec<Mask> = (0..n).map(|i| 1 << i).collect();
        Self::from_base(points, base).expect("discrete space is a topology")
    }

    /// The two-point space {∅, {a}, {a,b}}.
    pub fn sierpinski() -> FiniteSpace {
        Self::from_opens(
            vec!["a".into(), "b".into()],
            vec![0b00, 0b01, 0b11],
        )
        .expect("sierpinski family is a topology")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn load_and_validate() {
        let s = FiniteSpace::sierpinski();
        assert_eq!(s.n(), 2);
        assert_eq!(s.opens().len(), 3);
        // missing full set
        let bad = FiniteSpace::from_opens(vec!["a".into(), "b".into()], vec![0b00, 0b01]);
        assert!(matches!(bad, Err(TopoError::NotATopology(_))));
        // base generation: discrete
        let d = FiniteSpace::discrete(2);
        assert_eq!(d.opens().len(), 4);
    }

    #[test]
    fn kuratowski_axioms() {
        for space in [
            FiniteSpace::sierpinski(),
            FiniteSpace::discrete(3),
            FiniteSpace::from_base(
                vec!["a".into(), "b".into(), "c".into()],
                vec![0b011, 0b110],
            )
            .unwrap(),
        ] {
            assert_eq!(space.closure(0), 0);
            for a in 0..=space.full() {
                let cl = space.closure(a);
                assert_eq!(cl & a, a, "extensive");
                assert_eq!(space.closure(cl), cl, "idempotent");
                for b in 0..=space.full() {
                    assert_eq!(
                        space.closure(a | b),
                        space.closure(a) | space.closure(b),
                        "additive"
                    );
                }
            }
        }
    }

    #[test]
    fn closure_interior_duality() {
        let s = FiniteSpace::sierpinski();
        for a in 0..=s.full() {
            let co_int = s.full() & !s.interior(a);
            assert_eq!(co_int, s.closure(s.full() & !a));
        }
    }

    #[test]
    fn regularity() {
        assert!(FiniteSpace::discrete(4).check_regular().is_ok());
        assert!(FiniteSpace::sierpinski().check_regular().is_err());
    }

    #[test]
    fn document_parsing() {
        let s = FiniteSpace::load_json(
            r#"{"points":["a","b"],"opens":[[],["a"],["a","b"]]}"#,
        )
        .unwrap();
        assert_eq!(s.opens().len(), 3);
        let s = FiniteSpace::load_json(r#"{"points":["a","b"],"base":[["a"],["b"]]}"#).unwrap();
        assert_eq!(s.opens().len(), 4);
        assert!(FiniteSpace::load_json(r#"{"points":["a"],"opens":[["zz"]]}"#).is_err());
        assert!(FiniteSpace::load_json(r#"{"points":["a"]}"#).is_err());
    }
}

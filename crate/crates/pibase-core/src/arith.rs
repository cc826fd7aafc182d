//! Exact ordinal arithmetic on canonical terms.
//!
//! Addition absorbs small left tails, multiplication follows the usual base-w
//! product rules, and `sub_left` computes the order type of an interval:
//! the unique `b` with `g + b = d`. All results come back in canonical form.

use crate::cardinal::CardinalLevel;
use crate::error::Error;
use crate::term::{Monomial, OrdinalTerm};

impl OrdinalTerm {
    /// Ordinal sum `self + rhs`.
    pub fn add(&self, rhs: &OrdinalTerm) -> OrdinalTerm {
        let bm = rhs.monomials();
        let Some(first) = bm.first() else {
            return self.clone();
        };
        let am = self.monomials();
        let keep = am.iter().take_while(|m| m.exp > first.exp).count();
        let mut out: Vec<Monomial> = am[..keep].to_vec();
        if keep < am.len() && am[keep].exp == first.exp {
            out.push(Monomial::new(first.exp.clone(), &am[keep].coeff + &first.coeff));
        } else {
            out.push(first.clone());
        }
        out.extend(bm[1..].iter().cloned());
        OrdinalTerm::from_monomials(out)
    }

    /// Ordinal successor.
    pub fn succ(&self) -> OrdinalTerm {
        self.add(&OrdinalTerm::one())
    }

    /// Ordinal product `self * rhs`, by left distribution over the canonical
    /// sum of `rhs`: a finite last part multiplies the leading coefficient,
    /// an infinite monomial `w^f` bumps the leading exponent.
    pub fn mul(&self, rhs: &OrdinalTerm) -> OrdinalTerm {
        if self.is_zero() || rhs.is_zero() {
            return OrdinalTerm::zero();
        }
        let am = self.monomials();
        let lead = &am[0];
        let mut acc = OrdinalTerm::zero();
        for m in rhs.monomials().iter() {
            let piece = if m.exp.is_zero() {
                // self * n: multiply the leading coefficient, keep the tail.
                let mut ms = Vec::with_capacity(am.len());
                ms.push(Monomial::new(lead.exp.clone(), &lead.coeff * &m.coeff));
                ms.extend(am[1..].iter().cloned());
                OrdinalTerm::from_monomials(ms)
            } else {
                OrdinalTerm::from_monomials(vec![Monomial::new(
                    lead.exp.add(&m.exp),
                    m.coeff.clone(),
                )])
            };
            acc = acc.add(&piece);
        }
        acc
    }

    /// Left subtraction: the unique `b` with `g + b = self`, i.e. the order
    /// type of the interval `[g, self)`. Requires `g <= self`.
    pub fn sub_left(&self, g: &OrdinalTerm) -> Result<OrdinalTerm, Error> {
        let underflow = || Error::SubLeftUnderflow {
            subtrahend: g.to_string(),
            minuend: self.to_string(),
        };
        let dm = self.monomials();
        let gm = g.monomials();
        let mut i = 0;
        while i < gm.len() {
            let Some(d) = dm.get(i) else {
                return Err(underflow());
            };
            let gmi = &gm[i];
            match gmi.exp.cmp(&d.exp) {
                std::cmp::Ordering::Greater => return Err(underflow()),
                std::cmp::Ordering::Less => {
                    // g's tail is absorbed; the rest of self is the difference.
                    return Ok(OrdinalTerm::from_monomials(dm[i..].to_vec()));
                }
                std::cmp::Ordering::Equal => match gmi.coeff.cmp(&d.coeff) {
                    std::cmp::Ordering::Greater => return Err(underflow()),
                    std::cmp::Ordering::Less => {
                        let mut out =
                            vec![Monomial::new(d.exp.clone(), &d.coeff - &gmi.coeff)];
                        out.extend(dm[i + 1..].iter().cloned());
                        return Ok(OrdinalTerm::from_monomials(out));
                    }
                    std::cmp::Ordering::Equal => i += 1,
                },
            }
        }
        Ok(OrdinalTerm::from_monomials(dm[i..].to_vec()))
    }

    /// Division by an infinite cardinal: the maximal `eps` with
    /// `self = wk * eps + r` and `r < wk`.
    ///
    /// Monomials with exponent at least the cardinal's exponent `u` form the
    /// quotient (their exponents shift down by `u`); the rest is the
    /// remainder, automatically below `wk`.
    pub fn div_by_cardinal(
        &self,
        kappa: &CardinalLevel,
    ) -> Result<(OrdinalTerm, OrdinalTerm), Error> {
        let level = match kappa {
            CardinalLevel::Aleph(k) => *k,
            CardinalLevel::Finite(n) => return Err(Error::FiniteKappa(n.to_string())),
        };
        let u = cardinal_exponent(level);
        let ms = self.monomials();
        let split = ms.iter().take_while(|m| m.exp >= u).count();
        let mut q = Vec::with_capacity(split);
        for m in &ms[..split] {
            let shifted = m.exp.sub_left(&u).expect("exp >= u by the split");
            q.push(Monomial::new(shifted, m.coeff.clone()));
        }
        let quotient = OrdinalTerm::from_monomials(q);
        let remainder = OrdinalTerm::from_monomials(ms[split..].to_vec());
        Ok((quotient, remainder))
    }
}

/// The exponent `u` with `wk = w^u`: `1` for `w`, the atom for `wk`.
pub(crate) fn cardinal_exponent(level: u32) -> OrdinalTerm {
    if level == 0 {
        OrdinalTerm::one()
    } else {
        OrdinalTerm::Atom(level)
    }
}

/// The cardinal `wk` as an ordinal term.
pub fn cardinal_term(kappa: &CardinalLevel) -> OrdinalTerm {
    match kappa {
        CardinalLevel::Finite(n) => OrdinalTerm::from_nat(n.clone()),
        CardinalLevel::Aleph(0) => OrdinalTerm::omega(),
        CardinalLevel::Aleph(k) => OrdinalTerm::Atom(*k),
    }
}

/// The cardinality of a term, as an ordinal term (`n`, `w`, or `wk`).
pub fn cardinality_term(t: &OrdinalTerm) -> OrdinalTerm {
    cardinal_term(&t.cardinality())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(v: u64) -> OrdinalTerm {
        OrdinalTerm::from_nat(v)
    }

    fn w() -> OrdinalTerm {
        OrdinalTerm::omega()
    }

    #[test]
    fn add_absorption() {
        // 1 + w = w
        assert_eq!(n(1).add(&w()), w());
        // w + 1 > w
        assert!(w().add(&n(1)) > w());
    }

    #[test]
    fn mul_omega_squared() {
        let w2 = w().mul(&w());
        assert_eq!(w2, OrdinalTerm::omega_pow(n(2)));
    }

    #[test]
    fn mul_atom_example() {
        // w1 * (w*2 + 3) = w^(w1+1)*2 + w1*3
        let w1 = OrdinalTerm::atom(1);
        let rhs = w().mul(&n(2)).add(&n(3));
        let got = w1.mul(&rhs);
        let e = w1.add(&n(1));
        let expected = OrdinalTerm::from_monomials(vec![
            Monomial::new(e, 2u32),
            Monomial::new(w1, 3u32),
        ]);
        assert_eq!(got, expected);
    }

    #[test]
    fn sub_left_examples() {
        // type([w, w*3+5)) = w*2+5
        let g = w();
        let d = w().mul(&n(3)).add(&n(5));
        let b = d.sub_left(&g).unwrap();
        assert_eq!(g.add(&b), d);
        assert_eq!(b, w().mul(&n(2)).add(&n(5)));
        // [d, d) is empty
        assert_eq!(d.sub_left(&d).unwrap(), OrdinalTerm::zero());
        // tail after absorption: type([w1, w1+w)) = w
        let w1 = OrdinalTerm::atom(1);
        assert_eq!(w1.add(&w()).sub_left(&w1).unwrap(), w());
        // underflow
        assert!(n(3).sub_left(&n(5)).is_err());
    }

    #[test]
    fn div_examples() {
        let k0 = CardinalLevel::aleph(0);
        // w*3+5 = w*3 + 5
        let (q, r) = w().mul(&n(3)).add(&n(5)).div_by_cardinal(&k0).unwrap();
        assert_eq!((q, r), (n(3), n(5)));
        // w1 + w^2 = w*(w1 + w)
        let w1 = OrdinalTerm::atom(1);
        let a = w1.add(&w().mul(&w()));
        let (q, r) = a.div_by_cardinal(&k0).unwrap();
        assert_eq!(q, w1.add(&w()));
        assert!(r.is_zero());
        assert_eq!(w().mul(&q), a);
        // 4 = w*0 + 4
        let (q, r) = n(4).div_by_cardinal(&k0).unwrap();
        assert_eq!((q, r), (OrdinalTerm::zero(), n(4)));
        // finite kappa rejected
        assert!(n(4).div_by_cardinal(&CardinalLevel::finite(2)).is_err());
    }
}

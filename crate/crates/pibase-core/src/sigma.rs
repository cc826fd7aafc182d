//! The sigma function, its normal form, the pressing-down gamma, and the
//! derived interval endpoint delta'.
//!
//! For an infinite cardinal kappa, sigma is defined by sigma(0) = 0,
//! sigma(1) = kappa, sigma(a+1) = sigma(a) + |sigma(a)|, and continuity at
//! limits. Evaluation here uses the closed form (the recursion is only
//! computable along successor chains; tests validate the two against each
//! other):
//!
//! - `sigma(a) = kappa * a` for `1 <= a < kappa+`,
//! - `sigma(a) = mu * (1 + (a - mu))` for `a` in a cardinal interval
//!   `[mu, mu+)` with `mu > kappa`.
//!
//! Every ordinal `d` then decomposes uniquely as
//! `d = sigma(a0) + ... + sigma(a_{n-1}) + Delta` with strictly descending
//! cardinalities `|sigma(ai)|` and `Delta < kappa`; `gamma(d)` drops the last
//! sigma term of that decomposition, which makes it pressing-down.

use serde::Serialize;

use crate::arith::{cardinal_term, cardinality_term};
use crate::cardinal::CardinalLevel;
use crate::error::Error;
use crate::term::OrdinalTerm;

/// The sigma-normal form of an ordinal: `d = sigma(a0)+...+sigma(a_{n-1}) + delta`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalForm {
    pub kappa: CardinalLevel,
    pub alphas: Vec<OrdinalTerm>,
    pub delta: OrdinalTerm,
}

impl NormalForm {
    pub fn len(&self) -> usize {
        self.alphas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alphas.is_empty()
    }

    /// The sigma values `sigma(ai)` of the components.
    pub fn sigma_values(&self) -> Vec<OrdinalTerm> {
        self.alphas.iter().map(|a| sigma_eval(&self.kappa, a).expect("components evaluate")).collect()
    }

    /// Prefix sums `s_i = sigma(a0) + ... + sigma(ai)`.
    pub fn prefix_sums(&self) -> Vec<OrdinalTerm> {
        let mut acc = OrdinalTerm::zero();
        self.sigma_values()
            .iter()
            .map(|s| {
                acc = acc.add(s);
                acc.clone()
            })
            .collect()
    }

    /// Rebuilds the ordinal the form decomposes.
    pub fn recompose(&self) -> OrdinalTerm {
        let mut acc = OrdinalTerm::zero();
        for s in self.sigma_values() {
            acc = acc.add(&s);
        }
        acc.add(&self.delta)
    }
}

/// Report for the CLI: a normal form rendered in the expression grammar.
#[derive(Debug, Clone, Serialize)]
pub struct NormalFormText {
    pub kappa: u32,
    pub alphas: Vec<String>,
    pub sigma_values: Vec<String>,
    pub delta: String,
    pub rendered: String,
}

impl NormalForm {
    pub fn to_text(&self) -> NormalFormText {
        let sigma_values = self.sigma_values();
        let mut pieces: Vec<String> =
            self.alphas.iter().map(|a| format!("sigma({a})")).collect();
        if pieces.is_empty() || !self.delta.is_zero() {
            pieces.push(self.delta.to_string());
        }
        NormalFormText {
            kappa: self.kappa.aleph_level().unwrap_or(0),
            alphas: self.alphas.iter().map(|a| a.to_string()).collect(),
            sigma_values: sigma_values.iter().map(|s| s.to_string()).collect(),
            delta: self.delta.to_string(),
            rendered: pieces.join(" + "),
        }
    }
}

/// Evaluates `sigma_kappa(a)` by the closed form.
pub fn sigma_eval(kappa: &CardinalLevel, a: &OrdinalTerm) -> Result<OrdinalTerm, Error> {
    let k = match kappa {
        CardinalLevel::Aleph(k) => *k,
        CardinalLevel::Finite(n) => return Err(Error::FiniteKappa(n.to_string())),
    };
    if a.is_zero() {
        return Ok(OrdinalTerm::zero());
    }
    let kt = cardinal_term(kappa);
    let m = a.max_atom_level();
    if m <= k {
        // 1 <= a < kappa+
        Ok(kt.mul(a))
    } else {
        // a in [mu, mu+) with mu = wm > kappa
        let mu = OrdinalTerm::atom(m);
        let beta = a.sub_left(&mu).expect("a >= its largest atom");
        Ok(mu.mul(&OrdinalTerm::one().add(&beta)))
    }
}

/// For `u >= kappa`, the unique `a` with `sigma(a) <= u < sigma(a+1)`,
/// together with `sigma(a)`.
pub fn sigma_floor(
    kappa: &CardinalLevel,
    u: &OrdinalTerm,
) -> Result<(OrdinalTerm, OrdinalTerm), Error> {
    let k = kappa.require_infinite(crate::cardinal::HARD_MAX_LEVEL)?;
    let kt = cardinal_term(kappa);
    if *u < kt {
        return Err(Error::OutOfDomain {
            arg: "u",
            expected: format!(">= {kt}"),
            got: u.to_string(),
        });
    }
    let m = u.max_atom_level();
    if m <= k {
        let (eps, _) = u.div_by_cardinal(kappa)?;
        let value = kt.mul(&eps);
        Ok((eps, value))
    } else {
        let mu_level = CardinalLevel::Aleph(m);
        let mu = OrdinalTerm::atom(m);
        let (q, _) = u.div_by_cardinal(&mu_level)?;
        let beta = q.sub_left(&OrdinalTerm::one()).expect("q >= 1 since u >= mu");
        let alpha = mu.add(&beta);
        let value = mu.mul(&q);
        Ok((alpha, value))
    }
}

/// The unique sigma-normal form of `d`, by greedy peeling of the residue type.
pub fn sigma_nf(kappa: &CardinalLevel, d: &OrdinalTerm) -> Result<NormalForm, Error> {
    kappa.require_infinite(crate::cardinal::HARD_MAX_LEVEL)?;
    let kt = cardinal_term(kappa);
    let mut alphas = Vec::new();
    let mut t = d.clone();
    while t >= kt {
        let (alpha, value) = sigma_floor(kappa, &t)?;
        t = t.sub_left(&value).expect("sigma(alpha) <= t");
        alphas.push(alpha);
        debug_assert!(alphas.len() <= 64, "normal forms are short");
    }
    Ok(NormalForm { kappa: kappa.clone(), alphas, delta: t })
}

/// The pressing-down function: the normal form of `d` minus its last sigma
/// term (`0` when the form is empty). `gamma(d) < d` for every `d > 0`.
pub fn gamma(kappa: &CardinalLevel, d: &OrdinalTerm) -> Result<OrdinalTerm, Error> {
    let nf = sigma_nf(kappa, d)?;
    Ok(gamma_of_nf(&nf))
}

pub(crate) fn gamma_of_nf(nf: &NormalForm) -> OrdinalTerm {
    let vals = nf.sigma_values();
    let mut acc = OrdinalTerm::zero();
    for s in vals.iter().take(vals.len().saturating_sub(1)) {
        acc = acc.add(s);
    }
    acc
}

/// For `d` with `Delta = 0` and `n >= 1`: `d' = gamma(d) + sigma(a_{n-1}+1)`,
/// which also equals `d + |sigma(a_{n-1})|`. Both routes are computed and
/// must agree.
pub fn delta_prime(kappa: &CardinalLevel, d: &OrdinalTerm) -> Result<OrdinalTerm, Error> {
    let nf = sigma_nf(kappa, d)?;
    delta_prime_of_nf(&nf, d)
}

pub(crate) fn delta_prime_of_nf(
    nf: &NormalForm,
    d: &OrdinalTerm,
) -> Result<OrdinalTerm, Error> {
    if !nf.delta.is_zero() {
        return Err(Error::DeltaPrimeUndefined {
            delta: d.to_string(),
            reason: format!("Delta = {} != 0", nf.delta),
        });
    }
    let Some(last) = nf.alphas.last() else {
        return Err(Error::DeltaPrimeUndefined { delta: d.to_string(), reason: "n = 0".into() });
    };
    let via_sigma = gamma_of_nf(nf).add(&sigma_eval(&nf.kappa, &last.succ())?);
    let last_sigma = sigma_eval(&nf.kappa, last)?;
    let via_card = d.add(&cardinality_term(&last_sigma));
    debug_assert_eq!(via_sigma, via_card, "the two delta' formulas must agree");
    Ok(via_sigma)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse;

    fn k0() -> CardinalLevel {
        CardinalLevel::aleph(0)
    }

    fn ev(k: &CardinalLevel, s: &str) -> OrdinalTerm {
        sigma_eval(k, &parse(s).unwrap()).unwrap()
    }

    #[test]
    fn sigma_small_values() {
        // sigma_w: 0 -> 0, 1 -> w, 2 -> w*2, w -> w^2
        assert!(ev(&k0(), "0").is_zero());
        assert_eq!(ev(&k0(), "1"), parse("w").unwrap());
        assert_eq!(ev(&k0(), "2"), parse("w*2").unwrap());
        assert_eq!(ev(&k0(), "w"), parse("w^2").unwrap());
        // across the first cardinal: sigma_w(w1) = w1, sigma_w(w1+1) = w1*2
        assert_eq!(ev(&k0(), "w1"), parse("w1").unwrap());
        assert_eq!(ev(&k0(), "w1+1"), parse("w1*2").unwrap());
    }

    #[test]
    fn nf_examples() {
        // d = 5: empty form
        let nf = sigma_nf(&k0(), &parse("5").unwrap()).unwrap();
        assert!(nf.is_empty());
        assert_eq!(nf.delta, parse("5").unwrap());

        // d = w1 + w*3 + 5 -> alphas <w1, 3>, Delta 5
        let nf = sigma_nf(&k0(), &parse("w1+w*3+5").unwrap()).unwrap();
        assert_eq!(nf.alphas, vec![parse("w1").unwrap(), parse("3").unwrap()]);
        assert_eq!(nf.delta, parse("5").unwrap());
        assert_eq!(nf.recompose(), parse("w1+w*3+5").unwrap());

        // d = w^2 -> alphas <w>, Delta 0
        let nf = sigma_nf(&k0(), &parse("w^2").unwrap()).unwrap();
        assert_eq!(nf.alphas, vec![parse("w").unwrap()]);
        assert!(nf.delta.is_zero());
    }

    #[test]
    fn gamma_examples() {
        assert!(gamma(&k0(), &OrdinalTerm::zero()).unwrap().is_zero());
        assert!(gamma(&k0(), &parse("w*3").unwrap()).unwrap().is_zero());
        assert_eq!(gamma(&k0(), &parse("w1+w*3+5").unwrap()).unwrap(), parse("w1").unwrap());
    }

    #[test]
    fn delta_prime_examples() {
        assert_eq!(delta_prime(&k0(), &parse("w^2").unwrap()).unwrap(), parse("w^2+w").unwrap());
        assert_eq!(delta_prime(&k0(), &parse("w1").unwrap()).unwrap(), parse("w1*2").unwrap());
        assert_eq!(delta_prime(&k0(), &parse("w").unwrap()).unwrap(), parse("w*2").unwrap());
        // Delta != 0 rejected
        assert!(delta_prime(&k0(), &parse("w+1").unwrap()).is_err());
        assert!(delta_prime(&k0(), &OrdinalTerm::zero()).is_err());
    }

    #[test]
    fn nf_text_rendering() {
        let nf = sigma_nf(&k0(), &parse("w1+w*3+5").unwrap()).unwrap();
        assert_eq!(nf.to_text().rendered, "sigma(w1) + sigma(3) + 5");
        let nf = sigma_nf(&k0(), &parse("w^2").unwrap()).unwrap();
        assert_eq!(nf.to_text().rendered, "sigma(w)");
        let nf = sigma_nf(&k0(), &parse("4").unwrap()).unwrap();
        assert_eq!(nf.to_text().rendered, "4");
    }
}

//! The canonical kappa-function `phi` and its constructive witnesses.
//!
//! `phi` is defined block by block on the intervals `[d, d + kappa)` between
//! consecutive kappa-multiples. In the block of `d` with sigma-normal form
//! `d = sigma(a0) + ... + sigma(a_{n-1})`, the offset of `xi` unpairs into
//! `(q, r)`; the clamped index `i = min(r, n-1)` selects the component level
//! `s_i = sigma(a0)+...+sigma(ai)`, and `phi(xi) = f_{s_i}(d + q)`. This is
//! the combination-of-blocks rule: it maps, cofinally often, onto the union
//! of the ranges of the participating `f`-levels.
//!
//! The block of 0 is the base surjection itself: `phi` restricted to
//! `[0, kappa)` is `f_0`, which is what makes every finite pattern over
//! `[0, kappa) x kappa` reachable below `kappa`.
//!
//! `phi_witness` inverts all of this: given a block base `d` (with `Delta=0`,
//! `n >= 1`) and a pattern over `[gamma(d), d) x kappa`, it returns
//! `xi in [gamma(d), d)` with `phi(xi) = A`, by the successor/limit descent
//! on the last component of the normal form.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_traits::ToPrimitive;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::arith::cardinal_term;
use crate::cardinal::{CardinalLevel, HARD_MAX_LEVEL};
use crate::codec::{
    f_delta_in, f_delta_witness_in, pair, unpair, BlockCtx, FinitePattern, IndexPair,
};
use crate::error::Error;
use crate::sample::sample_below;
use crate::sigma::{sigma_eval, sigma_floor, sigma_nf, NormalForm};
use crate::term::OrdinalTerm;

/// Per-kappa session: caches block normal forms and prefix sums.
///
/// The memo is behind a mutex (lookups are cheap and blocks recur heavily in
/// witness recursions); all public operations behave as pure functions.
pub struct PhiSession {
    kappa: CardinalLevel,
    kappa_term: OrdinalTerm,
    blocks: Mutex<HashMap<OrdinalTerm, Arc<BlockData>>>,
}

#[derive(Debug)]
pub struct BlockData {
    pub nf: NormalForm,
    pub prefix_sums: Vec<OrdinalTerm>,
    pub ctx: BlockCtx,
}

impl PhiSession {
    pub fn new(kappa: CardinalLevel) -> Result<Self, Error> {
        kappa.require_infinite(HARD_MAX_LEVEL)?;
        let kappa_term = cardinal_term(&kappa);
        Ok(PhiSession { kappa, kappa_term, blocks: Mutex::new(HashMap::new()) })
    }

    pub fn kappa(&self) -> &CardinalLevel {
        &self.kappa
    }

    /// Block data for a kappa-multiple `d`.
    fn block(&self, d: &OrdinalTerm) -> Result<Arc<BlockData>, Error> {
        if let Some(hit) = self.blocks.lock().unwrap().get(d) {
            return Ok(hit.clone());
        }
        let nf = sigma_nf(&self.kappa, d)?;
        if !nf.delta.is_zero() {
            return Err(Error::Precondition(format!(
                "{d} is not a kappa-multiple (Delta = {})",
                nf.delta
            )));
        }
        let prefix_sums = nf.prefix_sums();
        let ctx = BlockCtx::new(&self.kappa, d)?;
        let data = Arc::new(BlockData { nf, prefix_sums, ctx });
        self.blocks.lock().unwrap().insert(d.clone(), data.clone());
        Ok(data)
    }

    /// The base of the block containing `xi` (largest kappa-multiple below).
    pub fn block_base(&self, xi: &OrdinalTerm) -> (OrdinalTerm, OrdinalTerm) {
        let (eps, r) = xi.div_by_cardinal(&self.kappa).expect("kappa is infinite");
        (self.kappa_term.mul(&eps), r)
    }

    /// Evaluates `phi(xi)`; total, and `phi(xi)` is a subset of `xi x kappa`.
    pub fn eval(&self, xi: &OrdinalTerm) -> FinitePattern {
        let (d, eta) = self.block_base(xi);
        if d.is_zero() {
            // the block of 0 carries f_0 itself
            let ctx = BlockCtx::new(&self.kappa, &OrdinalTerm::zero())
                .expect("zero block always exists");
            return f_delta_in(&ctx, xi).expect("xi < kappa is in the domain of f_0");
        }
        let block = self.block(&d).expect("block bases are kappa-multiples");
        let n = block.nf.len();
        debug_assert!(n >= 1, "nonzero kappa-multiples have components");
        let (q, r) = unpair(&eta);
        let i = r
            .as_nat()
            .and_then(|r| r.to_usize())
            .filter(|&r| r < n)
            .unwrap_or(n - 1);
        let level = &block.prefix_sums[i];
        let level_block = self.block(level).expect("prefix sums are kappa-multiples");
        f_delta_in(&level_block.ctx, &d.add(&q))
            .expect("d + q lies in the domain of the component level")
    }

    /// The combination witness: for a block base `d` with `n` components,
    /// an index `i < n` and `xi0 in [d, d+kappa)`, returns
    /// `eta = d + pair(xi0 - d, i) >= xi0` with `phi(eta) = f_{s_i}(xi0)`.
    pub fn h_combination_witness(
        &self,
        d: &OrdinalTerm,
        i: usize,
        xi0: &OrdinalTerm,
    ) -> Result<OrdinalTerm, Error> {
        if d.is_zero() {
            return Err(Error::Precondition(
                "the block of 0 has no components to combine".into(),
            ));
        }
        let block = self.block(d)?;
        let n = block.nf.len();
        if i >= n {
            return Err(Error::OutOfDomain {
                arg: "i",
                expected: format!("< {n}"),
                got: i.to_string(),
            });
        }
        let upper = d.add(&self.kappa_term);
        if *xi0 < *d || *xi0 >= upper {
            return Err(Error::OutOfDomain {
                arg: "xi0",
                expected: format!("[{d}, {upper})"),
                got: xi0.to_string(),
            });
        }
        let offset = xi0.sub_left(d).expect("xi0 >= d");
        let eta = d.add(&pair(&offset, &OrdinalTerm::from_nat(i as u64)));
        debug_assert!(eta >= *xi0);
        Ok(eta)
    }

    /// Condition-(2) witness: for `d` with `Delta = 0`, `n >= 1` and a
    /// pattern `a` over `[gamma(d), d) x kappa`, a point
    /// `xi in [gamma(d), d)` with `phi(xi) = a`.
    pub fn witness(&self, d: &OrdinalTerm, a: &FinitePattern) -> Result<OrdinalTerm, Error> {
        let block = self.block(d)?;
        if block.nf.is_empty() {
            return Err(Error::Precondition(format!(
                "delta = {d} has an empty normal form; no pattern block below it"
            )));
        }
        let gamma = &block.ctx.gamma;
        for p in a.iter() {
            if p.first < *gamma || p.first >= *d || p.second >= self.kappa_term {
                return Err(Error::PatternOutOfRange(format!(
                    "{p} outside [{gamma}, {d}) x {}",
                    self.kappa_term
                )));
            }
        }
        self.witness_rec(d, a, 0)
    }

    fn witness_rec(
        &self,
        d: &OrdinalTerm,
        a: &FinitePattern,
        depth: usize,
    ) -> Result<OrdinalTerm, Error> {
        assert!(depth <= 256, "witness descent is short by construction");
        let block = self.block(d)?;
        let gamma = block.ctx.gamma.clone();
        let alpha_last = block.nf.alphas.last().expect("n >= 1").clone();

        if let Some(beta) = alpha_last.pred() {
            // successor component
            if beta.is_zero() {
                // d = gamma + kappa; the covering level is f_gamma
                if gamma.is_zero() {
                    // d = kappa: the block of 0 is f_0 itself
                    let ctx = BlockCtx::new(&self.kappa, &OrdinalTerm::zero())?;
                    return f_delta_witness_in(&ctx, a, Some(d));
                }
                let level_block = self.block(&gamma)?;
                let xi0 = f_delta_witness_in(&level_block.ctx, a, Some(d))?;
                let (b, _) = self.block_base(&xi0);
                debug_assert_eq!(b, gamma, "bounded witnesses stay in gamma's own block");
                let i = self.component_index(&b, &gamma)?;
                self.h_combination_witness(&b, i, &xi0)
            } else {
                // the level gamma + sigma(beta) covers exactly [gamma, d) x kappa
                let level = gamma.add(&sigma_eval(&self.kappa, &beta)?);
                let level_block = self.block(&level)?;
                debug_assert_eq!(level_block.ctx.gamma, gamma);
                debug_assert_eq!(level_block.ctx.delta_prime, *d);
                let xi0 = f_delta_witness_in(&level_block.ctx, a, None)?;
                let (b, _) = self.block_base(&xi0);
                let i = self.component_index(&b, &level)?;
                self.h_combination_witness(&b, i, &xi0)
            }
        } else {
            // limit component: descend to the least level whose interval
            // already contains the pattern
            let beta_star = match a.max_first() {
                None => OrdinalTerm::one(),
                Some(m) => {
                    let offset = m.sub_left(&gamma).expect("pattern range checked");
                    if offset < self.kappa_term {
                        OrdinalTerm::one()
                    } else {
                        let (floor, _) = sigma_floor(&self.kappa, &offset)?;
                        floor.succ()
                    }
                }
            };
            debug_assert!(beta_star < alpha_last);
            let d_star = gamma.add(&sigma_eval(&self.kappa, &beta_star)?);
            self.witness_rec(&d_star, a, depth + 1)
        }
    }

    /// Index of the prefix sum `level` in the normal form of `b`.
    fn component_index(&self, b: &OrdinalTerm, level: &OrdinalTerm) -> Result<usize, Error> {
        let block = self.block(b)?;
        block
            .prefix_sums
            .iter()
            .position(|s| s == level)
            .ok_or_else(|| {
                Error::Precondition(format!("{level} is not a component level of {b}"))
            })
    }
}

/// One-shot evaluation of `phi_kappa(xi)`.
pub fn phi_eval(kappa: &CardinalLevel, xi: &OrdinalTerm) -> Result<FinitePattern, Error> {
    Ok(PhiSession::new(kappa.clone())?.eval(xi))
}

/// One-shot witness for condition (2).
pub fn phi_witness(
    kappa: &CardinalLevel,
    d: &OrdinalTerm,
    a: &FinitePattern,
) -> Result<OrdinalTerm, Error> {
    PhiSession::new(kappa.clone())?.witness(d, a)
}

/// Report of a condition-(2) sampling run.
#[derive(Debug, Clone, Serialize)]
pub struct Condition2Report {
    pub kappa: u32,
    pub delta: String,
    pub samples: usize,
    pub passed: usize,
    pub vacuous: bool,
    pub failures: Vec<Condition2Failure>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Condition2Failure {
    pub pattern: String,
    pub reason: String,
}

impl Condition2Report {
    pub fn all_pass(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Samples random patterns over `[gamma(d), d) x kappa` and verifies the
/// witness roundtrip for each: `phi(witness(A)) = A` with the witness below
/// `d`. `d` must be a kappa-multiple; `d = 0` passes vacuously.
pub fn phi_check_condition2(
    kappa: &CardinalLevel,
    d: &OrdinalTerm,
    samples: usize,
    seed: u64,
) -> Result<Condition2Report, Error> {
    let session = PhiSession::new(kappa.clone())?;
    let k_level = kappa.aleph_level().expect("session checked kappa");
    let (_, rem) = d.div_by_cardinal(kappa)?;
    if !rem.is_zero() {
        return Err(Error::Precondition(format!(
            "delta = {d} is not a kappa-multiple (remainder {rem})"
        )));
    }
    let mut report = Condition2Report {
        kappa: k_level,
        delta: d.to_string(),
        samples,
        passed: 0,
        vacuous: d.is_zero(),
        failures: Vec::new(),
    };
    if d.is_zero() {
        return Ok(report);
    }
    let gamma = crate::sigma::gamma(kappa, d)?;
    let span = d.sub_left(&gamma).expect("gamma is pressing-down");
    let kt = cardinal_term(kappa);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let size = rng.gen_range(0..=3usize);
        let mut a = FinitePattern::empty();
        for _ in 0..size {
            let first = gamma.add(&sample_below(&mut rng, &span));
            let second = sample_below(&mut rng, &kt);
            a.insert(IndexPair::new(first, second));
        }
        match session.witness(d, &a) {
            Err(e) => report
                .failures
                .push(Condition2Failure { pattern: a.to_string(), reason: e.to_string() }),
            Ok(xi) => {
                let round = session.eval(&xi);
                if xi >= *d {
                    report.failures.push(Condition2Failure {
                        pattern: a.to_string(),
                        reason: format!("witness {xi} not below {d}"),
                    });
                } else if round != a {
                    report.failures.push(Condition2Failure {
                        pattern: a.to_string(),
                        reason: format!("phi({xi}) = {round} != pattern"),
                    });
                } else {
                    report.passed += 1;
                }
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse;

    fn t(s: &str) -> OrdinalTerm {
        parse(s).unwrap()
    }

    fn k0() -> CardinalLevel {
        CardinalLevel::aleph(0)
    }

    fn pat(pairs: &[(&str, &str)]) -> FinitePattern {
        FinitePattern::from_pairs(
            pairs.iter().map(|(a, b)| IndexPair::new(t(a), t(b))),
        )
    }

    #[test]
    fn eval_small() {
        let s = PhiSession::new(k0()).unwrap();
        // junk codes in the zero block give the empty pattern
        assert!(s.eval(&t("5")).is_empty());
        // condition (1) on a spot value
        let xi = t("w^2+17");
        let a = s.eval(&xi);
        for p in a.iter() {
            assert!(p.first < xi);
            assert!(p.second < OrdinalTerm::omega());
        }
    }

    #[test]
    fn witness_examples() {
        let s = PhiSession::new(k0()).unwrap();
        // A = {} at d = w: xi = 0 works, and our witness is below w
        let xi = s.witness(&t("w"), &FinitePattern::empty()).unwrap();
        assert!(xi < t("w"));
        assert!(s.eval(&xi).is_empty());

        // d = w^2, A = {(3,0), (w*2,1)}
        let a = pat(&[("3", "0"), ("w*2", "1")]);
        let xi = s.witness(&t("w^2"), &a).unwrap();
        assert!(xi < t("w^2"));
        assert_eq!(s.eval(&xi), a);

        // d = w1 + w^2, A = {(w1+1, 2)}: two-component interleaving
        let a = pat(&[("w1+1", "2")]);
        let xi = s.witness(&t("w1+w^2"), &a).unwrap();
        assert!(xi >= t("w1") && xi < t("w1+w^2"));
        assert_eq!(s.eval(&xi), a);
    }

    #[test]
    fn witness_at_kappa_itself() {
        // patterns over [0, w) x w are reached below w through f_0
        let s = PhiSession::new(k0()).unwrap();
        let a = pat(&[("3", "2")]);
        let xi = s.witness(&t("w"), &a).unwrap();
        assert!(xi < t("w"));
        assert_eq!(s.eval(&xi), a);
    }

    #[test]
    fn witness_out_of_range_rejected() {
        let s = PhiSession::new(k0()).unwrap();
        let a = pat(&[("w^2+1", "0")]); // not below d
        assert!(s.witness(&t("w^2"), &a).is_err());
        let a = pat(&[("1", "w")]); // second not below kappa
        assert!(s.witness(&t("w^2"), &a).is_err());
        // d with Delta != 0
        assert!(s.witness(&t("w+1"), &FinitePattern::empty()).is_err());
    }

    #[test]
    fn h_combination() {
        let s = PhiSession::new(k0()).unwrap();
        let d = t("w1+w^3"); // nf <w1, w^2>, prefix sums [w1, w1+w^3]
        let xi0 = d.clone();
        for i in 0..2 {
            let eta = s.h_combination_witness(&d, i, &xi0).unwrap();
            assert!(eta >= xi0);
            let block = s.block(&d).unwrap();
            let level = block.prefix_sums[i].clone();
            let level_block = s.block(&level).unwrap();
            let expected = f_delta_in(&level_block.ctx, &xi0).unwrap();
            assert_eq!(s.eval(&eta), expected);
        }
        assert!(s.h_combination_witness(&d, 2, &xi0).is_err());
        assert!(s.h_combination_witness(&d, 0, &t("0")).is_err());
    }

    #[test]
    fn check2_runs() {
        let r = phi_check_condition2(&k0(), &t("w"), 50, 0).unwrap();
        assert!(r.all_pass(), "failures: {:?}", r.failures);
        assert_eq!(r.passed, 50);
        let r = phi_check_condition2(&k0(), &t("w1*2"), 50, 0).unwrap();
        assert!(r.all_pass(), "failures: {:?}", r.failures);
        let r = phi_check_condition2(&k0(), &t("0"), 10, 0).unwrap();
        assert!(r.vacuous);
        assert!(phi_check_condition2(&k0(), &t("w+1"), 5, 0).is_err());
    }

    #[test]
    fn determinism() {
        let a = phi_check_condition2(&k0(), &t("w^2"), 25, 7).unwrap();
        let b = phi_check_condition2(&k0(), &t("w^2"), 25, 7).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }
}

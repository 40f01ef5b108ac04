//! Tautology checking over `L_k` by exhaustive enumeration of valuations.

use crate::error::Result;
use crate::formula::{Formula, Valuation};
use crate::limits::Limits;
use crate::rational::one;
use crate::scale::LkScale;

/// Number of valuations `(k+1)^n`, saturating at `u128::MAX` on overflow.
fn valuation_count(scale: LkScale, vars: usize) -> u128 {
    let base = u128::from(scale.len());
    let mut total: u128 = 1;
    for _ in 0..vars {
        total = match total.checked_mul(base) {
            Some(t) => t,
            None => return u128::MAX,
        };
    }
    total
}

/// Iterates every valuation of `vars` into `L_k`, in lexicographic order
/// (first variable most significant, values ascending).
pub struct ValuationIter<'a> {
    vars: Vec<&'a str>,
    scale: LkScale,
    digits: Vec<u64>,
    done: bool,
}

impl<'a> ValuationIter<'a> {
    pub fn new(vars: Vec<&'a str>, scale: LkScale) -> Self {
        let digits = vec![0; vars.len()];
        ValuationIter {
            vars,
            scale,
            digits,
            done: false,
        }
    }
}

impl Iterator for ValuationIter<'_> {
    type Item = Valuation;

    fn next(&mut self) -> Option<Valuation> {
        if self.done {
            return None;
        }
        let valuation = self
            .vars
            .iter()
            .zip(&self.digits)
            .map(|(name, &d)| (name.to_string(), self.scale.value(d)))
            .collect();
        // odometer step, least-significant digit last
        let mut i = self.digits.len();
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.digits[i] + 1 < self.scale.len() {
                self.digits[i] += 1;
                break;
            }
            self.digits[i] = 0;
        }
        Some(valuation)
    }
}

/// Finds a valuation over `L_k` under which `f` evaluates below 1, or
/// `None` when `f` is a tautology of the finite-valued logic.
///
/// Errors when `(k+1)^n` exceeds the valuation cap, or from evaluation.
pub fn tautology_counterexample(
    f: &Formula,
    scale: LkScale,
    limits: &Limits,
) -> Result<Option<Valuation>> {
    let vars: Vec<&str> = f.variables().into_iter().collect();
    limits.check(
        "tautology check",
        valuation_count(scale, vars.len()),
        limits.tautology_valuations,
        "valuations",
    )?;
    for valuation in ValuationIter::new(vars, scale) {
        if f.eval(&valuation, scale)? != one() {
            return Ok(Some(valuation));
        }
    }
    Ok(None)
}

/// True iff every valuation into `L_k` gives `f` the value 1.
pub fn is_tautology(f: &Formula, scale: LkScale, limits: &Limits) -> Result<bool> {
    Ok(tautology_counterexample(f, scale, limits)?.is_none())
}

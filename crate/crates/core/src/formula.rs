//! Payoff formulas: the non-modal language of finitely-valued Lukasiewicz
//! logic with truth constants, evaluated exactly over `L_k`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::rational::{zero, Rational};
use crate::scale::LkScale;
use crate::truth;

/// AST of a payoff formula. Derived connectives are first-class nodes and
/// are evaluated by their own truth functions; [`Formula::expand_derived`]
/// rewrites them to the primitive fragment and must agree (tested).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Formula {
    Var(String),
    /// Truth constant. The falsity constant is `Const(0)`.
    Const(Rational),
    Not(Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    /// Strong conjunction `&`: `max(0, a + b - 1)`.
    StrongConj(Box<Formula>, Box<Formula>),
    /// Strong disjunction `(+)`: `min(1, a + b)`.
    StrongDisj(Box<Formula>, Box<Formula>),
    /// Min conjunction `/\`.
    MinConj(Box<Formula>, Box<Formula>),
    /// Max disjunction `\/`.
    MaxDisj(Box<Formula>, Box<Formula>),
    /// Truncated difference `(-)`: `max(0, a - b)`.
    TruncSub(Box<Formula>, Box<Formula>),
    /// Biconditional `<->`: `1 - |a - b|`.
    Iff(Box<Formula>, Box<Formula>),
    /// Distance `d(a, b)`: `|a - b|`.
    Distance(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn var(name: impl Into<String>) -> Self {
        Formula::Var(name.into())
    }

    pub fn constant(v: Rational) -> Self {
        Formula::Const(v)
    }

    /// The falsity constant.
    pub fn falsum() -> Self {
        Formula::Const(zero())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(a: Formula) -> Self {
        Formula::Not(Box::new(a))
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn strong_conj(a: Formula, b: Formula) -> Self {
        Formula::StrongConj(Box::new(a), Box::new(b))
    }

    pub fn strong_disj(a: Formula, b: Formula) -> Self {
        Formula::StrongDisj(Box::new(a), Box::new(b))
    }

    pub fn min_conj(a: Formula, b: Formula) -> Self {
        Formula::MinConj(Box::new(a), Box::new(b))
    }

    pub fn max_disj(a: Formula, b: Formula) -> Self {
        Formula::MaxDisj(Box::new(a), Box::new(b))
    }

    pub fn trunc_sub(a: Formula, b: Formula) -> Self {
        Formula::TruncSub(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Self {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    pub fn distance(a: Formula, b: Formula) -> Self {
        Formula::Distance(Box::new(a), Box::new(b))
    }

    /// Variables occurring in the formula, sorted.
    pub fn variables(&self) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        self.collect_variables(&mut out);
        out
    }

    fn collect_variables<'a>(&'a self, out: &mut BTreeSet<&'a str>) {
        match self {
            Formula::Var(name) => {
                out.insert(name.as_str());
            }
            Formula::Const(_) => {}
            Formula::Not(a) => a.collect_variables(out),
            Formula::Implies(a, b)
            | Formula::StrongConj(a, b)
            | Formula::StrongDisj(a, b)
            | Formula::MinConj(a, b)
            | Formula::MaxDisj(a, b)
            | Formula::TruncSub(a, b)
            | Formula::Iff(a, b)
            | Formula::Distance(a, b) => {
                a.collect_variables(out);
                b.collect_variables(out);
            }
        }
    }

    /// Constants occurring in the formula.
    pub fn constants(&self) -> Vec<&Rational> {
        let mut out = Vec::new();
        self.collect_constants(&mut out);
        out
    }

    fn collect_constants<'a>(&'a self, out: &mut Vec<&'a Rational>) {
        match self {
            Formula::Var(_) => {}
            Formula::Const(c) => out.push(c),
            Formula::Not(a) => a.collect_constants(out),
            Formula::Implies(a, b)
            | Formula::StrongConj(a, b)
            | Formula::StrongDisj(a, b)
            | Formula::MinConj(a, b)
            | Formula::MaxDisj(a, b)
            | Formula::TruncSub(a, b)
            | Formula::Iff(a, b)
            | Formula::Distance(a, b) => {
                a.collect_constants(out);
                b.collect_constants(out);
            }
        }
    }

    /// Exact truth value under `valuation`, over the scale `L_k`.
    ///
    /// Errors on unbound variables and on variable or constant values
    /// outside `L_k`. The result is again in `L_k`.
    pub fn eval(&self, valuation: &Valuation, scale: LkScale) -> Result<Rational> {
        match self {
            Formula::Var(name) => {
                let v = valuation
                    .get(name)
                    .ok_or_else(|| Error::UnboundVariable(name.clone()))?;
                if !scale.contains(v) {
                    return Err(Error::OutsideScale {
                        value: v.clone(),
                        k: scale.k(),
                    });
                }
                Ok(v.clone())
            }
            Formula::Const(c) => {
                if !scale.contains(c) {
                    return Err(Error::OutsideScale {
                        value: c.clone(),
                        k: scale.k(),
                    });
                }
                Ok(c.clone())
            }
            Formula::Not(a) => Ok(truth::neg(&a.eval(valuation, scale)?)),
            Formula::Implies(a, b) => Ok(truth::implies(
                &a.eval(valuation, scale)?,
                &b.eval(valuation, scale)?,
            )),
            Formula::StrongConj(a, b) => Ok(truth::strong_conj(
                &a.eval(valuation, scale)?,
                &b.eval(valuation, scale)?,
            )),
            Formula::StrongDisj(a, b) => Ok(truth::strong_disj(
                &a.eval(valuation, scale)?,
                &b.eval(valuation, scale)?,
            )),
            Formula::MinConj(a, b) => Ok(truth::min_conj(
                &a.eval(valuation, scale)?,
                &b.eval(valuation, scale)?,
            )),
            Formula::MaxDisj(a, b) => Ok(truth::max_disj(
                &a.eval(valuation, scale)?,
                &b.eval(valuation, scale)?,
            )),
            Formula::TruncSub(a, b) => Ok(truth::trunc_sub(
                &a.eval(valuation, scale)?,
                &b.eval(valuation, scale)?,
            )),
            Formula::Iff(a, b) => Ok(truth::iff(
                &a.eval(valuation, scale)?,
                &b.eval(valuation, scale)?,
            )),
            Formula::Distance(a, b) => Ok(truth::distance(
                &a.eval(valuation, scale)?,
                &b.eval(valuation, scale)?,
            )),
        }
    }

    /// Rewrites every derived connective to its definition, leaving a
    /// formula over variables, constants and implication only (negation
    /// appears as `a -> c{0}`). Evaluation is preserved exactly.
    pub fn expand_derived(&self) -> Formula {
        fn neg(a: Formula) -> Formula {
            Formula::implies(a, Formula::falsum())
        }
        // a & b  =  ~(a -> ~b)
        fn conj(a: Formula, b: Formula) -> Formula {
            neg(Formula::implies(a, neg(b)))
        }
        fn iff(a: Formula, b: Formula) -> Formula {
            conj(
                Formula::implies(a.clone(), b.clone()),
                Formula::implies(b, a),
            )
        }
        match self {
            Formula::Var(_) | Formula::Const(_) => self.clone(),
            Formula::Not(a) => neg(a.expand_derived()),
            Formula::Implies(a, b) => Formula::implies(a.expand_derived(), b.expand_derived()),
            Formula::StrongConj(a, b) => conj(a.expand_derived(), b.expand_derived()),
            // a (+) b  =  ~(~a & ~b)
            Formula::StrongDisj(a, b) => {
                neg(conj(neg(a.expand_derived()), neg(b.expand_derived())))
            }
            // a /\ b  =  a & (a -> b)
            Formula::MinConj(a, b) => {
                let ea = a.expand_derived();
                let eb = b.expand_derived();
                conj(ea.clone(), Formula::implies(ea, eb))
            }
            // a \/ b  =  (a -> b) -> b
            Formula::MaxDisj(a, b) => {
                let ea = a.expand_derived();
                let eb = b.expand_derived();
                Formula::implies(Formula::implies(ea, eb.clone()), eb)
            }
            // a (-) b  =  a & ~b
            Formula::TruncSub(a, b) => conj(a.expand_derived(), neg(b.expand_derived())),
            Formula::Iff(a, b) => iff(a.expand_derived(), b.expand_derived()),
            // d(a, b)  =  ~(a <-> b)
            Formula::Distance(a, b) => neg(iff(a.expand_derived(), b.expand_derived())),
        }
    }

    /// True iff the formula uses only variables, constants and implication.
    pub fn is_primitive(&self) -> bool {
        match self {
            Formula::Var(_) | Formula::Const(_) => true,
            Formula::Implies(a, b) => a.is_primitive() && b.is_primitive(),
            _ => false,
        }
    }

    fn prec(&self) -> u8 {
        match self {
            Formula::Implies(..) => 1,
            Formula::Iff(..) => 3,
            Formula::MaxDisj(..) => 4,
            Formula::MinConj(..) => 5,
            Formula::StrongDisj(..) | Formula::TruncSub(..) => 6,
            Formula::StrongConj(..) => 7,
            Formula::Not(..) => 9,
            Formula::Var(_) | Formula::Const(_) | Formula::Distance(..) => 10,
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let prec = self.prec();
        if prec < min {
            write!(f, "(")?;
            self.fmt_prec(f, 0)?;
            return write!(f, ")");
        }
        match self {
            Formula::Var(name) => write!(f, "{name}"),
            Formula::Const(c) => write!(f, "c{{{c}}}"),
            Formula::Not(a) => {
                write!(f, "~ ")?;
                a.fmt_prec(f, prec)
            }
            Formula::Distance(a, b) => {
                write!(f, "d(")?;
                a.fmt_prec(f, 0)?;
                write!(f, ", ")?;
                b.fmt_prec(f, 0)?;
                write!(f, ")")
            }
            Formula::Implies(a, b) => infix(f, a, "->", b, prec),
            Formula::Iff(a, b) => infix(f, a, "<->", b, prec),
            Formula::MaxDisj(a, b) => infix(f, a, "\\/", b, prec),
            Formula::MinConj(a, b) => infix(f, a, "/\\", b, prec),
            Formula::StrongDisj(a, b) => infix(f, a, "(+)", b, prec),
            Formula::TruncSub(a, b) => infix(f, a, "(-)", b, prec),
            Formula::StrongConj(a, b) => infix(f, a, "&", b, prec),
        }
    }
}

// Binaries are right-associative: the left child needs parentheses at equal
// precedence, the right child does not.
fn infix(f: &mut fmt::Formatter<'_>, a: &Formula, op: &str, b: &Formula, prec: u8) -> fmt::Result {
    a.fmt_prec(f, prec + 1)?;
    write!(f, " {op} ")?;
    b.fmt_prec(f, prec)
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

/// A total assignment of truth values to variable names.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Valuation {
    values: BTreeMap<String, Rational>,
}

impl Valuation {
    pub fn new() -> Self {
        Valuation::default()
    }

    pub fn bind(mut self, name: impl Into<String>, v: Rational) -> Self {
        self.values.insert(name.into(), v);
        self
    }

    pub fn set(&mut self, name: impl Into<String>, v: Rational) {
        self.values.insert(name.into(), v);
    }

    pub fn get(&self, name: &str) -> Option<&Rational> {
        self.values.get(name)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Rational)> {
        self.values.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (name, v) in &self.values {
            if !first {
                write!(f, ",")?;
            }
            write!(f, "{name}={v}")?;
            first = false;
        }
        Ok(())
    }
}

impl FromIterator<(String, Rational)> for Valuation {
    fn from_iter<T: IntoIterator<Item = (String, Rational)>>(iter: T) -> Self {
        Valuation {
            values: iter.into_iter().collect(),
        }
    }
}

//! Symbolic real-arithmetic terms and constraints, rendered as SMT-LIB2
//! s-expressions.
//!
//! Terms carry exact rational constants and can be evaluated under a
//! variable environment, which is how tests tie the encoding back to the
//! engine's own arithmetic.

use std::collections::BTreeMap;

use num::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{one, zero, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RealTerm {
    Var(String),
    Const(Rational),
    Add(Vec<RealTerm>),
    Sub(Box<RealTerm>, Box<RealTerm>),
    Mul(Vec<RealTerm>),
    Ite(Box<BoolTerm>, Box<RealTerm>, Box<RealTerm>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CmpOp {
    Le,
    Lt,
    Ge,
    Gt,
    Eq,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BoolTerm {
    Cmp(CmpOp, RealTerm, RealTerm),
    And(Vec<BoolTerm>),
    Or(Vec<BoolTerm>),
    Not(Box<BoolTerm>),
    Implies(Box<BoolTerm>, Box<BoolTerm>),
    Forall(Vec<String>, Box<BoolTerm>),
    Exists(Vec<String>, Box<BoolTerm>),
}

impl RealTerm {
    pub fn var(name: impl Into<String>) -> RealTerm {
        RealTerm::Var(name.into())
    }

    pub fn constant(value: Rational) -> RealTerm {
        RealTerm::Const(value)
    }

    pub fn int(value: i64) -> RealTerm {
        RealTerm::Const(crate::rational::rat_int(value))
    }

    /// Sum with zero terms dropped; empty sums collapse to 0, singletons
    /// to themselves.
    pub fn add(terms: Vec<RealTerm>) -> RealTerm {
        let mut kept: Vec<RealTerm> = terms
            .into_iter()
            .filter(|t| !matches!(t, RealTerm::Const(c) if c.is_zero()))
            .collect();
        match kept.len() {
            0 => RealTerm::Const(zero()),
            1 => kept.pop().unwrap(),
            _ => RealTerm::Add(kept),
        }
    }

    /// Product with constant factors folded together: any zero collapses
    /// the whole product, unit factors disappear, and a residual constant
    /// leads the factor list.
    pub fn mul(terms: Vec<RealTerm>) -> RealTerm {
        let mut coefficient = one();
        let mut rest = Vec::new();
        for t in terms {
            match t {
                RealTerm::Const(c) => coefficient *= c,
                other => rest.push(other),
            }
        }
        if coefficient.is_zero() {
            return RealTerm::Const(zero());
        }
        if !coefficient.is_one() {
            rest.insert(0, RealTerm::Const(coefficient));
        }
        match rest.len() {
            0 => RealTerm::Const(one()),
            1 => rest.pop().unwrap(),
            _ => RealTerm::Mul(rest),
        }
    }

    /// Difference; `a - 0` stays `a` and constant operands fold.
    #[allow(clippy::should_implement_trait)]
    pub fn sub(a: RealTerm, b: RealTerm) -> RealTerm {
        match (a, b) {
            (a, RealTerm::Const(c)) if c.is_zero() => a,
            (RealTerm::Const(a), RealTerm::Const(b)) => RealTerm::Const(a - b),
            (a, b) => RealTerm::Sub(Box::new(a), Box::new(b)),
        }
    }

    pub fn ite(cond: BoolTerm, then: RealTerm, otherwise: RealTerm) -> RealTerm {
        RealTerm::Ite(Box::new(cond), Box::new(then), Box::new(otherwise))
    }

    /// True iff no ite node occurs anywhere in the term.
    pub fn is_polynomial(&self) -> bool {
        match self {
            RealTerm::Var(_) | RealTerm::Const(_) => true,
            RealTerm::Add(ts) | RealTerm::Mul(ts) => ts.iter().all(RealTerm::is_polynomial),
            RealTerm::Sub(a, b) => a.is_polynomial() && b.is_polynomial(),
            RealTerm::Ite(..) => false,
        }
    }

    pub fn eval(&self, env: &BTreeMap<String, Rational>) -> Result<Rational> {
        match self {
            RealTerm::Var(name) => env
                .get(name)
                .cloned()
                .ok_or_else(|| Error::UnboundTermVariable(name.clone())),
            RealTerm::Const(c) => Ok(c.clone()),
            RealTerm::Add(ts) => {
                let mut sum = zero();
                for t in ts {
                    sum += t.eval(env)?;
                }
                Ok(sum)
            }
            RealTerm::Sub(a, b) => Ok(a.eval(env)? - b.eval(env)?),
            RealTerm::Mul(ts) => {
                let mut product = one();
                for t in ts {
                    product *= t.eval(env)?;
                }
                Ok(product)
            }
            RealTerm::Ite(c, t, e) => {
                if c.eval(env)? {
                    t.eval(env)
                } else {
                    e.eval(env)
                }
            }
        }
    }

    pub fn render(&self) -> String {
        match self {
            RealTerm::Var(name) => name.clone(),
            RealTerm::Const(c) => render_rational(c),
            RealTerm::Add(ts) => render_app("+", ts.iter().map(RealTerm::render)),
            RealTerm::Sub(a, b) => format!("(- {} {})", a.render(), b.render()),
            RealTerm::Mul(ts) => render_app("*", ts.iter().map(RealTerm::render)),
            RealTerm::Ite(c, t, e) => {
                format!("(ite {} {} {})", c.render(), t.render(), e.render())
            }
        }
    }
}

impl CmpOp {
    fn symbol(self) -> &'static str {
        match self {
            CmpOp::Le => "<=",
            CmpOp::Lt => "<",
            CmpOp::Ge => ">=",
            CmpOp::Gt => ">",
            CmpOp::Eq => "=",
        }
    }

    fn holds(self, a: &Rational, b: &Rational) -> bool {
        match self {
            CmpOp::Le => a <= b,
            CmpOp::Lt => a < b,
            CmpOp::Ge => a >= b,
            CmpOp::Gt => a > b,
            CmpOp::Eq => a == b,
        }
    }
}

impl BoolTerm {
    pub fn cmp(op: CmpOp, a: RealTerm, b: RealTerm) -> BoolTerm {
        BoolTerm::Cmp(op, a, b)
    }

    pub fn and(mut terms: Vec<BoolTerm>) -> BoolTerm {
        match terms.len() {
            1 => terms.pop().unwrap(),
            _ => BoolTerm::And(terms),
        }
    }

    pub fn implies(a: BoolTerm, b: BoolTerm) -> BoolTerm {
        BoolTerm::Implies(Box::new(a), Box::new(b))
    }

    pub fn forall(vars: Vec<String>, body: BoolTerm) -> BoolTerm {
        BoolTerm::Forall(vars, Box::new(body))
    }

    pub fn exists(vars: Vec<String>, body: BoolTerm) -> BoolTerm {
        BoolTerm::Exists(vars, Box::new(body))
    }

    pub fn eval(&self, env: &BTreeMap<String, Rational>) -> Result<bool> {
        match self {
            BoolTerm::Cmp(op, a, b) => Ok(op.holds(&a.eval(env)?, &b.eval(env)?)),
            BoolTerm::And(ts) => {
                for t in ts {
                    if !t.eval(env)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            BoolTerm::Or(ts) => {
                for t in ts {
                    if t.eval(env)? {
                        return Ok(true);
                    }
                }
                Ok(false)
            }
            BoolTerm::Not(t) => Ok(!t.eval(env)?),
            BoolTerm::Implies(a, b) => Ok(!a.eval(env)? || b.eval(env)?),
            BoolTerm::Forall(..) | BoolTerm::Exists(..) => Err(Error::QuantifiedTerm),
        }
    }

    pub fn render(&self) -> String {
        match self {
            BoolTerm::Cmp(op, a, b) => {
                format!("({} {} {})", op.symbol(), a.render(), b.render())
            }
            BoolTerm::And(ts) if ts.is_empty() => "true".into(),
            BoolTerm::And(ts) => render_app("and", ts.iter().map(BoolTerm::render)),
            BoolTerm::Or(ts) if ts.is_empty() => "false".into(),
            BoolTerm::Or(ts) => render_app("or", ts.iter().map(BoolTerm::render)),
            BoolTerm::Not(t) => format!("(not {})", t.render()),
            BoolTerm::Implies(a, b) => format!("(=> {} {})", a.render(), b.render()),
            BoolTerm::Forall(vars, body) => {
                format!("(forall ({}) {})", render_binders(vars), body.render())
            }
            BoolTerm::Exists(vars, body) => {
                format!("(exists ({}) {})", render_binders(vars), body.render())
            }
        }
    }
}

fn render_app(op: &str, args: impl Iterator<Item = String>) -> String {
    let mut out = String::from("(");
    out.push_str(op);
    for a in args {
        out.push(' ');
        out.push_str(&a);
    }
    out.push(')');
    out
}

fn render_binders(vars: &[String]) -> String {
    let parts: Vec<String> = vars.iter().map(|v| format!("({v} Real)")).collect();
    parts.join(" ")
}

/// SMT-LIB rendering of an exact rational: integers in decimal, proper
/// fractions as `(/ a b)`, negatives wrapped in unary minus.
pub fn render_rational(value: &Rational) -> String {
    if value.is_negative() {
        return format!("(- {})", render_rational(&-value));
    }
    if value.is_integer() {
        value.numer().to_string()
    } else {
        format!("(/ {} {})", value.numer(), value.denom())
    }
}

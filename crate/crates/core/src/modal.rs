//! Goal formulas: expectation atoms `E[P_i]` combined with the connectives
//! of Lukasiewicz logic plus product, truncated division, delta and
//! arbitrary rational constants in `[0, 1]`. Atoms may not nest.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::rational::{in_unit_interval, rat, Rational};
use crate::truth;

/// AST of a goal formula. `Atom(i)` denotes the expected payoff of player
/// `i` (0-based index into the game's player list); nesting is impossible
/// by construction since atoms carry no subformula.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModalFormula {
    /// Expected payoff of a player, `E[P_i]`.
    Atom(usize),
    /// Rational constant in `[0, 1]`; the half constant is `Const(1/2)`.
    Const(Rational),
    Not(Box<ModalFormula>),
    Implies(Box<ModalFormula>, Box<ModalFormula>),
    StrongConj(Box<ModalFormula>, Box<ModalFormula>),
    StrongDisj(Box<ModalFormula>, Box<ModalFormula>),
    MinConj(Box<ModalFormula>, Box<ModalFormula>),
    MaxDisj(Box<ModalFormula>, Box<ModalFormula>),
    TruncSub(Box<ModalFormula>, Box<ModalFormula>),
    Iff(Box<ModalFormula>, Box<ModalFormula>),
    Distance(Box<ModalFormula>, Box<ModalFormula>),
    /// Product `*`: `a * b`.
    Product(Box<ModalFormula>, Box<ModalFormula>),
    /// Truncated division `->.`: `1` if `a <= b`, else `b / a`.
    TruncDiv(Box<ModalFormula>, Box<ModalFormula>),
    /// `D(a)`: `1` if `a = 1`, else `0`.
    Delta(Box<ModalFormula>),
}

impl ModalFormula {
    pub fn atom(player: usize) -> Self {
        ModalFormula::Atom(player)
    }

    pub fn constant(v: Rational) -> Self {
        ModalFormula::Const(v)
    }

    pub fn half() -> Self {
        ModalFormula::Const(rat(1, 2))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(a: ModalFormula) -> Self {
        ModalFormula::Not(Box::new(a))
    }

    pub fn implies(a: ModalFormula, b: ModalFormula) -> Self {
        ModalFormula::Implies(Box::new(a), Box::new(b))
    }

    pub fn strong_conj(a: ModalFormula, b: ModalFormula) -> Self {
        ModalFormula::StrongConj(Box::new(a), Box::new(b))
    }

    pub fn strong_disj(a: ModalFormula, b: ModalFormula) -> Self {
        ModalFormula::StrongDisj(Box::new(a), Box::new(b))
    }

    pub fn min_conj(a: ModalFormula, b: ModalFormula) -> Self {
        ModalFormula::MinConj(Box::new(a), Box::new(b))
    }

    pub fn max_disj(a: ModalFormula, b: ModalFormula) -> Self {
        ModalFormula::MaxDisj(Box::new(a), Box::new(b))
    }

    pub fn trunc_sub(a: ModalFormula, b: ModalFormula) -> Self {
        ModalFormula::TruncSub(Box::new(a), Box::new(b))
    }

    pub fn iff(a: ModalFormula, b: ModalFormula) -> Self {
        ModalFormula::Iff(Box::new(a), Box::new(b))
    }

    pub fn distance(a: ModalFormula, b: ModalFormula) -> Self {
        ModalFormula::Distance(Box::new(a), Box::new(b))
    }

    pub fn product(a: ModalFormula, b: ModalFormula) -> Self {
        ModalFormula::Product(Box::new(a), Box::new(b))
    }

    pub fn trunc_div(a: ModalFormula, b: ModalFormula) -> Self {
        ModalFormula::TruncDiv(Box::new(a), Box::new(b))
    }

    pub fn delta(a: ModalFormula) -> Self {
        ModalFormula::Delta(Box::new(a))
    }

    /// Player indices referenced by the formula's atoms, sorted.
    pub fn atoms(&self) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut BTreeSet<usize>) {
        match self {
            ModalFormula::Atom(i) => {
                out.insert(*i);
            }
            ModalFormula::Const(_) => {}
            ModalFormula::Not(a) | ModalFormula::Delta(a) => a.collect_atoms(out),
            ModalFormula::Implies(a, b)
            | ModalFormula::StrongConj(a, b)
            | ModalFormula::StrongDisj(a, b)
            | ModalFormula::MinConj(a, b)
            | ModalFormula::MaxDisj(a, b)
            | ModalFormula::TruncSub(a, b)
            | ModalFormula::Iff(a, b)
            | ModalFormula::Distance(a, b)
            | ModalFormula::Product(a, b)
            | ModalFormula::TruncDiv(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
        }
    }

    /// True iff the goal is a bare expectation atom. Only such goals admit
    /// exact best-response certification by vertex scan.
    pub fn as_single_atom(&self) -> Option<usize> {
        match self {
            ModalFormula::Atom(i) => Some(*i),
            _ => None,
        }
    }

    /// Exact truth value of a goal whose atoms have already been evaluated.
    ///
    /// `atom_values` must bind every atom occurring in the formula to a
    /// value in `[0, 1]`; constants must also lie in `[0, 1]`.
    pub fn eval_closed(&self, atom_values: &BTreeMap<usize, Rational>) -> Result<Rational> {
        match self {
            ModalFormula::Atom(i) => {
                let v = atom_values
                    .get(i)
                    .ok_or_else(|| Error::UnboundAtom(format!("{}", i + 1)))?;
                if !in_unit_interval(v) {
                    return Err(Error::OutsideUnitInterval(v.clone()));
                }
                Ok(v.clone())
            }
            ModalFormula::Const(c) => {
                if !in_unit_interval(c) {
                    return Err(Error::OutsideUnitInterval(c.clone()));
                }
                Ok(c.clone())
            }
            ModalFormula::Not(a) => Ok(truth::neg(&a.eval_closed(atom_values)?)),
            ModalFormula::Implies(a, b) => Ok(truth::implies(
                &a.eval_closed(atom_values)?,
                &b.eval_closed(atom_values)?,
            )),
            ModalFormula::StrongConj(a, b) => Ok(truth::strong_conj(
                &a.eval_closed(atom_values)?,
                &b.eval_closed(atom_values)?,
            )),
            ModalFormula::StrongDisj(a, b) => Ok(truth::strong_disj(
                &a.eval_closed(atom_values)?,
                &b.eval_closed(atom_values)?,
            )),
            ModalFormula::MinConj(a, b) => Ok(truth::min_conj(
                &a.eval_closed(atom_values)?,
                &b.eval_closed(atom_values)?,
            )),
            ModalFormula::MaxDisj(a, b) => Ok(truth::max_disj(
                &a.eval_closed(atom_values)?,
                &b.eval_closed(atom_values)?,
            )),
            ModalFormula::TruncSub(a, b) => Ok(truth::trunc_sub(
                &a.eval_closed(atom_values)?,
                &b.eval_closed(atom_values)?,
            )),
            ModalFormula::Iff(a, b) => Ok(truth::iff(
                &a.eval_closed(atom_values)?,
                &b.eval_closed(atom_values)?,
            )),
            ModalFormula::Distance(a, b) => Ok(truth::distance(
                &a.eval_closed(atom_values)?,
                &b.eval_closed(atom_values)?,
            )),
            ModalFormula::Product(a, b) => Ok(truth::product(
                &a.eval_closed(atom_values)?,
                &b.eval_closed(atom_values)?,
            )),
            ModalFormula::TruncDiv(a, b) => Ok(truth::trunc_div(
                &a.eval_closed(atom_values)?,
                &b.eval_closed(atom_values)?,
            )),
            ModalFormula::Delta(a) => Ok(truth::delta(&a.eval_closed(atom_values)?)),
        }
    }

    fn prec(&self) -> u8 {
        match self {
            ModalFormula::Implies(..) => 1,
            ModalFormula::TruncDiv(..) => 2,
            ModalFormula::Iff(..) => 3,
            ModalFormula::MaxDisj(..) => 4,
            ModalFormula::MinConj(..) => 5,
            ModalFormula::StrongDisj(..) | ModalFormula::TruncSub(..) => 6,
            ModalFormula::StrongConj(..) => 7,
            ModalFormula::Product(..) => 8,
            ModalFormula::Not(..) | ModalFormula::Delta(..) => 9,
            ModalFormula::Atom(_) | ModalFormula::Const(_) | ModalFormula::Distance(..) => 10,
        }
    }

    /// Renders the formula with atoms shown as `E[name]`, resolving player
    /// indices against `players`.
    pub fn display<'a>(&'a self, players: &'a [String]) -> ModalDisplay<'a> {
        ModalDisplay {
            formula: self,
            players,
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, players: &[String], min: u8) -> fmt::Result {
        let prec = self.prec();
        if prec < min {
            write!(f, "(")?;
            self.fmt_prec(f, players, 0)?;
            return write!(f, ")");
        }
        let infix = |f: &mut fmt::Formatter<'_>,
                     a: &ModalFormula,
                     op: &str,
                     b: &ModalFormula|
         -> fmt::Result {
            a.fmt_prec(f, players, prec + 1)?;
            write!(f, " {op} ")?;
            b.fmt_prec(f, players, prec)
        };
        match self {
            ModalFormula::Atom(i) => match players.get(*i) {
                Some(name) => write!(f, "E[{name}]"),
                None => write!(f, "E[#{}]", i + 1),
            },
            ModalFormula::Const(c) => write!(f, "c{{{c}}}"),
            ModalFormula::Not(a) => {
                write!(f, "~ ")?;
                a.fmt_prec(f, players, prec)
            }
            ModalFormula::Delta(a) => {
                write!(f, "D(")?;
                a.fmt_prec(f, players, 0)?;
                write!(f, ")")
            }
            ModalFormula::Distance(a, b) => {
                write!(f, "d(")?;
                a.fmt_prec(f, players, 0)?;
                write!(f, ", ")?;
                b.fmt_prec(f, players, 0)?;
                write!(f, ")")
            }
            ModalFormula::Implies(a, b) => infix(f, a, "->", b),
            ModalFormula::TruncDiv(a, b) => infix(f, a, "->.", b),
            ModalFormula::Iff(a, b) => infix(f, a, "<->", b),
            ModalFormula::MaxDisj(a, b) => infix(f, a, "\\/", b),
            ModalFormula::MinConj(a, b) => infix(f, a, "/\\", b),
            ModalFormula::StrongDisj(a, b) => infix(f, a, "(+)", b),
            ModalFormula::TruncSub(a, b) => infix(f, a, "(-)", b),
            ModalFormula::StrongConj(a, b) => infix(f, a, "&", b),
            ModalFormula::Product(a, b) => infix(f, a, "*", b),
        }
    }
}

/// Display adapter carrying the player names needed to render atoms.
pub struct ModalDisplay<'a> {
    formula: &'a ModalFormula,
    players: &'a [String],
}

impl fmt::Display for ModalDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.formula.fmt_prec(f, self.players, 0)
    }
}

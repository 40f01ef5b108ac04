//! Compilation of expectation-game queries into real arithmetic.
//!
//! Expected payoffs become multilinear polynomials over probability
//! variables, goals become ite-guarded piecewise terms, and truncated
//! division is eliminated with a fresh bounded quotient variable. Two
//! entry points produce complete scripts: a quantifier-free query asking
//! whether one player can improve on a concrete profile, and an ∃∀
//! sentence asserting that some profile makes every player best-respond.

use std::collections::BTreeMap;

use crate::error::Result;
use crate::expectation::{eval_goal, MixedStrategy, Profile};
use crate::formula::Valuation;
use crate::game::Game;
use crate::limits::Limits;
use crate::modal::ModalFormula;
use crate::rational::{one, Rational};
use crate::rcf::script::SmtScript;
use crate::rcf::term::{BoolTerm, CmpOp, RealTerm};

/// How one player's probabilities appear in an encoding: as solver
/// variables with the given prefix, or as the concrete rationals of a
/// fixed mixed strategy.
#[derive(Debug, Clone, Copy)]
pub enum PlayerVars<'a> {
    Symbolic(&'static str),
    Fixed(&'a MixedStrategy),
}

/// `<prefix>_<player>_<strategy>`, with the player rendered 1-based to
/// match player naming and the strategy index 0-based to match
/// enumeration order.
pub fn var_name(prefix: &str, player: usize, strategy: usize) -> String {
    format!("{prefix}_{}_{strategy}", player + 1)
}

/// Side condition introduced for one truncated division `a ->. b`: the
/// quotient variable equals `b / a` whenever the division is actually
/// taken (`a > b`), and is bounded to [0, 1] so models stay canonical.
/// The equation is guarded because asserting `q·a = b` outright would be
/// unsatisfiable at `a = 0 < b`, where the operation's value is 1 and no
/// division happens.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivisionConstraint {
    pub quotient: String,
    pub divisor: RealTerm,
    pub dividend: RealTerm,
}

impl DivisionConstraint {
    /// `(=> (> a b) (= (* q a) b))`
    pub fn guarded_equation(&self) -> BoolTerm {
        BoolTerm::implies(
            BoolTerm::cmp(CmpOp::Gt, self.divisor.clone(), self.dividend.clone()),
            BoolTerm::cmp(
                CmpOp::Eq,
                RealTerm::Mul(vec![RealTerm::var(&self.quotient), self.divisor.clone()]),
                self.dividend.clone(),
            ),
        )
    }

    /// `(and (<= 0 q) (<= q 1))`
    pub fn bounds(&self) -> BoolTerm {
        BoolTerm::and(vec![
            BoolTerm::cmp(CmpOp::Le, RealTerm::int(0), RealTerm::var(&self.quotient)),
            BoolTerm::cmp(CmpOp::Le, RealTerm::var(&self.quotient), RealTerm::int(1)),
        ])
    }
}

/// Extends `env` with the value each quotient variable is forced to take,
/// in introduction order (inner divisions precede the terms that use
/// them). Where no division happens the quotient is free; 1 is used.
pub fn solve_divisions(
    constraints: &[DivisionConstraint],
    env: &mut BTreeMap<String, Rational>,
) -> Result<()> {
    for c in constraints {
        let a = c.divisor.eval(env)?;
        let b = c.dividend.eval(env)?;
        let q = if a > b { b / a } else { one() };
        env.insert(c.quotient.clone(), q);
    }
    Ok(())
}

/// The expected payoff of `owner`'s payoff formula as a term over the
/// players' probability variables: `Σ_s (Π_j x_{j,s_j}) · f(s)` with
/// zero-payoff combinations dropped. When every combination pays the same
/// value the sum collapses to that constant (the weights add to 1 on the
/// simplex).
pub fn encode_expectation(game: &Game, owner: usize, limits: &Limits) -> Result<RealTerm> {
    let env = vec![PlayerVars::Symbolic("x"); game.num_players()];
    encode_expectation_env(game, owner, &env, limits)
}

fn encode_expectation_env(
    game: &Game,
    owner: usize,
    env: &[PlayerVars],
    limits: &Limits,
) -> Result<RealTerm> {
    limits.check(
        "expectation encoding",
        game.joint_space_size(),
        limits.strategy_combinations,
        "strategy combinations",
    )?;
    let spaces: Vec<_> = (0..game.num_players())
        .map(|i| game.enumerate_strategies(i, limits))
        .collect::<Result<_>>()?;
    let formula = game.payoff_formula(owner);
    let scale = game.scale();

    let mut indices = vec![0usize; game.num_players()];
    let mut terms = Vec::new();
    let mut first: Option<Rational> = None;
    let mut all_equal = true;
    'combinations: loop {
        let mut valuation = Valuation::new();
        for (player, &s) in indices.iter().enumerate() {
            let space: &Vec<_> = &spaces[player];
            for (var, v) in space[s].assignment() {
                valuation.set(var.clone(), v.clone());
            }
        }
        let value = formula.eval(&valuation, scale)?;
        match &first {
            None => first = Some(value.clone()),
            Some(f) if *f != value => all_equal = false,
            _ => {}
        }
        let mut factors = vec![RealTerm::constant(value)];
        for (player, &s) in indices.iter().enumerate() {
            factors.push(match env[player] {
                PlayerVars::Symbolic(prefix) => RealTerm::var(var_name(prefix, player, s)),
                PlayerVars::Fixed(ms) => RealTerm::constant(ms.prob(s)),
            });
        }
        terms.push(RealTerm::mul(factors));

        let mut pos = indices.len();
        loop {
            if pos == 0 {
                break 'combinations;
            }
            pos -= 1;
            indices[pos] += 1;
            if indices[pos] < spaces[pos].len() {
                break;
            }
            indices[pos] = 0;
        }
    }
    if all_equal {
        return Ok(RealTerm::constant(first.expect("at least one combination")));
    }
    Ok(RealTerm::add(terms))
}

/// `player`'s goal as a piecewise-rational term over probability
/// variables, plus the side constraints of any truncated divisions in it.
pub fn encode_goal(
    game: &Game,
    player: usize,
    limits: &Limits,
) -> Result<(RealTerm, Vec<DivisionConstraint>)> {
    let env = vec![PlayerVars::Symbolic("x"); game.num_players()];
    let mut quotients = 0;
    encode_goal_env(game, player, &env, &mut quotients, limits)
}

fn encode_goal_env(
    game: &Game,
    player: usize,
    env: &[PlayerVars],
    quotients: &mut usize,
    limits: &Limits,
) -> Result<(RealTerm, Vec<DivisionConstraint>)> {
    let goal = game.goal_formula(player);
    let mut atoms = BTreeMap::new();
    for j in goal.atoms() {
        atoms.insert(j, encode_expectation_env(game, j, env, limits)?);
    }
    let mut constraints = Vec::new();
    let term = translate(goal, &atoms, quotients, &mut constraints);
    Ok((term, constraints))
}

fn translate(
    f: &ModalFormula,
    atoms: &BTreeMap<usize, RealTerm>,
    quotients: &mut usize,
    constraints: &mut Vec<DivisionConstraint>,
) -> RealTerm {
    match f {
        ModalFormula::Atom(j) => atoms[j].clone(),
        ModalFormula::Const(c) => RealTerm::constant(c.clone()),
        ModalFormula::Not(a) => {
            let a = translate(a, atoms, quotients, constraints);
            RealTerm::sub(RealTerm::int(1), a)
        }
        ModalFormula::Implies(a, b) => {
            let a = translate(a, atoms, quotients, constraints);
            let b = translate(b, atoms, quotients, constraints);
            clamp_high(RealTerm::sub(RealTerm::add(vec![RealTerm::int(1), b]), a))
        }
        ModalFormula::StrongConj(a, b) => {
            let a = translate(a, atoms, quotients, constraints);
            let b = translate(b, atoms, quotients, constraints);
            clamp_low(RealTerm::sub(RealTerm::add(vec![a, b]), RealTerm::int(1)))
        }
        ModalFormula::StrongDisj(a, b) => {
            let a = translate(a, atoms, quotients, constraints);
            let b = translate(b, atoms, quotients, constraints);
            clamp_high(RealTerm::add(vec![a, b]))
        }
        ModalFormula::TruncSub(a, b) => {
            let a = translate(a, atoms, quotients, constraints);
            let b = translate(b, atoms, quotients, constraints);
            clamp_low(RealTerm::sub(a, b))
        }
        ModalFormula::MinConj(a, b) => {
            let a = translate(a, atoms, quotients, constraints);
            let b = translate(b, atoms, quotients, constraints);
            RealTerm::ite(BoolTerm::cmp(CmpOp::Le, a.clone(), b.clone()), a, b)
        }
        ModalFormula::MaxDisj(a, b) => {
            let a = translate(a, atoms, quotients, constraints);
            let b = translate(b, atoms, quotients, constraints);
            RealTerm::ite(BoolTerm::cmp(CmpOp::Ge, a.clone(), b.clone()), a, b)
        }
        ModalFormula::Iff(a, b) => {
            let a = translate(a, atoms, quotients, constraints);
            let b = translate(b, atoms, quotients, constraints);
            RealTerm::sub(RealTerm::int(1), absolute_difference(a, b))
        }
        ModalFormula::Distance(a, b) => {
            let a = translate(a, atoms, quotients, constraints);
            let b = translate(b, atoms, quotients, constraints);
            absolute_difference(a, b)
        }
        ModalFormula::Product(a, b) => {
            let a = translate(a, atoms, quotients, constraints);
            let b = translate(b, atoms, quotients, constraints);
            RealTerm::mul(vec![a, b])
        }
        ModalFormula::TruncDiv(a, b) => {
            let a = translate(a, atoms, quotients, constraints);
            let b = translate(b, atoms, quotients, constraints);
            let quotient = format!("q_{quotients}");
            *quotients += 1;
            constraints.push(DivisionConstraint {
                quotient: quotient.clone(),
                divisor: a.clone(),
                dividend: b.clone(),
            });
            RealTerm::ite(
                BoolTerm::cmp(CmpOp::Le, a, b),
                RealTerm::int(1),
                RealTerm::var(quotient),
            )
        }
        ModalFormula::Delta(a) => {
            let a = translate(a, atoms, quotients, constraints);
            RealTerm::ite(
                BoolTerm::cmp(CmpOp::Ge, a, RealTerm::int(1)),
                RealTerm::int(1),
                RealTerm::int(0),
            )
        }
    }
}

/// `min(t, 1)` as an ite.
fn clamp_high(t: RealTerm) -> RealTerm {
    RealTerm::ite(
        BoolTerm::cmp(CmpOp::Le, t.clone(), RealTerm::int(1)),
        t,
        RealTerm::int(1),
    )
}

/// `max(t, 0)` as an ite.
fn clamp_low(t: RealTerm) -> RealTerm {
    RealTerm::ite(
        BoolTerm::cmp(CmpOp::Ge, t.clone(), RealTerm::int(0)),
        t,
        RealTerm::int(0),
    )
}

/// `|a - b|` as an ite over the comparison.
fn absolute_difference(a: RealTerm, b: RealTerm) -> RealTerm {
    RealTerm::ite(
        BoolTerm::cmp(CmpOp::Ge, a.clone(), b.clone()),
        RealTerm::sub(a.clone(), b.clone()),
        RealTerm::sub(b, a),
    )
}

/// Simplex constraints for a block of probability variables: each
/// nonnegative, together summing to 1.
fn simplex(names: &[String]) -> Vec<BoolTerm> {
    let mut out: Vec<BoolTerm> = names
        .iter()
        .map(|n| BoolTerm::cmp(CmpOp::Ge, RealTerm::var(n), RealTerm::int(0)))
        .collect();
    out.push(BoolTerm::cmp(
        CmpOp::Eq,
        RealTerm::add(names.iter().map(RealTerm::var).collect()),
        RealTerm::int(1),
    ));
    out
}

fn block_names(prefix: &str, player: usize, size: usize) -> Vec<String> {
    (0..size).map(|s| var_name(prefix, player, s)).collect()
}

/// A quantifier-free query: can `player` improve on `profile`? Deviation
/// variables `y_<player>_<s>` range over the player's simplex, everyone
/// else is substituted as concrete rationals, and the goal (with the
/// deviation plugged in) is asserted to exceed the profile's exact goal
/// value. SAT means `profile` is not a best response for `player`.
/// The deviating player's goal as a term over their `y` variables, with
/// every other player fixed to `profile`, plus the division constraints
/// the encoding introduced. This is the left side of the verification
/// query's improvement assertion; quotient numbering starts at `q_0` and
/// matches [`compile_verification_query`].
pub fn encode_deviation_goal(
    game: &Game,
    profile: &Profile,
    player: usize,
    limits: &Limits,
) -> Result<(RealTerm, Vec<DivisionConstraint>)> {
    let env: Vec<PlayerVars> = (0..game.num_players())
        .map(|j| {
            if j == player {
                PlayerVars::Symbolic("y")
            } else {
                PlayerVars::Fixed(profile.strategy(j))
            }
        })
        .collect();
    let mut quotients = 0;
    encode_goal_env(game, player, &env, &mut quotients, limits)
}

pub fn compile_verification_query(
    game: &Game,
    profile: &Profile,
    player: usize,
    limits: &Limits,
) -> Result<SmtScript> {
    let (goal, constraints) = encode_deviation_goal(game, profile, player, limits)?;
    let baseline = eval_goal(game, player, profile, limits)?;

    let size = game.enumerate_strategies(player, limits)?.len();
    let names = block_names("y", player, size);
    let mut script = SmtScript::new("QF_NRA");
    for name in &names {
        script.declare(name.clone());
    }
    for c in &constraints {
        script.declare(c.quotient.clone());
    }
    for constraint in simplex(&names) {
        script.assert(constraint);
    }
    for c in &constraints {
        script.assert(c.guarded_equation());
        script.assert(c.bounds());
    }
    script.assert(BoolTerm::cmp(CmpOp::Gt, goal, RealTerm::constant(baseline)));
    Ok(script)
}

/// The equilibrium-existence sentence: ∃ a profile x (on the simplices,
/// with its division side constraints) such that for every player i and
/// every deviation block y_i on i's simplex, i's goal at (y_i, x_{-i})
/// stays at or below their goal at x. Exactly one quantifier alternation.
pub fn compile_existence_sentence(game: &Game, limits: &Limits) -> Result<SmtScript> {
    let n = game.num_players();
    let sizes: Vec<usize> = (0..n)
        .map(|i| game.enumerate_strategies(i, limits).map(|s| s.len()))
        .collect::<Result<_>>()?;
    let xenv: Vec<PlayerVars> = vec![PlayerVars::Symbolic("x"); n];

    let mut quotients = 0;
    let mut exists_vars = Vec::new();
    let mut body = Vec::new();
    for (i, &size) in sizes.iter().enumerate() {
        let names = block_names("x", i, size);
        body.extend(simplex(&names));
        exists_vars.extend(names);
    }

    let mut baseline_goals = Vec::with_capacity(n);
    for i in 0..n {
        let (goal, constraints) = encode_goal_env(game, i, &xenv, &mut quotients, limits)?;
        for c in &constraints {
            exists_vars.push(c.quotient.clone());
            body.push(c.guarded_equation());
            body.push(c.bounds());
        }
        baseline_goals.push(goal);
    }

    for (i, baseline) in baseline_goals.into_iter().enumerate() {
        let yenv: Vec<PlayerVars> = (0..n)
            .map(|j| {
                if j == i {
                    PlayerVars::Symbolic("y")
                } else {
                    PlayerVars::Symbolic("x")
                }
            })
            .collect();
        let (deviation_goal, constraints) =
            encode_goal_env(game, i, &yenv, &mut quotients, limits)?;
        let names = block_names("y", i, sizes[i]);
        let mut hypothesis = simplex(&names);
        let mut forall_vars = names;
        for c in &constraints {
            forall_vars.push(c.quotient.clone());
            hypothesis.push(c.guarded_equation());
            hypothesis.push(c.bounds());
        }
        body.push(BoolTerm::forall(
            forall_vars,
            BoolTerm::implies(
                BoolTerm::and(hypothesis),
                BoolTerm::cmp(CmpOp::Le, deviation_goal, baseline),
            ),
        ));
    }

    let mut script = SmtScript::new("NRA");
    script.assert(BoolTerm::exists(exists_vars, BoolTerm::and(body)));
    Ok(script)
}

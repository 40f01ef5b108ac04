//! Mixed strategies, profiles, and exact expected-payoff evaluation.
//!
//! A player's mixed strategy is a distribution over their pure strategy
//! indices. Expected payoffs are computed exactly by summing the payoff
//! formula over the product of the supports, so zero-probability
//! strategies cost nothing.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num::{One, Zero};

use crate::error::Result;
use crate::formula::Valuation;
use crate::game::{Game, Strategy, Subject, Violation};
use crate::limits::Limits;
use crate::rational::{one, zero, Rational};

/// A distribution over one player's pure strategies, stored sparsely by
/// strategy index. Zero entries are dropped on construction so equal
/// distributions compare equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MixedStrategy {
    owner: usize,
    probs: BTreeMap<usize, Rational>,
}

impl MixedStrategy {
    pub fn new(owner: usize, entries: impl IntoIterator<Item = (usize, Rational)>) -> Self {
        let probs = entries.into_iter().filter(|(_, p)| !p.is_zero()).collect();
        MixedStrategy { owner, probs }
    }

    /// The pure strategy with index `strategy`, as a degenerate mix.
    pub fn point_mass(owner: usize, strategy: usize) -> Self {
        MixedStrategy {
            owner,
            probs: BTreeMap::from([(strategy, one())]),
        }
    }

    pub fn owner(&self) -> usize {
        self.owner
    }

    pub fn prob(&self, strategy: usize) -> Rational {
        self.probs.get(&strategy).cloned().unwrap_or_else(zero)
    }

    /// Support entries in strategy-index order.
    pub fn support(&self) -> impl Iterator<Item = (usize, &Rational)> {
        self.probs.iter().map(|(&s, p)| (s, p))
    }

    pub fn support_size(&self) -> usize {
        self.probs.len()
    }

    /// `Some(index)` iff the whole mass sits on one pure strategy.
    pub fn as_point_mass(&self) -> Option<usize> {
        match self.probs.iter().next() {
            Some((&s, p)) if self.probs.len() == 1 && p.is_one() => Some(s),
            _ => None,
        }
    }

    /// Renders the distribution against a game, e.g. `p1=0:1/2; p1=1:1/2`.
    pub fn render(&self, game: &Game, limits: &Limits) -> Result<String> {
        let space = game.enumerate_strategies(self.owner, limits)?;
        let parts: Vec<String> = self
            .probs
            .iter()
            .map(|(&s, p)| match space.get(s) {
                Some(strategy) => format!("{strategy}:{p}"),
                None => format!("#{s}:{p}"),
            })
            .collect();
        Ok(parts.join("; "))
    }
}

/// One mixed strategy per player, in player order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Profile(Vec<MixedStrategy>);

impl Profile {
    pub fn new(strategies: Vec<MixedStrategy>) -> Self {
        Profile(strategies)
    }

    /// The pure profile with the given strategy index per player.
    pub fn pure(indices: &[usize]) -> Self {
        Profile(
            indices
                .iter()
                .enumerate()
                .map(|(i, &s)| MixedStrategy::point_mass(i, s))
                .collect(),
        )
    }

    pub fn strategies(&self) -> &[MixedStrategy] {
        &self.0
    }

    pub fn strategy(&self, player: usize) -> &MixedStrategy {
        &self.0[player]
    }

    /// A copy with one player's strategy replaced.
    pub fn with_strategy(&self, strategy: MixedStrategy) -> Self {
        let mut out = self.clone();
        let owner = strategy.owner();
        out.0[owner] = strategy;
        out
    }

    pub fn render(&self, game: &Game, limits: &Limits) -> Result<String> {
        let parts: Result<Vec<String>> = self
            .0
            .iter()
            .enumerate()
            .map(|(i, ms)| {
                let name = game.players().get(i).map(String::as_str).unwrap_or("?");
                Ok(format!("{name} {}", ms.render(game, limits)?))
            })
            .collect();
        Ok(parts?.join(" | "))
    }
}

impl fmt::Display for MixedStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .probs
            .iter()
            .map(|(s, p)| format!("#{s}:{p}"))
            .collect();
        write!(f, "{}", parts.join("; "))
    }
}

/// Structural checks for a profile against a game: one strategy per player
/// in owner order, indices inside the strategy space, probabilities
/// nonnegative and summing to one.
pub fn validate_profile(game: &Game, profile: &Profile) -> Vec<Violation> {
    let mut out = Vec::new();
    if profile.0.len() != game.num_players() {
        out.push(Violation {
            subject: Subject::Game,
            message: format!(
                "profile has {} strategies for {} players",
                profile.0.len(),
                game.num_players()
            ),
        });
        return out;
    }
    for (i, ms) in profile.0.iter().enumerate() {
        let name = &game.players()[i];
        if ms.owner != i {
            out.push(Violation {
                subject: Subject::Player(i),
                message: format!(
                    "strategy in position {name} is owned by player {}",
                    ms.owner + 1
                ),
            });
            continue;
        }
        let size = game.strategy_space_size(i);
        let mut sum = zero();
        for (s, p) in ms.support() {
            if (s as u128) >= size {
                out.push(Violation {
                    subject: Subject::Player(i),
                    message: format!("{name}: strategy index {s} is outside a space of {size}"),
                });
            }
            if p < &zero() {
                out.push(Violation {
                    subject: Subject::Player(i),
                    message: format!("{name}: negative probability {p}"),
                });
            }
            sum += p;
        }
        if !sum.is_one() {
            out.push(Violation {
                subject: Subject::Player(i),
                message: format!("{name}: probabilities sum to {sum}, not 1"),
            });
        }
    }
    out
}

/// The support of each player's strategy, resolved to concrete pure
/// strategies. Built once, then shared by every expectation that follows.
struct SupportTable {
    per_player: Vec<Vec<(Strategy, Rational)>>,
}

impl SupportTable {
    fn build(game: &Game, profile: &Profile, limits: &Limits) -> Result<SupportTable> {
        let mut per_player = Vec::with_capacity(game.num_players());
        let mut combinations: u128 = 1;
        for (i, ms) in profile.0.iter().enumerate() {
            let space = game.enumerate_strategies(i, limits)?;
            let entries: Vec<(Strategy, Rational)> = ms
                .support()
                .map(|(s, p)| match space.get(s) {
                    Some(strategy) => Ok((strategy.clone(), p.clone())),
                    None => Err(crate::error::Error::NoSuchStrategy {
                        player: i,
                        index: s,
                    }),
                })
                .collect::<Result<_>>()?;
            combinations = combinations.saturating_mul(entries.len().max(1) as u128);
            per_player.push(entries);
        }
        limits.check(
            "expectation",
            combinations,
            limits.strategy_combinations,
            "support combinations",
        )?;
        Ok(SupportTable { per_player })
    }

    /// Walks the product of the supports for players in `order`, calling
    /// `leaf` with the joint valuation and probability of each node.
    fn for_each(
        &self,
        order: &[usize],
        leaf: &mut dyn FnMut(&Valuation, &Rational) -> Result<()>,
    ) -> Result<()> {
        fn rec(
            table: &SupportTable,
            order: &[usize],
            depth: usize,
            valuation: &mut Valuation,
            prob: &Rational,
            leaf: &mut dyn FnMut(&Valuation, &Rational) -> Result<()>,
        ) -> Result<()> {
            match order.get(depth) {
                None => leaf(valuation, prob),
                Some(&player) => {
                    for (strategy, p) in &table.per_player[player] {
                        for (var, v) in strategy.assignment() {
                            valuation.set(var.clone(), v.clone());
                        }
                        rec(table, order, depth + 1, valuation, &(prob * p), leaf)?;
                    }
                    Ok(())
                }
            }
        }
        rec(self, order, 0, &mut Valuation::new(), &one(), leaf)
    }
}

/// Exact expected payoff of `player`'s payoff formula under `profile`:
/// the payoff of each pure combination weighted by its product
/// probability.
pub fn expected_payoff(
    game: &Game,
    player: usize,
    profile: &Profile,
    limits: &Limits,
) -> Result<Rational> {
    let table = SupportTable::build(game, profile, limits)?;
    let order: Vec<usize> = (0..game.num_players()).collect();
    let formula = game.payoff_formula(player);
    let scale = game.scale();
    let mut sum = zero();
    table.for_each(&order, &mut |valuation, prob| {
        sum += prob * formula.eval(valuation, scale)?;
        Ok(())
    })?;
    Ok(sum)
}

/// Evaluates `player`'s goal under `profile`: each expectation atom is
/// computed exactly, then the goal is folded over those values.
pub fn eval_goal(
    game: &Game,
    player: usize,
    profile: &Profile,
    limits: &Limits,
) -> Result<Rational> {
    let goal = game.goal_formula(player);
    let mut atom_values = BTreeMap::new();
    for atom in goal.atoms() {
        atom_values.insert(atom, expected_payoff(game, atom, profile, limits)?);
    }
    goal.eval_closed(&atom_values)
}

/// For each formula owner in `targets`, the expected payoff when `player`
/// plays each of their pure strategies and everyone else keeps `profile`.
///
/// Returned vectors are indexed by `player`'s strategy index. By
/// multilinearity, the expectation under any mixed deviation `q` of
/// `player` is the `q`-weighted average of these entries, so one pass over
/// the opponents' support prices every deviation.
pub fn vertex_expectations(
    game: &Game,
    player: usize,
    profile: &Profile,
    targets: &BTreeSet<usize>,
    limits: &Limits,
) -> Result<BTreeMap<usize, Vec<Rational>>> {
    let table = SupportTable::build(game, profile, limits)?;
    let own_space = game.enumerate_strategies(player, limits)?;
    limits.check(
        "deviation table",
        table
            .per_player
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != player)
            .map(|(_, e)| e.len().max(1) as u128)
            .product::<u128>()
            .saturating_mul(own_space.len() as u128),
        limits.strategy_combinations,
        "support combinations",
    )?;
    let others: Vec<usize> = (0..game.num_players()).filter(|&i| i != player).collect();
    let scale = game.scale();
    let mut tables: BTreeMap<usize, Vec<Rational>> = targets
        .iter()
        .map(|&j| (j, vec![zero(); own_space.len()]))
        .collect();
    table.for_each(&others, &mut |valuation, prob| {
        let mut valuation = valuation.clone();
        for (s, strategy) in own_space.iter().enumerate() {
            for (var, v) in strategy.assignment() {
                valuation.set(var.clone(), v.clone());
            }
            for (&j, column) in tables.iter_mut() {
                column[s] += prob * game.payoff_formula(j).eval(&valuation, scale)?;
            }
        }
        Ok(())
    })?;
    Ok(tables)
}

//! Game structure: players, the variable partition, strategy spaces,
//! payoff formulas and goal formulas, plus game types and classes.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::Result;
use crate::formula::{Formula, Valuation};
use crate::limits::Limits;
use crate::modal::ModalFormula;
use crate::rational::{in_unit_interval, Rational};
use crate::scale::LkScale;

/// A game: each player controls a block of the variable partition, earns
/// the value of a payoff formula on the joint assignment, and pursues a
/// goal formula over expected payoffs.
///
/// Structure is not checked on construction; [`Game::validate`] returns
/// every violation as data.
#[derive(Debug, Clone, PartialEq)]
pub struct Game {
    scale: LkScale,
    players: Vec<String>,
    variables: Vec<String>,
    controls: Vec<Vec<String>>,
    payoffs: Vec<Formula>,
    goals: Vec<ModalFormula>,
}

/// What a validation violation is about, for mapping back to source spans.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subject {
    Game,
    Player(usize),
    Payoff(usize),
    Goal(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub subject: Subject,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.message)
    }
}

/// The type of a game: player count, variable count, and the sizes of the
/// control blocks in player order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameType {
    pub players: usize,
    pub variables: usize,
    pub distribution: Vec<usize>,
}

impl GameType {
    /// Two types are in the same class iff they agree on player and
    /// variable counts and their distributions are permutations of each
    /// other.
    pub fn same_class(&self, other: &GameType) -> bool {
        if self.players != other.players || self.variables != other.variables {
            return false;
        }
        let mut a = self.distribution.clone();
        let mut b = other.distribution.clone();
        a.sort_unstable();
        b.sort_unstable();
        a == b
    }
}

impl fmt::Display for GameType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let delta: Vec<String> = self.distribution.iter().map(|m| m.to_string()).collect();
        write!(
            f,
            "<{}, {}, ({})>",
            self.players,
            self.variables,
            delta.join(",")
        )
    }
}

/// One player's pure strategy: a total assignment of their control block.
/// The assignment is kept in the block's declaration order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Strategy {
    owner: usize,
    assignment: Vec<(String, Rational)>,
}

impl Strategy {
    pub fn owner(&self) -> usize {
        self.owner
    }

    pub fn assignment(&self) -> &[(String, Rational)] {
        &self.assignment
    }

    pub fn get(&self, var: &str) -> Option<&Rational> {
        self.assignment
            .iter()
            .find(|(name, _)| name == var)
            .map(|(_, v)| v)
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .assignment
            .iter()
            .map(|(name, v)| format!("{name}={v}"))
            .collect();
        write!(f, "{}", parts.join(","))
    }
}

/// One pure strategy per player, in player order; induces a total
/// valuation of the game's variables.
#[derive(Debug, Clone, PartialEq)]
pub struct StrategyCombination(Vec<Strategy>);

impl StrategyCombination {
    pub fn new(strategies: Vec<Strategy>) -> Self {
        StrategyCombination(strategies)
    }

    pub fn strategies(&self) -> &[Strategy] {
        &self.0
    }

    pub fn valuation(&self) -> Valuation {
        self.0
            .iter()
            .flat_map(|s| s.assignment.iter().cloned())
            .collect()
    }
}

impl Game {
    /// Assembles a game. `controls` are normalized to variable declaration
    /// order; everything else is stored as given and checked by
    /// [`Game::validate`].
    pub fn new(
        scale: LkScale,
        players: Vec<String>,
        variables: Vec<String>,
        controls: Vec<Vec<String>>,
        payoffs: Vec<Formula>,
        goals: Vec<ModalFormula>,
    ) -> Self {
        let position = |name: &str| variables.iter().position(|v| v == name);
        let controls = controls
            .into_iter()
            .map(|mut block| {
                block.sort_by_key(|name| position(name).unwrap_or(usize::MAX));
                block
            })
            .collect();
        Game {
            scale,
            players,
            variables,
            controls,
            payoffs,
            goals,
        }
    }

    pub fn scale(&self) -> LkScale {
        self.scale
    }

    pub fn players(&self) -> &[String] {
        &self.players
    }

    pub fn num_players(&self) -> usize {
        self.players.len()
    }

    pub fn player_index(&self, name: &str) -> Option<usize> {
        self.players.iter().position(|p| p == name)
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn controls(&self, player: usize) -> &[String] {
        &self.controls[player]
    }

    pub fn payoff_formula(&self, player: usize) -> &Formula {
        &self.payoffs[player]
    }

    pub fn goal_formula(&self, player: usize) -> &ModalFormula {
        &self.goals[player]
    }

    /// Every violated structural invariant, with a human-readable message.
    /// An empty list means the game is well formed.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let mut push = |subject: Subject, message: String| out.push(Violation { subject, message });

        if self.players.is_empty() {
            push(Subject::Game, "no players declared".into());
        }
        for (i, name) in self.players.iter().enumerate() {
            if self.players[..i].contains(name) {
                push(Subject::Player(i), format!("duplicate player {name}"));
            }
        }
        for (i, name) in self.variables.iter().enumerate() {
            if self.variables[..i].contains(name) {
                push(Subject::Game, format!("duplicate variable {name}"));
            }
        }
        if self.controls.len() != self.players.len()
            || self.payoffs.len() != self.players.len()
            || self.goals.len() != self.players.len()
        {
            push(
                Subject::Game,
                "players, controls, payoffs and goals must align".into(),
            );
            return out;
        }

        let declared: BTreeSet<&str> = self.variables.iter().map(String::as_str).collect();
        let mut owner_of: Vec<(&str, usize)> = Vec::new();
        for (i, block) in self.controls.iter().enumerate() {
            let name = &self.players[i];
            if block.is_empty() {
                push(Subject::Player(i), format!("empty control set {name}"));
            }
            for var in block {
                if !declared.contains(var.as_str()) {
                    push(
                        Subject::Player(i),
                        format!("{name} controls unknown variable {var}"),
                    );
                }
                if let Some((_, first)) = owner_of.iter().find(|(v, _)| v == var) {
                    push(
                        Subject::Player(i),
                        format!(
                            "variable {var} controlled by both {} and {name}",
                            self.players[*first]
                        ),
                    );
                } else {
                    owner_of.push((var, i));
                }
            }
        }
        for var in &self.variables {
            if !owner_of.iter().any(|(v, _)| v == var) {
                push(Subject::Game, format!("variable {var} is uncontrolled"));
            }
        }

        for (i, payoff) in self.payoffs.iter().enumerate() {
            let name = &self.players[i];
            for var in payoff.variables() {
                if !declared.contains(var) {
                    push(
                        Subject::Payoff(i),
                        format!("payoff {name}: unknown variable {var}"),
                    );
                }
            }
            for c in payoff.constants() {
                if !self.scale.contains(c) {
                    push(
                        Subject::Payoff(i),
                        format!("payoff {name}: constant {c} is not in {}", self.scale),
                    );
                }
            }
        }

        for (i, goal) in self.goals.iter().enumerate() {
            let name = &self.players[i];
            for atom in goal.atoms() {
                if atom >= self.players.len() {
                    push(
                        Subject::Goal(i),
                        format!("goal {name}: atom E[#{}] references no player", atom + 1),
                    );
                }
            }
            for c in goal_constants(goal) {
                if !in_unit_interval(c) {
                    push(
                        Subject::Goal(i),
                        format!("goal {name}: constant {c} is outside [0, 1]"),
                    );
                }
            }
        }

        out
    }

    pub fn game_type(&self) -> GameType {
        GameType {
            players: self.players.len(),
            variables: self.variables.len(),
            distribution: self.controls.iter().map(Vec::len).collect(),
        }
    }

    /// `(k+1)^{m_i}`, saturating.
    pub fn strategy_space_size(&self, player: usize) -> u128 {
        let base = u128::from(self.scale.len());
        let mut total: u128 = 1;
        for _ in 0..self.controls[player].len() {
            total = match total.checked_mul(base) {
                Some(t) => t,
                None => return u128::MAX,
            };
        }
        total
    }

    /// `|S| = (k+1)^m`, saturating.
    pub fn joint_space_size(&self) -> u128 {
        let mut total: u128 = 1;
        for i in 0..self.players.len() {
            total = match total.checked_mul(self.strategy_space_size(i)) {
                Some(t) => t,
                None => return u128::MAX,
            };
        }
        total
    }

    /// All pure strategies of one player, in lexicographic order: the
    /// block's variables in declaration order, values ascending. The
    /// position in this list is the strategy's index everywhere else.
    pub fn enumerate_strategies(&self, player: usize, limits: &Limits) -> Result<Vec<Strategy>> {
        let size = self.strategy_space_size(player);
        limits.check(
            "strategy enumeration",
            size,
            limits.strategies_per_player,
            "strategies",
        )?;
        let block = &self.controls[player];
        let mut out = Vec::with_capacity(size as usize);
        let mut digits = vec![0u64; block.len()];
        loop {
            let assignment = block
                .iter()
                .zip(&digits)
                .map(|(name, &d)| (name.clone(), self.scale.value(d)))
                .collect();
            out.push(Strategy {
                owner: player,
                assignment,
            });
            let mut i = digits.len();
            loop {
                if i == 0 {
                    return Ok(out);
                }
                i -= 1;
                if digits[i] + 1 < self.scale.len() {
                    digits[i] += 1;
                    break;
                }
                digits[i] = 0;
            }
        }
    }

    /// Index of an assignment in [`Game::enumerate_strategies`] order, or
    /// `None` if a variable is missing, extraneous, or off-scale.
    pub fn strategy_index(&self, player: usize, assignment: &Valuation) -> Option<usize> {
        let block = &self.controls[player];
        if assignment.len() != block.len() {
            return None;
        }
        let k = u64::from(self.scale.k());
        let mut index: usize = 0;
        for var in block {
            let v = assignment.get(var)?;
            if !self.scale.contains(v) {
                return None;
            }
            let digit = (v * crate::rational::rat_int(k as i64)).to_integer();
            let digit: u64 = u64::try_from(&digit).ok()?;
            index = index * (k as usize + 1) + digit as usize;
        }
        Some(index)
    }

    /// Exact payoff of `player` under a pure strategy combination.
    pub fn payoff(&self, player: usize, combination: &StrategyCombination) -> Result<Rational> {
        self.payoffs[player].eval(&combination.valuation(), self.scale)
    }
}

fn goal_constants(goal: &ModalFormula) -> Vec<&Rational> {
    use ModalFormula::*;
    let mut out = Vec::new();
    let mut stack = vec![goal];
    while let Some(f) = stack.pop() {
        match f {
            Atom(_) => {}
            Const(c) => out.push(c),
            Not(a) | Delta(a) => stack.push(a),
            Implies(a, b)
            | StrongConj(a, b)
            | StrongDisj(a, b)
            | MinConj(a, b)
            | MaxDisj(a, b)
            | TruncSub(a, b)
            | Iff(a, b)
            | Distance(a, b)
            | Product(a, b)
            | TruncDiv(a, b) => {
                stack.push(a);
                stack.push(b);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{one, rat, zero};

    /// The two-player matching game: each player owns one variable and is
    /// paid its value; one wants the expectations to match, the other
    /// wants them apart.
    pub fn matching_game() -> Game {
        Game::new(
            LkScale::new(1),
            vec!["P1".into(), "P2".into()],
            vec!["p1".into(), "p2".into()],
            vec![vec!["p1".into()], vec!["p2".into()]],
            vec![Formula::var("p1"), Formula::var("p2")],
            vec![
                ModalFormula::not(ModalFormula::distance(
                    ModalFormula::atom(0),
                    ModalFormula::atom(1),
                )),
                ModalFormula::distance(ModalFormula::atom(0), ModalFormula::atom(1)),
            ],
        )
    }

    #[test]
    fn matching_game_is_valid() {
        assert!(matching_game().validate().is_empty());
    }

    #[test]
    fn empty_control_set_is_reported() {
        let mut g = matching_game();
        g.controls[1].clear();
        let violations = g.validate();
        assert!(violations
            .iter()
            .any(|v| v.message == "empty control set P2"));
        assert!(violations
            .iter()
            .any(|v| v.message == "variable p2 is uncontrolled"));
    }

    #[test]
    fn unknown_payoff_variable_is_reported() {
        let mut g = matching_game();
        g.payoffs[0] = Formula::var("p3");
        let violations = g.validate();
        assert!(violations
            .iter()
            .any(|v| v.message.contains("unknown variable p3")));
    }

    #[test]
    fn off_scale_constant_is_reported() {
        let mut g = matching_game();
        g.payoffs[0] = Formula::constant(rat(1, 3));
        let violations = g.validate();
        assert_eq!(violations.len(), 1);
        assert!(violations[0].message.contains("not in L_1"));
    }

    #[test]
    fn goal_atom_out_of_range_is_reported() {
        let mut g = matching_game();
        g.goals[0] = ModalFormula::atom(5);
        let violations = g.validate();
        assert!(violations
            .iter()
            .any(|v| v.message.contains("E[#6] references no player")));
    }

    #[test]
    fn game_type_and_class() {
        assert_eq!(
            matching_game().game_type(),
            GameType {
                players: 2,
                variables: 2,
                distribution: vec![1, 1],
            }
        );

        let t1 = GameType {
            players: 2,
            variables: 3,
            distribution: vec![1, 2],
        };
        let t2 = GameType {
            players: 2,
            variables: 3,
            distribution: vec![2, 1],
        };
        let t3 = GameType {
            players: 2,
            variables: 4,
            distribution: vec![2, 2],
        };
        let t4 = GameType {
            players: 2,
            variables: 4,
            distribution: vec![1, 3],
        };
        assert!(t1.same_class(&t2));
        assert!(t1.same_class(&t1));
        assert!(!t3.same_class(&t4));
    }

    #[test]
    fn strategy_enumeration_order_and_size() {
        let g = matching_game();
        let s = g.enumerate_strategies(0, &Limits::default()).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s[0].to_string(), "p1=0");
        assert_eq!(s[1].to_string(), "p1=1");

        let g3 = Game::new(
            LkScale::new(2),
            vec!["P1".into()],
            vec!["a".into(), "b".into()],
            vec![vec!["a".into(), "b".into()]],
            vec![Formula::var("a")],
            vec![ModalFormula::atom(0)],
        );
        let s = g3.enumerate_strategies(0, &Limits::default()).unwrap();
        assert_eq!(s.len(), 9);
        assert_eq!(s[0].to_string(), "a=0,b=0");
        assert_eq!(s[1].to_string(), "a=0,b=1/2");
        assert_eq!(s[8].to_string(), "a=1,b=1");
        // round-trip through strategy_index
        for (i, strat) in s.iter().enumerate() {
            let val: Valuation = strat.assignment().iter().cloned().collect();
            assert_eq!(g3.strategy_index(0, &val), Some(i));
        }
    }

    #[test]
    fn enumeration_cap() {
        let g = Game::new(
            LkScale::new(9),
            vec!["P1".into()],
            (0..8).map(|i| format!("v{i}")).collect(),
            vec![(0..8).map(|i| format!("v{i}")).collect()],
            vec![Formula::var("v0")],
            vec![ModalFormula::atom(0)],
        );
        // 10^8 strategies exceeds the default per-player cap
        assert!(g.enumerate_strategies(0, &Limits::default()).is_err());
    }

    #[test]
    fn payoff_on_combinations() {
        let g = Game::new(
            LkScale::new(2),
            vec!["P1".into(), "P2".into()],
            vec!["p1".into(), "p2".into()],
            vec![vec!["p1".into()], vec!["p2".into()]],
            vec![
                Formula::strong_conj(Formula::var("p1"), Formula::var("p2")),
                Formula::var("p2"),
            ],
            vec![ModalFormula::atom(0), ModalFormula::atom(1)],
        );
        let s1 = g.enumerate_strategies(0, &Limits::default()).unwrap();
        let s2 = g.enumerate_strategies(1, &Limits::default()).unwrap();
        let both_one = StrategyCombination::new(vec![s1[2].clone(), s2[2].clone()]);
        assert_eq!(g.payoff(0, &both_one).unwrap(), one());
        let half = StrategyCombination::new(vec![s1[2].clone(), s2[1].clone()]);
        assert_eq!(g.payoff(0, &half).unwrap(), rat(1, 2));
        let low = StrategyCombination::new(vec![s1[2].clone(), s2[0].clone()]);
        assert_eq!(g.payoff(1, &low).unwrap(), zero());
    }
}

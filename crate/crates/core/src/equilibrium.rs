//! Best-response verification, deviation-witness search, best-response
//! dynamics, and grid equilibrium search.
//!
//! Deviations for one player are priced through the vertex table built by
//! `vertex_expectations`: the goal value under any mixed deviation is the
//! goal folded over weighted averages of that table's columns, so scans
//! never recompute expectations from scratch.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::error::{Error, Result};
use crate::expectation::{eval_goal, vertex_expectations, MixedStrategy, Profile};
use crate::game::Game;
use crate::limits::Limits;
use crate::rational::{rat, zero, Rational};

/// A strictly improving alternative strategy: substituting `new_strategy`
/// for `player`'s strategy raises their goal from `old_value` to
/// `new_value`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeviationWitness {
    pub player: usize,
    pub new_strategy: MixedStrategy,
    pub old_value: Rational,
    pub new_value: Rational,
}

impl DeviationWitness {
    pub fn improvement(&self) -> Rational {
        &self.new_value - &self.old_value
    }
}

/// How an equilibrium claim is backed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Certificate {
    /// Settled by exhaustive vertex scan; sound only for atomic goals,
    /// where the optimum over the deviation simplex sits at a vertex.
    Exact,
    /// An external solver answered unsat on the deviation query.
    SolverChecked,
}

/// Outcome of checking one player, or a whole profile.
#[derive(Debug, Clone, PartialEq)]
pub enum Verdict {
    Equilibrium(Certificate),
    NotEquilibrium(DeviationWitness),
    /// The scanned grid found no improvement but the goal shape does not
    /// admit an exact certificate.
    Unknown {
        grid_denominator: u64,
        max_observed_improvement: Rational,
    },
}

impl Verdict {
    /// The largest improvement this verdict witnessed (zero unless
    /// refuted).
    pub fn observed_improvement(&self) -> Rational {
        match self {
            Verdict::NotEquilibrium(w) => w.improvement(),
            Verdict::Equilibrium(_) => zero(),
            Verdict::Unknown {
                max_observed_improvement,
                ..
            } => max_observed_improvement.clone(),
        }
    }

    fn keyword(&self) -> &'static str {
        match self {
            Verdict::Equilibrium(_) => "equilibrium",
            Verdict::NotEquilibrium(_) => "not_equilibrium",
            Verdict::Unknown { .. } => "unknown",
        }
    }
}

/// Per-player verdicts in player order, plus the aggregate.
#[derive(Debug, Clone, PartialEq)]
pub struct VerifyOutcome {
    pub per_player: Vec<Verdict>,
    pub overall: Verdict,
}

/// Compositions of `total` over `slots` nonnegative parts, first
/// coordinate descending. The first `slots` entries are the unit
/// multiples of `total` in strategy order, so denominator 1 walks exactly
/// the pure strategies.
struct Compositions {
    current: Option<Vec<u64>>,
}

impl Compositions {
    fn new(total: u64, slots: usize) -> Self {
        assert!(slots > 0, "composition over zero slots");
        let mut first = vec![0u64; slots];
        first[0] = total;
        Compositions {
            current: Some(first),
        }
    }
}

impl Iterator for Compositions {
    type Item = Vec<u64>;

    fn next(&mut self) -> Option<Vec<u64>> {
        let out = self.current.take()?;
        let slots = out.len();
        let tail = out[slots - 1];
        if let Some(j) = (0..slots - 1).rev().find(|&j| out[j] > 0) {
            let mut next = out.clone();
            next[j] -= 1;
            next[j + 1] = tail + 1;
            for entry in next.iter_mut().skip(j + 2) {
                *entry = 0;
            }
            self.current = Some(next);
        }
        Some(out)
    }
}

/// `C(total + slots - 1, slots - 1)`, saturating.
fn composition_count(total: u64, slots: usize) -> u128 {
    let n = u128::from(total) + slots as u128 - 1;
    let k = (slots as u128 - 1).min(u128::from(total));
    let mut count: u128 = 1;
    for i in 0..k {
        count = count.saturating_mul(n - i) / (i + 1);
    }
    count
}

/// One player's deviation pricing for a fixed opponent profile: the goal's
/// atom columns at each of the player's pure strategies, plus the value
/// actually achieved under the profile.
struct DeviationScan<'g> {
    game: &'g Game,
    player: usize,
    tables: BTreeMap<usize, Vec<Rational>>,
    space_size: usize,
    baseline: Rational,
}

impl<'g> DeviationScan<'g> {
    fn new(game: &'g Game, player: usize, profile: &Profile, limits: &Limits) -> Result<Self> {
        let goal = game.goal_formula(player);
        let tables = vertex_expectations(game, player, profile, &goal.atoms(), limits)?;
        let mut atom_values = BTreeMap::new();
        for (&j, column) in &tables {
            let mut value = zero();
            for (s, p) in profile.strategy(player).support() {
                let entry = column
                    .get(s)
                    .ok_or(Error::NoSuchStrategy { player, index: s })?;
                value += p * entry;
            }
            atom_values.insert(j, value);
        }
        let baseline = goal.eval_closed(&atom_values)?;
        Ok(DeviationScan {
            game,
            player,
            tables,
            space_size: game.strategy_space_size(player) as usize,
            baseline,
        })
    }

    /// Goal value if the player switched to the distribution
    /// `composition / denominator`.
    fn value_at(&self, composition: &[u64], denominator: u64) -> Result<Rational> {
        let mut atom_values = BTreeMap::new();
        for (&j, column) in &self.tables {
            let mut value = zero();
            for (s, &weight) in composition.iter().enumerate() {
                if weight > 0 {
                    value += rat(weight as i64, denominator as i64) * &column[s];
                }
            }
            atom_values.insert(j, value);
        }
        self.game
            .goal_formula(self.player)
            .eval_closed(&atom_values)
    }

    /// Best deviation on the grid `1/denominator`, ties broken by
    /// composition order (vertices first). Returns a witness only on
    /// strict improvement.
    fn refute(&self, denominator: u64, limits: &Limits) -> Result<Option<DeviationWitness>> {
        limits.check(
            "deviation search",
            composition_count(denominator, self.space_size),
            limits.deviation_candidates,
            "grid deviations",
        )?;
        let mut best: Option<(Rational, Vec<u64>)> = None;
        for composition in Compositions::new(denominator, self.space_size) {
            let value = self.value_at(&composition, denominator)?;
            if best.as_ref().is_none_or(|(v, _)| value > *v) {
                best = Some((value, composition));
            }
        }
        Ok(match best {
            Some((value, composition)) if value > self.baseline => {
                let entries = composition
                    .iter()
                    .enumerate()
                    .filter(|(_, &w)| w > 0)
                    .map(|(s, &w)| (s, rat(w as i64, denominator as i64)));
                Some(DeviationWitness {
                    player: self.player,
                    new_strategy: MixedStrategy::new(self.player, entries),
                    old_value: self.baseline.clone(),
                    new_value: value,
                })
            }
            _ => None,
        })
    }
}

/// Scans every point-mass deviation of `player`; returns the best strictly
/// improving one. Sound refuter for all goals; for an atomic goal the
/// absence of a pure improvement certifies best response exactly.
pub fn pure_deviation_refute(
    game: &Game,
    player: usize,
    profile: &Profile,
    limits: &Limits,
) -> Result<Option<DeviationWitness>> {
    grid_refute(game, player, profile, 1, limits)
}

/// Scans every distribution over `player`'s strategies with probabilities
/// in multiples of `1/denominator`. Sound refuter, never a certifier.
pub fn grid_refute(
    game: &Game,
    player: usize,
    profile: &Profile,
    denominator: u64,
    limits: &Limits,
) -> Result<Option<DeviationWitness>> {
    assert!(denominator > 0, "grid denominator must be positive");
    DeviationScan::new(game, player, profile, limits)?.refute(denominator, limits)
}

/// Checks every player against the grid `1/denominator`: refuted players
/// get a witness, atomic-goal players with no improvement get an exact
/// certificate, everyone else stays unknown.
pub fn verify_equilibrium(
    game: &Game,
    profile: &Profile,
    denominator: u64,
    limits: &Limits,
) -> Result<VerifyOutcome> {
    assert!(denominator > 0, "grid denominator must be positive");
    let mut per_player = Vec::with_capacity(game.num_players());
    for player in 0..game.num_players() {
        let scan = DeviationScan::new(game, player, profile, limits)?;
        let verdict = match scan.refute(denominator, limits)? {
            Some(witness) => Verdict::NotEquilibrium(witness),
            None if game.goal_formula(player).as_single_atom().is_some() => {
                Verdict::Equilibrium(Certificate::Exact)
            }
            None => Verdict::Unknown {
                grid_denominator: denominator,
                max_observed_improvement: zero(),
            },
        };
        per_player.push(verdict);
    }
    let overall = if let Some(refuted) = per_player
        .iter()
        .find(|v| matches!(v, Verdict::NotEquilibrium(_)))
    {
        refuted.clone()
    } else if per_player
        .iter()
        .all(|v| matches!(v, Verdict::Equilibrium(_)))
    {
        Verdict::Equilibrium(Certificate::Exact)
    } else {
        Verdict::Unknown {
            grid_denominator: denominator,
            max_observed_improvement: zero(),
        }
    };
    Ok(VerifyOutcome {
        per_player,
        overall,
    })
}

/// How a dynamics run ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TerminalStatus {
    /// A full round passed with no player able to improve on the grid.
    FixedPoint,
    /// The run revisited an earlier profile.
    Cycle {
        period: usize,
    },
    MaxIters,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DynamicsStep {
    pub profile: Profile,
    pub goal_values: Vec<Rational>,
    /// The player whose update produced this step; the start has none.
    pub updated_player: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DynamicsTrace {
    pub steps: Vec<DynamicsStep>,
    pub status: TerminalStatus,
}

impl DynamicsTrace {
    /// Number of updates performed (steps beyond the start).
    pub fn updates(&self) -> usize {
        self.steps.len() - 1
    }
}

/// Round-robin best-response dynamics in player declaration order. Each
/// player in turn moves to their best grid deviation when it strictly
/// improves their goal. Stops on a clean round (fixed point), a profile
/// revisit (cycle), or after `max_iters` updates.
pub fn best_response_dynamics(
    game: &Game,
    start: &Profile,
    max_iters: usize,
    denominator: u64,
    limits: &Limits,
) -> Result<DynamicsTrace> {
    assert!(denominator > 0, "grid denominator must be positive");
    let goal_values = |p: &Profile| -> Result<Vec<Rational>> {
        (0..game.num_players())
            .map(|i| eval_goal(game, i, p, limits))
            .collect()
    };
    let mut steps = vec![DynamicsStep {
        profile: start.clone(),
        goal_values: goal_values(start)?,
        updated_player: None,
    }];
    let mut seen: HashMap<Profile, usize> = HashMap::from([(start.clone(), 0)]);
    let mut current = start.clone();
    if max_iters == 0 {
        return Ok(DynamicsTrace {
            steps,
            status: TerminalStatus::MaxIters,
        });
    }
    loop {
        let mut updated_in_round = false;
        for player in 0..game.num_players() {
            let Some(witness) = grid_refute(game, player, &current, denominator, limits)? else {
                continue;
            };
            updated_in_round = true;
            current = current.with_strategy(witness.new_strategy);
            steps.push(DynamicsStep {
                profile: current.clone(),
                goal_values: goal_values(&current)?,
                updated_player: Some(player),
            });
            let here = steps.len() - 1;
            if let Some(&first) = seen.get(&current) {
                return Ok(DynamicsTrace {
                    steps,
                    status: TerminalStatus::Cycle {
                        period: here - first,
                    },
                });
            }
            seen.insert(current.clone(), here);
            if here == max_iters {
                return Ok(DynamicsTrace {
                    steps,
                    status: TerminalStatus::MaxIters,
                });
            }
        }
        if !updated_in_round {
            return Ok(DynamicsTrace {
                steps,
                status: TerminalStatus::FixedPoint,
            });
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SearchOutcome {
    /// A grid profile every player's verdict certifies exactly.
    Found(Profile),
    /// No certified equilibrium on the grid; the profile minimizing the
    /// largest observed improvement, with that improvement. Not a
    /// certificate of existence or non-existence.
    Candidate { profile: Profile, epsilon: Rational },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchReport {
    pub denominator: u64,
    pub examined: u64,
    pub outcome: SearchOutcome,
}

impl SearchReport {
    pub fn certified(&self) -> bool {
        matches!(self.outcome, SearchOutcome::Found(_))
    }
}

/// Enumerates every profile whose probabilities are multiples of
/// `1/denominator` and verifies each. Returns on the first certified
/// equilibrium; otherwise reports the minimal-ε candidate.
pub fn search_equilibrium(game: &Game, denominator: u64, limits: &Limits) -> Result<SearchReport> {
    assert!(denominator > 0, "grid denominator must be positive");
    let mut per_player: Vec<Vec<Vec<u64>>> = Vec::with_capacity(game.num_players());
    let mut total: u128 = 1;
    for player in 0..game.num_players() {
        let size = game.strategy_space_size(player);
        limits.check(
            "profile enumeration",
            size,
            limits.strategies_per_player,
            "strategies",
        )?;
        let count = composition_count(denominator, size as usize);
        total = total.saturating_mul(count);
        limits.check(
            "profile enumeration",
            total,
            limits.deviation_candidates,
            "grid profiles",
        )?;
        per_player.push(Compositions::new(denominator, size as usize).collect());
    }

    let build = |indices: &[usize]| -> Profile {
        Profile::new(
            indices
                .iter()
                .enumerate()
                .map(|(player, &c)| {
                    let entries = per_player[player][c]
                        .iter()
                        .enumerate()
                        .filter(|(_, &w)| w > 0)
                        .map(|(s, &w)| (s, rat(w as i64, denominator as i64)));
                    MixedStrategy::new(player, entries)
                })
                .collect(),
        )
    };

    let mut indices = vec![0usize; game.num_players()];
    let mut examined: u64 = 0;
    let mut candidate: Option<(Rational, Profile)> = None;
    loop {
        let profile = build(&indices);
        examined += 1;
        let outcome = verify_equilibrium(game, &profile, denominator, limits)?;
        if matches!(outcome.overall, Verdict::Equilibrium(_)) {
            return Ok(SearchReport {
                denominator,
                examined,
                outcome: SearchOutcome::Found(profile),
            });
        }
        let epsilon = outcome
            .per_player
            .iter()
            .map(Verdict::observed_improvement)
            .max()
            .unwrap_or_else(zero);
        if candidate.as_ref().is_none_or(|(e, _)| epsilon < *e) {
            candidate = Some((epsilon, profile));
        }
        let mut pos = indices.len();
        loop {
            if pos == 0 {
                let (epsilon, profile) = candidate.expect("at least one profile examined");
                return Ok(SearchReport {
                    denominator,
                    examined,
                    outcome: SearchOutcome::Candidate { profile, epsilon },
                });
            }
            pos -= 1;
            indices[pos] += 1;
            if indices[pos] < per_player[pos].len() {
                break;
            }
            indices[pos] = 0;
        }
    }
}

impl fmt::Display for TerminalStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TerminalStatus::FixedPoint => write!(f, "fixed point"),
            TerminalStatus::Cycle { period } => write!(f, "cycle of period {period}"),
            TerminalStatus::MaxIters => write!(f, "iteration limit reached"),
        }
    }
}

impl VerifyOutcome {
    pub fn render_text(&self, game: &Game, limits: &Limits) -> Result<String> {
        let mut out = String::new();
        for (i, verdict) in self.per_player.iter().enumerate() {
            let name = &game.players()[i];
            match verdict {
                Verdict::Equilibrium(Certificate::Exact) => {
                    out.push_str(&format!("{name}: best response (exact, vertex scan)\n"));
                }
                Verdict::Equilibrium(Certificate::SolverChecked) => {
                    out.push_str(&format!("{name}: best response (solver checked)\n"));
                }
                Verdict::NotEquilibrium(w) => {
                    out.push_str(&format!(
                        "{name}: improves by deviating to {} (goal {} -> {})\n",
                        w.new_strategy.render(game, limits)?,
                        w.old_value,
                        w.new_value
                    ));
                }
                Verdict::Unknown {
                    grid_denominator, ..
                } => {
                    out.push_str(&format!(
                        "{name}: no improvement on the 1/{grid_denominator} grid (not certified)\n"
                    ));
                }
            }
        }
        out.push_str(&format!("overall: {}\n", self.overall.keyword()));
        Ok(out)
    }

    /// Machine-readable key=value lines. The first `verdict=` is the
    /// overall answer; each `player=` opens a block with that player's
    /// `verdict=`, `epsilon=` and `witness=` (empty unless refuted).
    pub fn render_machine(&self, game: &Game, limits: &Limits) -> Result<String> {
        let mut out = String::new();
        out.push_str(&format!("verdict={}\n", self.overall.keyword()));
        for (i, verdict) in self.per_player.iter().enumerate() {
            out.push_str(&format!("player={}\n", game.players()[i]));
            out.push_str(&format!("verdict={}\n", verdict.keyword()));
            out.push_str(&format!("epsilon={}\n", verdict.observed_improvement()));
            match verdict {
                Verdict::NotEquilibrium(w) => {
                    out.push_str(&format!(
                        "witness={}\n",
                        w.new_strategy.render(game, limits)?
                    ));
                }
                _ => out.push_str("witness=\n"),
            }
        }
        Ok(out)
    }
}

impl DynamicsTrace {
    pub fn render_text(&self, game: &Game, limits: &Limits) -> Result<String> {
        let mut out = String::new();
        for (n, step) in self.steps.iter().enumerate() {
            let goals: Vec<String> = step
                .goal_values
                .iter()
                .enumerate()
                .map(|(i, v)| format!("{}={v}", game.players()[i]))
                .collect();
            let mover = match step.updated_player {
                Some(i) => format!(" ({} moved)", game.players()[i]),
                None => String::new(),
            };
            out.push_str(&format!(
                "step {n}{mover}: {}  goals: {}\n",
                step.profile.render(game, limits)?,
                goals.join(", ")
            ));
        }
        out.push_str(&format!("status: {}\n", self.status));
        Ok(out)
    }

    pub fn render_machine(&self) -> String {
        let mut out = String::new();
        let verdict = match self.status {
            TerminalStatus::FixedPoint => "fixed_point",
            TerminalStatus::Cycle { .. } => "cycle",
            TerminalStatus::MaxIters => "max_iters",
        };
        out.push_str(&format!("verdict={verdict}\n"));
        if let TerminalStatus::Cycle { period } = self.status {
            out.push_str(&format!("period={period}\n"));
        }
        out.push_str(&format!("steps={}\n", self.updates()));
        out
    }
}

impl SearchReport {
    pub fn render_text(&self, game: &Game, limits: &Limits) -> Result<String> {
        let mut out = String::new();
        out.push_str(&format!(
            "grid denominator {}, profiles examined {}\n",
            self.denominator, self.examined
        ));
        match &self.outcome {
            SearchOutcome::Found(profile) => {
                out.push_str(&format!(
                    "equilibrium (exact): {}\n",
                    profile.render(game, limits)?
                ));
            }
            SearchOutcome::Candidate { profile, epsilon } => {
                out.push_str(&format!(
                    "no certified equilibrium on this grid; best candidate: {}\n",
                    profile.render(game, limits)?
                ));
                out.push_str(&format!("max observed improvement: {epsilon}\n"));
                out.push_str("note: not a certificate of existence or non-existence\n");
            }
        }
        Ok(out)
    }

    pub fn render_machine(&self, game: &Game, limits: &Limits) -> Result<String> {
        let mut out = String::new();
        match &self.outcome {
            SearchOutcome::Found(profile) => {
                out.push_str("verdict=equilibrium\n");
                out.push_str("epsilon=0\n");
                out.push_str(&format!("witness={}\n", profile.render(game, limits)?));
            }
            SearchOutcome::Candidate { profile, epsilon } => {
                out.push_str("verdict=candidate\n");
                out.push_str(&format!("epsilon={epsilon}\n"));
                out.push_str(&format!("witness={}\n", profile.render(game, limits)?));
            }
        }
        out.push_str(&format!("grid={}\n", self.denominator));
        out.push_str(&format!("examined={}\n", self.examined));
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::Formula;
    use crate::modal::ModalFormula;
    use crate::rational::one;
    use crate::scale::LkScale;

    /// Two players, each paid the value of their own variable, each aiming
    /// to maximize their own expectation.
    fn selfish_game() -> Game {
        Game::new(
            LkScale::new(1),
            vec!["P1".into(), "P2".into()],
            vec!["p1".into(), "p2".into()],
            vec![vec!["p1".into()], vec!["p2".into()]],
            vec![Formula::var("p1"), Formula::var("p2")],
            vec![ModalFormula::atom(0), ModalFormula::atom(1)],
        )
    }

    /// The matching game: P1 wants the expectations to agree, P2 wants
    /// them apart.
    fn matching_game() -> Game {
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

    fn uniform(owner: usize) -> MixedStrategy {
        MixedStrategy::new(owner, [(0, rat(1, 2)), (1, rat(1, 2))])
    }

    #[test]
    fn composition_order_and_count() {
        let all: Vec<Vec<u64>> = Compositions::new(2, 3).collect();
        assert_eq!(
            all,
            vec![
                vec![2, 0, 0],
                vec![1, 1, 0],
                vec![1, 0, 1],
                vec![0, 2, 0],
                vec![0, 1, 1],
                vec![0, 0, 2],
            ]
        );
        assert_eq!(composition_count(2, 3), 6);
        assert_eq!(composition_count(4, 2), 5);
        assert_eq!(composition_count(0, 3), 1);
        assert_eq!(Compositions::new(0, 3).count(), 1);
        assert_eq!(Compositions::new(3, 1).collect::<Vec<_>>(), vec![vec![3]]);
        // denominator 1 walks the pure strategies in index order
        let pure: Vec<Vec<u64>> = Compositions::new(1, 3).collect();
        assert_eq!(pure, vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
    }

    #[test]
    fn maximal_payoff_is_not_refuted() {
        // Single player paid their own variable, already at the top.
        let g = Game::new(
            LkScale::new(1),
            vec!["P1".into()],
            vec!["p1".into()],
            vec![vec!["p1".into()]],
            vec![Formula::var("p1")],
            vec![ModalFormula::atom(0)],
        );
        let p = Profile::pure(&[1]);
        let limits = Limits::default();
        assert_eq!(pure_deviation_refute(&g, 0, &p, &limits).unwrap(), None);
    }

    #[test]
    fn matcher_chases_the_point_mass() {
        // P1 uniform, P2 all-in on 1: P1 should go all-in on 1 too,
        // raising the goal from 1/2 to 1.
        let g = matching_game();
        let p = Profile::new(vec![uniform(0), MixedStrategy::point_mass(1, 1)]);
        let w = pure_deviation_refute(&g, 0, &p, &Limits::default())
            .unwrap()
            .expect("P1 can improve");
        assert_eq!(w.player, 0);
        assert_eq!(w.new_strategy, MixedStrategy::point_mass(0, 1));
        assert_eq!(w.old_value, rat(1, 2));
        assert_eq!(w.new_value, one());
    }

    #[test]
    fn mismatcher_flees_the_match() {
        // Both at 0: P2's goal |E p1 - E p2| is 0, deviating to 1 gives 1.
        let g = matching_game();
        let p = Profile::pure(&[0, 0]);
        let w = pure_deviation_refute(&g, 1, &p, &Limits::default())
            .unwrap()
            .expect("P2 can improve");
        assert_eq!(w.new_strategy, MixedStrategy::point_mass(1, 1));
        assert_eq!(w.old_value, zero());
        assert_eq!(w.new_value, one());
    }

    #[test]
    fn grid_finds_strictly_mixed_optimum() {
        // Goal 1 - |E p1 - 1/2| with the player at point mass 0: no pure
        // deviation reaches expectation 1/2, but the uniform mix does.
        let g = Game::new(
            LkScale::new(1),
            vec!["P1".into()],
            vec!["p1".into()],
            vec![vec!["p1".into()]],
            vec![Formula::var("p1")],
            vec![ModalFormula::not(ModalFormula::distance(
                ModalFormula::atom(0),
                ModalFormula::constant(rat(1, 2)),
            ))],
        );
        let p = Profile::pure(&[0]);
        let limits = Limits::default();
        let pure = pure_deviation_refute(&g, 0, &p, &limits).unwrap();
        // pure deviations can only move the distance sideways: 0 -> 1
        // keeps |e - 1/2| = 1/2, so value stays 1/2 and nothing improves
        assert_eq!(pure, None);
        let w = grid_refute(&g, 0, &p, 2, &limits)
            .unwrap()
            .expect("uniform mix improves");
        assert_eq!(w.new_strategy, uniform(0));
        assert_eq!(w.old_value, rat(1, 2));
        assert_eq!(w.new_value, one());
    }

    #[test]
    fn grid_one_equals_pure_scan() {
        let g = matching_game();
        let limits = Limits::default();
        for a in 0..2 {
            for b in 0..2 {
                let p = Profile::pure(&[a, b]);
                for i in 0..2 {
                    assert_eq!(
                        pure_deviation_refute(&g, i, &p, &limits).unwrap(),
                        grid_refute(&g, i, &p, 1, &limits).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn verify_certifies_selfish_top() {
        let g = selfish_game();
        let outcome =
            verify_equilibrium(&g, &Profile::pure(&[1, 1]), 1, &Limits::default()).unwrap();
        assert_eq!(outcome.overall, Verdict::Equilibrium(Certificate::Exact));
        for v in &outcome.per_player {
            assert_eq!(*v, Verdict::Equilibrium(Certificate::Exact));
        }
    }

    #[test]
    fn verify_refutes_matching_profiles() {
        let g = matching_game();
        let limits = Limits::default();
        // P1 uniform, P2 point mass 1: P1 refuted.
        let p = Profile::new(vec![uniform(0), MixedStrategy::point_mass(1, 1)]);
        let outcome = verify_equilibrium(&g, &p, 2, &limits).unwrap();
        assert!(matches!(
            &outcome.per_player[0],
            Verdict::NotEquilibrium(w) if w.player == 0
        ));
        assert!(matches!(&outcome.overall, Verdict::NotEquilibrium(_)));

        // Both uniform: expectations agree, so P2 deviates to a point
        // mass and moves the distance from 0 to 1/2.
        let p = Profile::new(vec![uniform(0), uniform(1)]);
        let outcome = verify_equilibrium(&g, &p, 2, &limits).unwrap();
        match &outcome.per_player[1] {
            Verdict::NotEquilibrium(w) => {
                assert_eq!(w.old_value, zero());
                assert_eq!(w.new_value, rat(1, 2));
                assert!(w.new_strategy.as_point_mass().is_some());
            }
            other => panic!("expected refutation, got {other:?}"),
        }
    }

    #[test]
    fn witnesses_reverify_under_eval_goal() {
        let g = matching_game();
        let limits = Limits::default();
        for a in 0..2 {
            for b in 0..2 {
                let p = Profile::pure(&[a, b]);
                for i in 0..2 {
                    if let Some(w) = grid_refute(&g, i, &p, 3, &limits).unwrap() {
                        let old = eval_goal(&g, i, &p, &limits).unwrap();
                        let new =
                            eval_goal(&g, i, &p.with_strategy(w.new_strategy.clone()), &limits)
                                .unwrap();
                        assert_eq!(old, w.old_value);
                        assert_eq!(new, w.new_value);
                        assert!(new > old);
                    }
                }
            }
        }
    }

    #[test]
    fn dynamics_converges_on_selfish_game() {
        let g = selfish_game();
        let limits = Limits::default();
        for start in [[0, 0], [0, 1], [1, 0], [1, 1]] {
            let trace = best_response_dynamics(&g, &Profile::pure(&start), 50, 1, &limits).unwrap();
            assert_eq!(trace.status, TerminalStatus::FixedPoint);
            let last = &trace.steps.last().unwrap().profile;
            let outcome = verify_equilibrium(&g, last, 1, &limits).unwrap();
            assert_eq!(outcome.overall, Verdict::Equilibrium(Certificate::Exact));
        }
    }

    #[test]
    fn dynamics_cycles_on_matching_game() {
        let g = matching_game();
        let trace =
            best_response_dynamics(&g, &Profile::pure(&[0, 0]), 50, 1, &Limits::default()).unwrap();
        assert!(matches!(trace.status, TerminalStatus::Cycle { period } if period > 0));
        // consecutive profiles differ in exactly one player's strategy
        for pair in trace.steps.windows(2) {
            let changed: Vec<usize> = (0..2)
                .filter(|&i| pair[0].profile.strategy(i) != pair[1].profile.strategy(i))
                .collect();
            assert_eq!(changed.len(), 1);
            assert_eq!(Some(changed[0]), pair[1].updated_player);
        }
    }

    #[test]
    fn dynamics_zero_iters_returns_start_only() {
        let g = matching_game();
        let trace =
            best_response_dynamics(&g, &Profile::pure(&[0, 0]), 0, 1, &Limits::default()).unwrap();
        assert_eq!(trace.steps.len(), 1);
        assert_eq!(trace.status, TerminalStatus::MaxIters);
    }

    #[test]
    fn search_finds_selfish_equilibrium() {
        let g = selfish_game();
        let report = search_equilibrium(&g, 1, &Limits::default()).unwrap();
        match &report.outcome {
            SearchOutcome::Found(p) => assert_eq!(p, &Profile::pure(&[1, 1])),
            other => panic!("expected a certified equilibrium, got {other:?}"),
        }
        assert!(report.certified());
    }

    #[test]
    fn search_single_player_maximum() {
        let g = Game::new(
            LkScale::new(1),
            vec!["P1".into()],
            vec!["p1".into()],
            vec![vec!["p1".into()]],
            vec![Formula::var("p1")],
            vec![ModalFormula::atom(0)],
        );
        let report = search_equilibrium(&g, 1, &Limits::default()).unwrap();
        match &report.outcome {
            SearchOutcome::Found(p) => assert_eq!(p, &Profile::pure(&[1])),
            other => panic!("expected a certified equilibrium, got {other:?}"),
        }
    }

    #[test]
    fn search_matching_game_reports_candidate() {
        // On the half-integer grid every profile is refutable; the least
        // bad ones sit at E p1 = 1/2, where the loser still gains 1/2.
        let g = matching_game();
        let report = search_equilibrium(&g, 2, &Limits::default()).unwrap();
        assert_eq!(report.examined, 9);
        match &report.outcome {
            SearchOutcome::Candidate { epsilon, .. } => assert_eq!(*epsilon, rat(1, 2)),
            other => panic!("expected a candidate, got {other:?}"),
        }
        assert!(!report.certified());
    }

    #[test]
    fn matching_game_unstable_on_coarse_grids() {
        let g = matching_game();
        let limits = Limits::default();
        for denominator in 1..=2u64 {
            let grid: Vec<Vec<u64>> = Compositions::new(denominator, 2).collect();
            for c1 in &grid {
                for c2 in &grid {
                    let profile = Profile::new(vec![
                        MixedStrategy::new(
                            0,
                            c1.iter()
                                .enumerate()
                                .filter(|(_, &w)| w > 0)
                                .map(|(s, &w)| (s, rat(w as i64, denominator as i64))),
                        ),
                        MixedStrategy::new(
                            1,
                            c2.iter()
                                .enumerate()
                                .filter(|(_, &w)| w > 0)
                                .map(|(s, &w)| (s, rat(w as i64, denominator as i64))),
                        ),
                    ]);
                    let outcome =
                        verify_equilibrium(&g, &profile, denominator.max(2), &limits).unwrap();
                    assert!(
                        matches!(outcome.overall, Verdict::NotEquilibrium(_)),
                        "profile {profile:?} should be refuted"
                    );
                }
            }
        }
    }

    #[test]
    fn machine_rendering_shape() {
        let g = matching_game();
        let limits = Limits::default();
        let p = Profile::new(vec![uniform(0), MixedStrategy::point_mass(1, 1)]);
        let outcome = verify_equilibrium(&g, &p, 2, &limits).unwrap();
        let machine = outcome.render_machine(&g, &limits).unwrap();
        let lines: Vec<&str> = machine.lines().collect();
        assert_eq!(lines[0], "verdict=not_equilibrium");
        assert_eq!(lines[1], "player=P1");
        assert_eq!(lines[2], "verdict=not_equilibrium");
        assert_eq!(lines[3], "epsilon=1/2");
        assert_eq!(lines[4], "witness=p1=1:1");
        assert!(lines.contains(&"player=P2"));
    }
}

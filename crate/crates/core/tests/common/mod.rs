//! Shared fixtures, oracles and random generators for the integration
//! suites. The oracles here recompute results by the most direct route
//! available so the optimized engine paths have something independent
//! to agree with.

#![allow(dead_code)]

use exg_core::rational::{one, rat, zero};
use exg_core::{
    Formula, Game, Limits, LkScale, MixedStrategy, ModalFormula, Profile, Rational,
    StrategyCombination,
};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// The matching game: payoffs `p1`, `p2` over k = 1; P1 wants the two
/// expectations to coincide, P2 wants them far apart. It has no
/// equilibrium.
pub fn matching_game() -> Game {
    let game = Game::new(
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
    );
    assert!(game.validate().is_empty());
    game
}

/// The same board as [`matching_game`] but each player simply maximizes
/// their own expectation. Games of this form always have an equilibrium.
pub fn selfish_game() -> Game {
    let game = Game::new(
        LkScale::new(1),
        vec!["P1".into(), "P2".into()],
        vec!["p1".into(), "p2".into()],
        vec![vec!["p1".into()], vec!["p2".into()]],
        vec![Formula::var("p1"), Formula::var("p2")],
        vec![ModalFormula::atom(0), ModalFormula::atom(1)],
    );
    assert!(game.validate().is_empty());
    game
}

/// Expected payoff computed term by term over the full joint pure
/// strategy space, including probability-zero terms.
pub fn naive_expected_payoff(
    game: &Game,
    player: usize,
    profile: &Profile,
    limits: &Limits,
) -> Rational {
    let spaces: Vec<_> = (0..game.num_players())
        .map(|i| game.enumerate_strategies(i, limits).unwrap())
        .collect();
    let mut total = zero();
    let mut index = vec![0usize; spaces.len()];
    loop {
        let combination = StrategyCombination::new(
            index
                .iter()
                .enumerate()
                .map(|(i, &s)| spaces[i][s].clone())
                .collect(),
        );
        let mut prob = one();
        for (i, &s) in index.iter().enumerate() {
            prob *= profile.strategies()[i].prob(s);
        }
        total += prob * game.payoff(player, &combination).unwrap();

        let mut place = spaces.len();
        loop {
            if place == 0 {
                return total;
            }
            place -= 1;
            index[place] += 1;
            if index[place] < spaces[place].len() {
                break;
            }
            index[place] = 0;
        }
    }
}

/// A random formula over `vars` with constants drawn from the scale.
pub fn random_formula(
    rng: &mut ChaCha8Rng,
    vars: &[String],
    scale: LkScale,
    depth: u32,
) -> Formula {
    if depth == 0 || rng.random_range(0..4) == 0 {
        if rng.random_range(0..4) == 0 {
            let i = rng.random_range(0..scale.len());
            return Formula::constant(scale.value(i));
        }
        let var = vars.choose(rng).expect("variable pool is never empty");
        return Formula::var(var.clone());
    }
    let a = random_formula(rng, vars, scale, depth - 1);
    match rng.random_range(0..9) {
        0 => Formula::not(a),
        op => {
            let b = random_formula(rng, vars, scale, depth - 1);
            match op {
                1 => Formula::implies(a, b),
                2 => Formula::strong_conj(a, b),
                3 => Formula::strong_disj(a, b),
                4 => Formula::trunc_sub(a, b),
                5 => Formula::min_conj(a, b),
                6 => Formula::max_disj(a, b),
                7 => Formula::iff(a, b),
                _ => Formula::distance(a, b),
            }
        }
    }
}

/// A random goal over `players` expectation atoms, using the whole
/// goal-level connective set. Constants stay inside `[0, 1]`.
pub fn random_goal(rng: &mut ChaCha8Rng, players: usize, depth: u32) -> ModalFormula {
    if depth == 0 || rng.random_range(0..4) == 0 {
        if rng.random_range(0..4) == 0 {
            let num = rng.random_range(0..=4);
            return ModalFormula::constant(rat(num, 4));
        }
        return ModalFormula::atom(rng.random_range(0..players));
    }
    let a = random_goal(rng, players, depth - 1);
    match rng.random_range(0..12) {
        0 => ModalFormula::not(a),
        1 => ModalFormula::delta(a),
        op => {
            let b = random_goal(rng, players, depth - 1);
            match op {
                2 => ModalFormula::implies(a, b),
                3 => ModalFormula::trunc_div(a, b),
                4 => ModalFormula::iff(a, b),
                5 => ModalFormula::max_disj(a, b),
                6 => ModalFormula::min_conj(a, b),
                7 => ModalFormula::strong_disj(a, b),
                8 => ModalFormula::trunc_sub(a, b),
                9 => ModalFormula::strong_conj(a, b),
                10 => ModalFormula::product(a, b),
                _ => ModalFormula::distance(a, b),
            }
        }
    }
}

/// A random game with up to 3 players over k ∈ {1, 2}, at most 4
/// variables in total and at most 4 strategies per player.
pub fn random_game(rng: &mut ChaCha8Rng) -> Game {
    let players = rng.random_range(1..=3usize);
    let k = rng.random_range(1..=2u32);
    let scale = LkScale::new(k);
    let max_vars_per_player = if k == 1 { 2 } else { 1 };

    let mut names = Vec::new();
    let mut variables = Vec::new();
    let mut controls = Vec::new();
    let mut budget = 4usize;
    for i in 0..players {
        names.push(format!("P{}", i + 1));
        let reserve = players - i - 1;
        let cap = max_vars_per_player.min(budget - reserve);
        let count = rng.random_range(1..=cap.max(1));
        budget -= count;
        let mut block = Vec::new();
        for _ in 0..count {
            let var = format!("p{}", variables.len() + 1);
            variables.push(var.clone());
            block.push(var);
        }
        controls.push(block);
    }

    let payoffs = (0..players)
        .map(|_| random_formula(rng, &variables, scale, 3))
        .collect();
    let goals = (0..players).map(|_| random_goal(rng, players, 2)).collect();
    let game = Game::new(scale, names, variables, controls, payoffs, goals);
    assert!(
        game.validate().is_empty(),
        "generator built an invalid game"
    );
    game
}

/// A random two-player game over k = 1 with one variable each whose
/// goals are exactly the players' own expectations.
pub fn random_atomic_game(rng: &mut ChaCha8Rng) -> Game {
    let scale = LkScale::new(1);
    let variables = vec!["p1".to_string(), "p2".to_string()];
    let payoffs = (0..2)
        .map(|_| random_formula(rng, &variables, scale, 3))
        .collect();
    let game = Game::new(
        scale,
        vec!["P1".into(), "P2".into()],
        variables,
        vec![vec!["p1".into()], vec!["p2".into()]],
        payoffs,
        vec![ModalFormula::atom(0), ModalFormula::atom(1)],
    );
    assert!(game.validate().is_empty());
    game
}

/// A random mixed strategy for `player` with support of at most 3
/// strategies and rational weights.
pub fn random_mixed_strategy(rng: &mut ChaCha8Rng, game: &Game, player: usize) -> MixedStrategy {
    let space = usize::try_from(game.strategy_space_size(player)).unwrap();
    let support_size = rng.random_range(1..=space.min(3));
    let mut indices: Vec<usize> = (0..space).collect();
    indices.shuffle(rng);
    indices.truncate(support_size);
    let weights: Vec<i64> = (0..support_size)
        .map(|_| rng.random_range(1..=4i64))
        .collect();
    let total: i64 = weights.iter().sum();
    MixedStrategy::new(
        player,
        indices
            .into_iter()
            .zip(weights)
            .map(|(s, w)| (s, rat(w, total))),
    )
}

pub fn random_profile(rng: &mut ChaCha8Rng, game: &Game) -> Profile {
    Profile::new(
        (0..game.num_players())
            .map(|i| random_mixed_strategy(rng, game, i))
            .collect(),
    )
}

pub fn random_pure_profile(rng: &mut ChaCha8Rng, game: &Game) -> Profile {
    let indices: Vec<usize> = (0..game.num_players())
        .map(|i| rng.random_range(0..usize::try_from(game.strategy_space_size(i)).unwrap()))
        .collect();
    Profile::pure(&indices)
}

/// The convex combination `weight * a + (1 - weight) * b` of two mixed
/// strategies for the same player.
pub fn mix_strategies(a: &MixedStrategy, b: &MixedStrategy, weight: &Rational) -> MixedStrategy {
    assert_eq!(a.owner(), b.owner());
    let complement = one() - weight;
    let mut entries = std::collections::BTreeMap::new();
    for (s, p) in a.support() {
        *entries.entry(s).or_insert_with(zero) += weight * p;
    }
    for (s, p) in b.support() {
        *entries.entry(s).or_insert_with(zero) += &complement * p;
    }
    MixedStrategy::new(a.owner(), entries)
}

/// Checks parenthesis balance, the one well-formedness property of
/// SMT-LIB output that survives without a full reparse.
pub fn balanced_sexprs(text: &str) -> bool {
    let mut depth = 0i64;
    for c in text.chars() {
        match c {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth < 0 {
                    return false;
                }
            }
            _ => {}
        }
    }
    depth == 0
}

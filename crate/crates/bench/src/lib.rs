//! Fixture games shared by the benchmarks: small enough to iterate
//! quickly, large enough that the measured paths dominate setup.

use exg_core::rational::rat;
use exg_core::{Formula, Game, LkScale, MixedStrategy, ModalFormula, Profile};

/// The two-player bit game: each player is paid their own bit, one goal
/// rewards matching expectations and the other rewards splitting them.
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

/// Three players on a three-valued scale with interlocking payoffs and
/// non-atomic goals, the heaviest shape the test corpus uses.
pub fn three_player_game() -> Game {
    let (a, b, c) = (Formula::var("a"), Formula::var("b"), Formula::var("c"));
    let payoffs = vec![
        Formula::strong_conj(a.clone(), Formula::implies(b.clone(), c.clone())),
        Formula::max_disj(
            Formula::not(b.clone()),
            Formula::strong_disj(a.clone(), c.clone()),
        ),
        Formula::iff(Formula::trunc_sub(c, a), b),
    ];
    let goals = vec![
        ModalFormula::product(ModalFormula::atom(0), ModalFormula::atom(1)),
        ModalFormula::iff(ModalFormula::atom(1), ModalFormula::half()),
        ModalFormula::trunc_div(ModalFormula::atom(2), ModalFormula::atom(0)),
    ];
    let game = Game::new(
        LkScale::new(2),
        vec!["A".into(), "B".into(), "C".into()],
        vec!["a".into(), "b".into(), "c".into()],
        vec![vec!["a".into()], vec!["b".into()], vec!["c".into()]],
        payoffs,
        goals,
    );
    assert!(game.validate().is_empty());
    game
}

/// Every player uniform over their full strategy space.
pub fn uniform_profile(game: &Game) -> Profile {
    let strategies = (0..game.num_players())
        .map(|player| {
            let size = i64::try_from(game.strategy_space_size(player)).unwrap();
            MixedStrategy::new(
                player,
                (0..size).map(|s| (usize::try_from(s).unwrap(), rat(1, size))),
            )
        })
        .collect();
    Profile::new(strategies)
}

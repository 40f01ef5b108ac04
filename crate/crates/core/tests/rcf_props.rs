//! Properties of the SMT-LIB compilation path: the symbolic encodings
//! agree with the exact evaluator, deviation witnesses are models of
//! the verification query, and output is deterministic. When a solver
//! command is configured the answers are checked against the engine.

mod common;

use std::collections::BTreeMap;

use exg_core::rational::rat;
use exg_core::rcf::{
    compile_existence_sentence, compile_verification_query, encode_deviation_goal,
    encode_expectation, encode_goal, solve_divisions, var_name, SolverAnswer, SolverCommand,
};
use exg_core::{
    eval_goal, expected_payoff, grid_refute, verify_equilibrium, Certificate, Limits,
    MixedStrategy, Profile, Rational, Verdict,
};

/// The probability environment describing `profile` in `prefix`-named
/// variables.
fn profile_env(
    profile: &Profile,
    game: &exg_core::Game,
    prefix: &str,
) -> BTreeMap<String, Rational> {
    let mut env = BTreeMap::new();
    for (i, strategy) in profile.strategies().iter().enumerate() {
        let size = usize::try_from(game.strategy_space_size(i)).unwrap();
        for s in 0..size {
            env.insert(var_name(prefix, i, s), strategy.prob(s));
        }
    }
    env
}

/// The symbolic expectation polynomial evaluates to exactly what the
/// engine computes, on random games and profiles.
#[test]
fn expectation_encoding_agrees_with_the_evaluator() {
    let limits = Limits::default();
    let mut rng = common::rng(0xe4c0de);
    for _ in 0..60 {
        let game = common::random_game(&mut rng);
        let profile = common::random_profile(&mut rng, &game);
        let env = profile_env(&profile, &game, "x");
        for player in 0..game.num_players() {
            let term = encode_expectation(&game, player, &limits).unwrap();
            assert!(term.is_polynomial());
            assert_eq!(
                term.eval(&env).unwrap(),
                expected_payoff(&game, player, &profile, &limits).unwrap()
            );
        }
    }
}

/// The symbolic goal encoding, with its division constraints solved,
/// evaluates to exactly the engine's goal value.
#[test]
fn goal_encoding_agrees_with_the_evaluator() {
    let limits = Limits::default();
    let mut rng = common::rng(0x90a1);
    for _ in 0..60 {
        let game = common::random_game(&mut rng);
        let profile = common::random_profile(&mut rng, &game);
        for player in 0..game.num_players() {
            let (term, constraints) = encode_goal(&game, player, &limits).unwrap();
            let mut env = profile_env(&profile, &game, "x");
            solve_divisions(&constraints, &mut env).unwrap();
            assert_eq!(
                term.eval(&env).unwrap(),
                eval_goal(&game, player, &profile, &limits).unwrap(),
                "player {player}"
            );
        }
    }
}

/// Every grid refutation is a model of the verification query: plugging
/// the witness strategy into the deviation variables satisfies all
/// assertions.
#[test]
fn witnesses_are_models_of_the_verification_query() {
    let limits = Limits::default();
    let mut rng = common::rng(0x3a7);
    let mut checked = 0;
    for _ in 0..80 {
        let game = common::random_game(&mut rng);
        let profile = common::random_profile(&mut rng, &game);
        for player in 0..game.num_players() {
            let Some(witness) = grid_refute(&game, player, &profile, 2, &limits).unwrap() else {
                continue;
            };
            let script = compile_verification_query(&game, &profile, player, &limits).unwrap();
            let (_, constraints) = encode_deviation_goal(&game, &profile, player, &limits).unwrap();
            let size = usize::try_from(game.strategy_space_size(player)).unwrap();
            let mut env = BTreeMap::new();
            for s in 0..size {
                env.insert(var_name("y", player, s), witness.new_strategy.prob(s));
            }
            solve_divisions(&constraints, &mut env).unwrap();
            for assertion in &script.assertions {
                assert!(
                    assertion.eval(&env).unwrap(),
                    "witness violated {}",
                    assertion.render()
                );
            }
            checked += 1;
        }
    }
    assert!(checked > 30, "only {checked} witnesses checked");
}

/// For certified equilibria of atomic-goal games the verification query
/// has no model on the deviation vertices, which for a linear goal
/// means no model at all.
#[test]
fn certified_profiles_leave_the_query_unsatisfiable_on_vertices() {
    let limits = Limits::default();
    let mut rng = common::rng(0x0b57);
    for _ in 0..20 {
        let game = common::random_atomic_game(&mut rng);
        let report = exg_core::search_equilibrium(&game, 2, &limits).unwrap();
        let exg_core::SearchOutcome::Found(profile) = report.outcome else {
            panic!("atomic-goal game without certified equilibrium");
        };
        for player in 0..game.num_players() {
            let script = compile_verification_query(&game, &profile, player, &limits).unwrap();
            let size = usize::try_from(game.strategy_space_size(player)).unwrap();
            for vertex in 0..size {
                let deviated = profile.with_strategy(MixedStrategy::point_mass(player, vertex));
                let env = profile_env(&deviated, &game, "y");
                let holds = script.assertions.iter().all(|a| a.eval(&env).unwrap());
                assert!(!holds, "vertex {vertex} satisfied a certified query");
            }
        }
    }
}

/// Compilation output is deterministic and structurally well formed.
#[test]
fn scripts_are_deterministic_and_well_formed() {
    let limits = Limits::default();
    let mut rng = common::rng(0xde7e);
    for _ in 0..20 {
        let game = common::random_game(&mut rng);
        let profile = common::random_profile(&mut rng, &game);

        let existence = compile_existence_sentence(&game, &limits).unwrap().render();
        assert!(common::balanced_sexprs(&existence));
        assert!(existence.starts_with("(set-logic NRA)"));
        assert!(existence.trim_end().ends_with("(check-sat)"));
        assert_eq!(
            existence,
            compile_existence_sentence(&game, &limits).unwrap().render()
        );

        for player in 0..game.num_players() {
            let query = compile_verification_query(&game, &profile, player, &limits)
                .unwrap()
                .render();
            assert!(common::balanced_sexprs(&query));
            assert!(query.starts_with("(set-logic QF_NRA)"));
            assert_eq!(
                query,
                compile_verification_query(&game, &profile, player, &limits)
                    .unwrap()
                    .render()
            );
        }
    }
}

/// With a solver configured, its answers on verification queries match
/// the engine's certified verdicts, and the two worked examples get the
/// expected existence answers. Skipped quietly without a solver; the
/// acceptance suite prints the warning.
#[test]
fn solver_agrees_with_the_engine_when_configured() {
    let Some(solver) = SolverCommand::from_env() else {
        eprintln!("no solver configured; skipping solver agreement checks");
        return;
    };
    let limits = Limits::default();
    let mut rng = common::rng(0x50f7);

    for _ in 0..10 {
        let game = common::random_atomic_game(&mut rng);
        let profile = common::random_profile(&mut rng, &game);
        let outcome = verify_equilibrium(&game, &profile, 2, &limits).unwrap();
        for player in 0..game.num_players() {
            let script = compile_verification_query(&game, &profile, player, &limits).unwrap();
            let run = solver.run(&script).unwrap();
            match (&outcome.per_player[player], run.answer) {
                (Verdict::Equilibrium(Certificate::Exact), SolverAnswer::Unsat) => {}
                (Verdict::NotEquilibrium(_), SolverAnswer::Sat) => {}
                (verdict, answer) => {
                    panic!("engine said {verdict:?}, solver said {answer:?}")
                }
            }
        }
    }

    let selfish = compile_existence_sentence(&common::selfish_game(), &limits).unwrap();
    assert_eq!(
        solver.run(&selfish).unwrap().answer,
        SolverAnswer::Sat,
        "atomic-goal existence sentence should be satisfiable"
    );
    let matching = compile_existence_sentence(&common::matching_game(), &limits).unwrap();
    assert_eq!(
        solver.run(&matching).unwrap().answer,
        SolverAnswer::Unsat,
        "the matching game has no equilibrium"
    );
}

/// The witness built into the matching game's candidate report shows up
/// as a model of the corresponding query, tying search, verify and
/// compile together on one concrete game.
#[test]
fn matching_game_witness_is_a_query_model() {
    let limits = Limits::default();
    let game = common::matching_game();
    let uniform = Profile::new(vec![
        MixedStrategy::new(0, [(0, rat(1, 2)), (1, rat(1, 2))]),
        MixedStrategy::new(1, [(0, rat(1, 2)), (1, rat(1, 2))]),
    ]);
    let outcome = verify_equilibrium(&game, &uniform, 2, &limits).unwrap();
    let Verdict::NotEquilibrium(witness) = &outcome.overall else {
        panic!("uniform matching profile must be refuted");
    };
    let script = compile_verification_query(&game, &uniform, witness.player, &limits).unwrap();
    let mut env = BTreeMap::new();
    for s in 0..2 {
        env.insert(
            var_name("y", witness.player, s),
            witness.new_strategy.prob(s),
        );
    }
    for assertion in &script.assertions {
        assert!(assertion.eval(&env).unwrap());
    }
    assert_eq!(witness.player, 1);
    assert_eq!(witness.improvement(), rat(1, 2));
}

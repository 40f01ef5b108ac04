//! Expectation games: Łukasiewicz games whose players pursue goals over
//! expected payoffs.
//!
//! The crate evaluates finite-valued Łukasiewicz formulas and their
//! modal extensions exactly, computes expected payoffs of mixed
//! profiles, verifies and searches for equilibria with deviation
//! witnesses, and compiles equilibrium queries to SMT-LIB for external
//! real-arithmetic solvers.

pub mod equilibrium;
pub mod error;
pub mod expectation;
pub mod formula;
pub mod game;
pub mod limits;
pub mod modal;
pub mod rational;
pub mod rcf;
pub mod scale;
pub mod syntax;
pub mod taut;
pub mod truth;

pub use equilibrium::{
    best_response_dynamics, grid_refute, pure_deviation_refute, search_equilibrium,
    verify_equilibrium, Certificate, DeviationWitness, DynamicsStep, DynamicsTrace, SearchOutcome,
    SearchReport, TerminalStatus, Verdict, VerifyOutcome,
};
pub use error::{Error, Result};
pub use expectation::{
    eval_goal, expected_payoff, validate_profile, vertex_expectations, MixedStrategy, Profile,
};
pub use formula::{Formula, Valuation};
pub use game::{Game, GameType, Strategy, StrategyCombination, Subject, Violation};
pub use limits::Limits;
pub use modal::ModalFormula;
pub use rational::Rational;
pub use scale::LkScale;
pub use syntax::{
    parse_formula, parse_game_file, parse_modal_formula, parse_profile_file, Diagnostic, Severity,
};
pub use taut::{is_tautology, tautology_counterexample};

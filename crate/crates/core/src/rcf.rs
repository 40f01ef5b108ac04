//! Real-closed-field compilation: equilibrium queries as SMT-LIB2
//! scripts, plus an optional external-solver bridge.

pub mod encode;
pub mod script;
pub mod solver;
pub mod term;

pub use encode::{
    compile_existence_sentence, compile_verification_query, encode_deviation_goal,
    encode_expectation, encode_goal, solve_divisions, var_name, DivisionConstraint, PlayerVars,
};
pub use script::SmtScript;
pub use solver::{SolverAnswer, SolverCommand, SolverRun, SOLVER_ENV};
pub use term::{BoolTerm, CmpOp, RealTerm};

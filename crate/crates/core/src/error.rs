use crate::rational::Rational;
use thiserror::Error;

/// Errors raised by evaluation, enumeration and compilation.
///
/// Structural problems in games and profiles are not errors: validation
/// returns them as data (see `validate_game` and `validate_profile`).
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),

    #[error("value {value} is not in L_{k}")]
    OutsideScale { value: Rational, k: u32 },

    #[error("value {0} is outside [0, 1]")]
    OutsideUnitInterval(Rational),

    #[error("unbound modal atom E[{0}]")]
    UnboundAtom(String),

    #[error("no player with index {0}")]
    NoSuchPlayer(usize),

    #[error("player {player} has no strategy with index {index}")]
    NoSuchStrategy { player: usize, index: usize },

    #[error("{what} needs {needed} {unit}, cap is {cap} (raise the cap to force)")]
    CapExceeded {
        what: &'static str,
        needed: u128,
        cap: u64,
        unit: &'static str,
    },

    #[error("unbound solver/term variable `{0}`")]
    UnboundTermVariable(String),

    #[error("term is quantified and cannot be evaluated pointwise")]
    QuantifiedTerm,

    #[error("solver produced no recognizable answer (first line: {0:?})")]
    SolverAnswer(String),

    #[error("solver invocation failed: {0}")]
    SolverIo(String),
}

pub type Result<T> = std::result::Result<T, Error>;

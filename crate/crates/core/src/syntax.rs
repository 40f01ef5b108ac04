//! Surface syntax: lexing, parsing and file formats.
//!
//! Formulas are written with ASCII operators (`->`, `~`, `&`, `(+)`,
//! `(-)`, `/\`, `\/`, `<->`, `d(a,b)`, and at goal level `*`, `->.`,
//! `D(a)`, `E[player]`), constants as `c{r}`. Games and strategy
//! profiles live in line-oriented text files; see [`files`].

pub mod diag;
pub mod files;
pub mod lex;
pub mod parse;

pub use diag::{Diagnostic, Severity};
pub use files::{parse_game_file, parse_profile_file};
pub use parse::{parse_formula, parse_modal_formula, parse_surface};

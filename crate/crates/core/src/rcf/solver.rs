//! Optional bridge to an external SMT solver.
//!
//! The engine never decides real-arithmetic queries itself: it writes the
//! script to a temporary file, runs a user-configured command on it, and
//! reports the first line of output verbatim. Any solver that reads
//! SMT-LIB2 from a file path and prints `sat`, `unsat` or `unknown`
//! works, e.g. `z3` or `cvc5`.

use std::io::Write;
use std::process::Command;

use crate::error::{Error, Result};
use crate::rcf::script::SmtScript;

/// The environment variable consulted by [`SolverCommand::from_env`].
pub const SOLVER_ENV: &str = "EXG_SOLVER";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolverAnswer {
    Sat,
    Unsat,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolverRun {
    pub answer: SolverAnswer,
    /// The first non-empty output line, exactly as the solver printed it.
    pub first_line: String,
}

/// A command template for invoking a solver on a script file. A `{}`
/// placeholder is replaced by the file path; without one the path is
/// appended as a final argument. The command runs through the shell, so
/// templates may carry flags: `"z3 -T:60 {}"`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolverCommand {
    template: String,
}

impl SolverCommand {
    pub fn new(template: impl Into<String>) -> Self {
        SolverCommand {
            template: template.into(),
        }
    }

    /// The command configured in `EXG_SOLVER`, if any.
    pub fn from_env() -> Option<Self> {
        match std::env::var(SOLVER_ENV) {
            Ok(t) if !t.trim().is_empty() => Some(SolverCommand::new(t)),
            _ => None,
        }
    }

    pub fn template(&self) -> &str {
        &self.template
    }

    fn command_line(&self, path: &str) -> String {
        if self.template.contains("{}") {
            self.template.replace("{}", path)
        } else {
            format!("{} {}", self.template, path)
        }
    }

    /// Writes the script to a temporary file, runs the command, and parses
    /// the answer from the first non-empty output line.
    pub fn run(&self, script: &SmtScript) -> Result<SolverRun> {
        let mut file = tempfile::Builder::new()
            .prefix("exg-query-")
            .suffix(".smt2")
            .tempfile()
            .map_err(|e| Error::SolverIo(e.to_string()))?;
        file.write_all(script.render().as_bytes())
            .map_err(|e| Error::SolverIo(e.to_string()))?;
        file.flush().map_err(|e| Error::SolverIo(e.to_string()))?;
        let path = file.path().to_string_lossy().into_owned();

        let output = Command::new("sh")
            .arg("-c")
            .arg(self.command_line(&path))
            .output()
            .map_err(|e| Error::SolverIo(e.to_string()))?;
        let stdout = String::from_utf8_lossy(&output.stdout);
        let first_line = stdout
            .lines()
            .map(str::trim)
            .find(|l| !l.is_empty())
            .unwrap_or("")
            .to_string();
        let answer = match first_line.as_str() {
            "sat" => SolverAnswer::Sat,
            "unsat" => SolverAnswer::Unsat,
            "unknown" => SolverAnswer::Unknown,
            _ => return Err(Error::SolverAnswer(first_line)),
        };
        Ok(SolverRun { answer, first_line })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rcf::term::{BoolTerm, CmpOp, RealTerm};

    fn trivial_script() -> SmtScript {
        let mut script = SmtScript::new("QF_NRA");
        script.declare("x");
        script.assert(BoolTerm::cmp(
            CmpOp::Ge,
            RealTerm::var("x"),
            RealTerm::int(0),
        ));
        script
    }

    #[test]
    fn answers_are_parsed_from_first_line() {
        // fake solvers standing in for the real thing
        let sat = SolverCommand::new("printf 'sat\\n' ; true ignore");
        assert_eq!(
            sat.run(&trivial_script()).unwrap().answer,
            SolverAnswer::Sat
        );

        let unsat = SolverCommand::new("printf '\\nunsat\\n'; true");
        let run = unsat.run(&trivial_script()).unwrap();
        assert_eq!(run.answer, SolverAnswer::Unsat);
        assert_eq!(run.first_line, "unsat");

        let unknown = SolverCommand::new("echo unknown #");
        assert_eq!(
            unknown.run(&trivial_script()).unwrap().answer,
            SolverAnswer::Unknown
        );
    }

    #[test]
    fn unrecognized_output_is_an_error() {
        let noisy = SolverCommand::new("echo parse error at line 1 #");
        match noisy.run(&trivial_script()) {
            Err(Error::SolverAnswer(line)) => assert!(line.contains("parse error")),
            other => panic!("expected a solver answer error, got {other:?}"),
        }
    }

    #[test]
    fn placeholder_substitution() {
        // `cat {}` prints the script itself: first line is (set-logic ...),
        // which is not a recognized answer.
        let cat = SolverCommand::new("cat {}");
        match cat.run(&trivial_script()) {
            Err(Error::SolverAnswer(line)) => assert!(line.starts_with("(set-logic")),
            other => panic!("expected a solver answer error, got {other:?}"),
        }
        // without a placeholder the path is appended
        assert_eq!(
            SolverCommand::new("z3 -T:60").command_line("/tmp/q.smt2"),
            "z3 -T:60 /tmp/q.smt2"
        );
    }
}

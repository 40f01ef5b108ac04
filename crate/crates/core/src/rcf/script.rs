//! A complete SMT-LIB2 script: logic, declarations, assertions, check.

use std::fmt;

use super::term::BoolTerm;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmtScript {
    pub logic: &'static str,
    pub declarations: Vec<String>,
    pub assertions: Vec<BoolTerm>,
}

impl SmtScript {
    pub fn new(logic: &'static str) -> Self {
        SmtScript {
            logic,
            declarations: Vec::new(),
            assertions: Vec::new(),
        }
    }

    pub fn declare(&mut self, name: impl Into<String>) {
        self.declarations.push(name.into());
    }

    pub fn assert(&mut self, term: BoolTerm) {
        self.assertions.push(term);
    }

    /// SMT-LIB2 text, one command per line, ending in `(check-sat)`.
    /// Byte-for-byte deterministic for a fixed script.
    pub fn render(&self) -> String {
        let mut out = format!("(set-logic {})\n", self.logic);
        for name in &self.declarations {
            out.push_str(&format!("(declare-const {name} Real)\n"));
        }
        for assertion in &self.assertions {
            out.push_str(&format!("(assert {})\n", assertion.render()));
        }
        out.push_str("(check-sat)\n");
        out
    }
}

impl fmt::Display for SmtScript {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rcf::term::{CmpOp, RealTerm};

    #[test]
    fn renders_commands_in_order() {
        let mut script = SmtScript::new("QF_NRA");
        script.declare("y_1_0");
        script.declare("y_1_1");
        script.assert(BoolTerm::cmp(
            CmpOp::Ge,
            RealTerm::var("y_1_0"),
            RealTerm::int(0),
        ));
        assert_eq!(
            script.render(),
            "(set-logic QF_NRA)\n\
             (declare-const y_1_0 Real)\n\
             (declare-const y_1_1 Real)\n\
             (assert (>= y_1_0 0))\n\
             (check-sat)\n"
        );
    }
}

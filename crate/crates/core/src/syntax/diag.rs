//! Parse and validation diagnostics with byte-span locations.

use std::fmt;
use std::ops::Range;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub severity: Severity,
    pub span: Range<usize>,
    pub message: String,
}

impl Diagnostic {
    pub fn error(span: Range<usize>, message: impl Into<String>) -> Self {
        Diagnostic {
            severity: Severity::Error,
            span,
            message: message.into(),
        }
    }

    /// The same diagnostic with its span shifted into an enclosing source
    /// (used when a formula is parsed out of a larger file).
    pub fn offset(mut self, base: usize) -> Self {
        self.span = self.span.start + base..self.span.end + base;
        self
    }

    /// Human-readable rendering against the source text: message with
    /// line and column, the offending line, and a caret marker.
    pub fn render(&self, source: &str) -> String {
        let start = self.span.start.min(source.len());
        let line_start = source[..start].rfind('\n').map(|i| i + 1).unwrap_or(0);
        let line_end = source[start..]
            .find('\n')
            .map(|i| start + i)
            .unwrap_or(source.len());
        let line_no = source[..line_start].matches('\n').count() + 1;
        let column = source[line_start..start].chars().count() + 1;
        let line = &source[line_start..line_end];
        let severity = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        let caret_len = self.span.end.min(line_end).saturating_sub(start).max(1);
        format!(
            "{severity}: {} (line {line_no}, column {column})\n  {line}\n  {}{}",
            self.message,
            " ".repeat(column - 1),
            "^".repeat(caret_len)
        )
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} at bytes {}..{}",
            match self.severity {
                Severity::Error => "error",
                Severity::Warning => "warning",
            },
            self.message,
            self.span.start,
            self.span.end
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn render_points_at_the_span() {
        let source = "k: 1\nplayer P1 controls\n";
        let d = Diagnostic::error(12..14, "expected variable list");
        let rendered = d.render(source);
        assert_eq!(
            rendered,
            "error: expected variable list (line 2, column 8)\n  player P1 controls\n         ^^"
        );
    }

    #[test]
    fn render_survives_spans_at_end_of_input() {
        let source = "p ->";
        let d = Diagnostic::error(4..4, "expected a formula");
        let rendered = d.render(source);
        assert!(rendered.contains("line 1, column 5"));
    }
}

//! Tokenizer for the formula surface syntax.

use std::ops::Range;

use crate::rational::{parse_rational, Rational};
use crate::syntax::diag::Diagnostic;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Token {
    /// A bare identifier: a propositional variable or the name of a
    /// function-style operator (`d`, `D`).
    Ident(String),
    /// A rational constant written `c{r}`.
    Constant(Rational),
    /// An expectation atom written `E[name]`; carries the player name.
    Expectation(String),
    Implies,
    TruncDiv,
    Iff,
    MaxDisj,
    MinConj,
    StrongDisj,
    TruncSub,
    StrongConj,
    Product,
    Neg,
    LParen,
    RParen,
    Comma,
}

impl Token {
    pub fn describe(&self) -> String {
        match self {
            Token::Ident(name) => format!("identifier `{name}`"),
            Token::Constant(_) => "constant".to_string(),
            Token::Expectation(name) => format!("expectation `E[{name}]`"),
            Token::Implies => "`->`".to_string(),
            Token::TruncDiv => "`->.`".to_string(),
            Token::Iff => "`<->`".to_string(),
            Token::MaxDisj => "`\\/`".to_string(),
            Token::MinConj => "`/\\`".to_string(),
            Token::StrongDisj => "`(+)`".to_string(),
            Token::TruncSub => "`(-)`".to_string(),
            Token::StrongConj => "`&`".to_string(),
            Token::Product => "`*`".to_string(),
            Token::Neg => "`~`".to_string(),
            Token::LParen => "`(`".to_string(),
            Token::RParen => "`)`".to_string(),
            Token::Comma => "`,`".to_string(),
        }
    }
}

fn is_ident_start(c: u8) -> bool {
    c.is_ascii_alphabetic() || c == b'_'
}

fn is_ident_continue(c: u8) -> bool {
    c.is_ascii_alphanumeric() || c == b'_'
}

/// Splits the text into tokens with byte-range spans. Stops at the first
/// lexical error.
pub fn lex(text: &str) -> Result<Vec<(Token, Range<usize>)>, Diagnostic> {
    let bytes = text.as_bytes();
    let mut tokens = Vec::new();
    let mut pos = 0;
    while pos < bytes.len() {
        let c = bytes[pos];
        if c.is_ascii_whitespace() {
            pos += 1;
            continue;
        }
        let rest = &text[pos..];
        let (token, len) = if rest.starts_with("->.") {
            (Token::TruncDiv, 3)
        } else if rest.starts_with("->") {
            (Token::Implies, 2)
        } else if rest.starts_with("<->") {
            (Token::Iff, 3)
        } else if rest.starts_with("\\/") {
            (Token::MaxDisj, 2)
        } else if rest.starts_with("/\\") {
            (Token::MinConj, 2)
        } else if rest.starts_with("(+)") {
            (Token::StrongDisj, 3)
        } else if rest.starts_with("(-)") {
            (Token::TruncSub, 3)
        } else if c == b'&' {
            (Token::StrongConj, 1)
        } else if c == b'*' {
            (Token::Product, 1)
        } else if c == b'~' {
            (Token::Neg, 1)
        } else if c == b'(' {
            (Token::LParen, 1)
        } else if c == b')' {
            (Token::RParen, 1)
        } else if c == b',' {
            (Token::Comma, 1)
        } else if c == b'c' && bytes.get(pos + 1) == Some(&b'{') {
            let (token, len) = lex_constant(text, pos)?;
            (token, len)
        } else if c == b'E' && bytes.get(pos + 1) == Some(&b'[') {
            let (token, len) = lex_expectation(text, pos)?;
            (token, len)
        } else if is_ident_start(c) {
            let mut end = pos + 1;
            while end < bytes.len() && is_ident_continue(bytes[end]) {
                end += 1;
            }
            (Token::Ident(text[pos..end].to_string()), end - pos)
        } else if c.is_ascii_digit() {
            return Err(Diagnostic::error(
                pos..pos + 1,
                "bare numbers are not formulas; write constants as c{r}",
            ));
        } else {
            return Err(Diagnostic::error(
                pos..pos + 1,
                format!("unexpected character `{}`", rest.chars().next().unwrap()),
            ));
        };
        tokens.push((token, pos..pos + len));
        pos += len;
    }
    Ok(tokens)
}

fn lex_constant(text: &str, start: usize) -> Result<(Token, usize), Diagnostic> {
    let body_start = start + 2;
    let close = text[body_start..].find('}').map(|i| body_start + i);
    let Some(close) = close else {
        return Err(Diagnostic::error(
            start..body_start,
            "unterminated constant; expected `}`",
        ));
    };
    let body = &text[body_start..close];
    match parse_rational(body) {
        Some(r) => Ok((Token::Constant(r), close + 1 - start)),
        None => Err(Diagnostic::error(
            body_start..close,
            format!("`{body}` is not a rational number"),
        )),
    }
}

fn lex_expectation(text: &str, start: usize) -> Result<(Token, usize), Diagnostic> {
    let bytes = text.as_bytes();
    let mut pos = start + 2;
    while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
        pos += 1;
    }
    if pos < bytes.len() && bytes[pos] == b'E' && bytes.get(pos + 1) == Some(&b'[') {
        return Err(Diagnostic::error(
            pos..pos + 2,
            "expectations cannot be nested; goals apply one E[..] per payoff",
        ));
    }
    if pos >= bytes.len() || !is_ident_start(bytes[pos]) {
        return Err(Diagnostic::error(
            start..(pos + 1).min(text.len()),
            "expected a player name inside E[..]",
        ));
    }
    let name_start = pos;
    while pos < bytes.len() && is_ident_continue(bytes[pos]) {
        pos += 1;
    }
    let name = text[name_start..pos].to_string();
    while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
        pos += 1;
    }
    if bytes.get(pos) == Some(&b'[') {
        return Err(Diagnostic::error(
            name_start..pos + 1,
            "expectations cannot be nested; goals apply one E[..] per payoff",
        ));
    }
    if bytes.get(pos) != Some(&b']') {
        return Err(Diagnostic::error(
            start..pos.min(text.len()),
            "unterminated expectation; expected `]`",
        ));
    }
    Ok((Token::Expectation(name), pos + 1 - start))
}

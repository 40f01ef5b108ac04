//! Recursive-descent parser for the formula surface syntax, with
//! lowerings into payoff formulas and goal formulas.
//!
//! Precedence, loosest to tightest: `->`, `->.`, `<->`, `\/`, `/\`,
//! `(+)` and `(-)`, `&`, `*`, then unary `~` and `D`. Every binary
//! operator associates to the right. `d(a,b)` and `D(a)` parse as
//! function-style applications.

use std::ops::Range;

use crate::formula::Formula;
use crate::modal::ModalFormula;
use crate::rational::Rational;
use crate::syntax::diag::Diagnostic;
use crate::syntax::lex::{lex, Token};

#[derive(Debug, Clone, PartialEq)]
pub struct Surface {
    pub node: Node,
    pub span: Range<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Var(String),
    Const(Rational),
    Expect(String),
    Not(Box<Surface>),
    Delta(Box<Surface>),
    Distance(Box<Surface>, Box<Surface>),
    Bin(BinOp, Range<usize>, Box<Surface>, Box<Surface>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Implies,
    TruncDiv,
    Iff,
    MaxDisj,
    MinConj,
    StrongDisj,
    TruncSub,
    StrongConj,
    Product,
}

const TIGHTEST: u8 = 8;

struct Parser<'a> {
    tokens: &'a [(Token, Range<usize>)],
    pos: usize,
    text_len: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(t, _)| t)
    }

    fn here(&self) -> Range<usize> {
        self.tokens
            .get(self.pos)
            .map(|(_, s)| s.clone())
            .unwrap_or(self.text_len..self.text_len)
    }

    fn bump(&mut self) -> Range<usize> {
        let span = self.here();
        self.pos += 1;
        span
    }

    fn expect(&mut self, token: Token) -> Result<Range<usize>, Diagnostic> {
        if self.peek() == Some(&token) {
            Ok(self.bump())
        } else {
            let found = match self.peek() {
                Some(t) => format!("found {}", t.describe()),
                None => "reached the end of input".to_string(),
            };
            Err(Diagnostic::error(
                self.here(),
                format!("expected {}, {found}", token.describe()),
            ))
        }
    }

    fn binary(&mut self, level: u8) -> Result<Surface, Diagnostic> {
        if level > TIGHTEST {
            return self.unary();
        }
        let left = self.binary(level + 1)?;
        let op = match (level, self.peek()) {
            (1, Some(Token::Implies)) => BinOp::Implies,
            (2, Some(Token::TruncDiv)) => BinOp::TruncDiv,
            (3, Some(Token::Iff)) => BinOp::Iff,
            (4, Some(Token::MaxDisj)) => BinOp::MaxDisj,
            (5, Some(Token::MinConj)) => BinOp::MinConj,
            (6, Some(Token::StrongDisj)) => BinOp::StrongDisj,
            (6, Some(Token::TruncSub)) => BinOp::TruncSub,
            (7, Some(Token::StrongConj)) => BinOp::StrongConj,
            (8, Some(Token::Product)) => BinOp::Product,
            _ => return Ok(left),
        };
        let op_span = self.bump();
        let right = self.binary(level)?;
        let span = left.span.start..right.span.end;
        Ok(Surface {
            node: Node::Bin(op, op_span, Box::new(left), Box::new(right)),
            span,
        })
    }

    fn unary(&mut self) -> Result<Surface, Diagnostic> {
        match self.peek() {
            Some(Token::Neg) => {
                let start = self.bump().start;
                let child = self.unary()?;
                let span = start..child.span.end;
                Ok(Surface {
                    node: Node::Not(Box::new(child)),
                    span,
                })
            }
            Some(Token::Ident(name)) if name == "D" && self.next_is_lparen() => {
                let start = self.bump().start;
                self.expect(Token::LParen)?;
                let arg = self.binary(1)?;
                let end = self.expect(Token::RParen)?.end;
                Ok(Surface {
                    node: Node::Delta(Box::new(arg)),
                    span: start..end,
                })
            }
            Some(Token::Ident(name)) if name == "d" && self.next_is_lparen() => {
                let start = self.bump().start;
                self.expect(Token::LParen)?;
                let left = self.binary(1)?;
                self.expect(Token::Comma)?;
                let right = self.binary(1)?;
                let end = self.expect(Token::RParen)?.end;
                Ok(Surface {
                    node: Node::Distance(Box::new(left), Box::new(right)),
                    span: start..end,
                })
            }
            _ => self.primary(),
        }
    }

    fn next_is_lparen(&self) -> bool {
        matches!(self.tokens.get(self.pos + 1), Some((Token::LParen, _)))
    }

    fn primary(&mut self) -> Result<Surface, Diagnostic> {
        match self.peek().cloned() {
            Some(Token::Ident(name)) => {
                let span = self.bump();
                Ok(Surface {
                    node: Node::Var(name),
                    span,
                })
            }
            Some(Token::Constant(r)) => {
                let span = self.bump();
                Ok(Surface {
                    node: Node::Const(r),
                    span,
                })
            }
            Some(Token::Expectation(name)) => {
                let span = self.bump();
                Ok(Surface {
                    node: Node::Expect(name),
                    span,
                })
            }
            Some(Token::LParen) => {
                let start = self.bump().start;
                let inner = self.binary(1)?;
                let end = self.expect(Token::RParen)?.end;
                Ok(Surface {
                    node: inner.node,
                    span: start..end,
                })
            }
            Some(other) => Err(Diagnostic::error(
                self.here(),
                format!("expected a formula, found {}", other.describe()),
            )),
            None => Err(Diagnostic::error(self.here(), "expected a formula")),
        }
    }
}

/// Parses the whole text as one surface expression.
pub fn parse_surface(text: &str) -> Result<Surface, Diagnostic> {
    let tokens = lex(text)?;
    let mut parser = Parser {
        tokens: &tokens,
        pos: 0,
        text_len: text.len(),
    };
    let surface = parser.binary(1)?;
    if let Some((token, span)) = tokens.get(parser.pos) {
        return Err(Diagnostic::error(
            span.clone(),
            format!("unexpected {} after the formula", token.describe()),
        ));
    }
    Ok(surface)
}

/// Parses a payoff formula. Goal-only constructs (expectations, `*`,
/// `->.`, `D`) are reported with targeted diagnostics.
pub fn parse_formula(text: &str) -> Result<Formula, Vec<Diagnostic>> {
    let surface = parse_surface(text).map_err(|d| vec![d])?;
    let mut diags = Vec::new();
    match lower_formula(&surface, &mut diags) {
        Some(formula) if diags.is_empty() => Ok(formula),
        _ => Err(diags),
    }
}

/// Parses a goal formula over the given player names. Bare variables
/// are rejected: goals talk about expectations, not game variables.
pub fn parse_modal_formula(
    text: &str,
    players: &[String],
) -> Result<ModalFormula, Vec<Diagnostic>> {
    let surface = parse_surface(text).map_err(|d| vec![d])?;
    let mut diags = Vec::new();
    match lower_modal(&surface, players, &mut diags) {
        Some(goal) if diags.is_empty() => Ok(goal),
        _ => Err(diags),
    }
}

fn lower_formula(surface: &Surface, diags: &mut Vec<Diagnostic>) -> Option<Formula> {
    match &surface.node {
        Node::Var(name) => Some(Formula::var(name)),
        Node::Const(r) => Some(Formula::constant(r.clone())),
        Node::Expect(name) => {
            diags.push(Diagnostic::error(
                surface.span.clone(),
                format!("E[{name}] is a goal construct; payoff formulas use variables"),
            ));
            None
        }
        Node::Not(a) => Some(Formula::not(lower_formula(a, diags)?)),
        Node::Delta(a) => {
            lower_formula(a, diags);
            diags.push(Diagnostic::error(
                surface.span.clone(),
                "the D(..) operator is a goal construct and cannot appear in payoffs",
            ));
            None
        }
        Node::Distance(a, b) => {
            let left = lower_formula(a, diags);
            let right = lower_formula(b, diags);
            Some(Formula::distance(left?, right?))
        }
        Node::Bin(op, op_span, a, b) => {
            let left = lower_formula(a, diags);
            let right = lower_formula(b, diags);
            let build = match op {
                BinOp::Implies => Formula::implies,
                BinOp::Iff => Formula::iff,
                BinOp::MaxDisj => Formula::max_disj,
                BinOp::MinConj => Formula::min_conj,
                BinOp::StrongDisj => Formula::strong_disj,
                BinOp::TruncSub => Formula::trunc_sub,
                BinOp::StrongConj => Formula::strong_conj,
                BinOp::TruncDiv => {
                    diags.push(Diagnostic::error(
                        op_span.clone(),
                        "`->.` is a goal construct and cannot appear in payoffs",
                    ));
                    return None;
                }
                BinOp::Product => {
                    diags.push(Diagnostic::error(
                        op_span.clone(),
                        "`*` is a goal construct and cannot appear in payoffs",
                    ));
                    return None;
                }
            };
            Some(build(left?, right?))
        }
    }
}

fn lower_modal(
    surface: &Surface,
    players: &[String],
    diags: &mut Vec<Diagnostic>,
) -> Option<ModalFormula> {
    match &surface.node {
        Node::Var(name) => {
            diags.push(Diagnostic::error(
                surface.span.clone(),
                format!("`{name}` is not a goal term; goals refer to payoffs as E[player]"),
            ));
            None
        }
        Node::Const(r) => Some(ModalFormula::constant(r.clone())),
        Node::Expect(name) => match players.iter().position(|p| p == name) {
            Some(index) => Some(ModalFormula::atom(index)),
            None => {
                diags.push(Diagnostic::error(
                    surface.span.clone(),
                    format!("unknown player `{name}`"),
                ));
                None
            }
        },
        Node::Not(a) => Some(ModalFormula::not(lower_modal(a, players, diags)?)),
        Node::Delta(a) => Some(ModalFormula::delta(lower_modal(a, players, diags)?)),
        Node::Distance(a, b) => {
            let left = lower_modal(a, players, diags);
            let right = lower_modal(b, players, diags);
            Some(ModalFormula::distance(left?, right?))
        }
        Node::Bin(op, _, a, b) => {
            let left = lower_modal(a, players, diags);
            let right = lower_modal(b, players, diags);
            let build = match op {
                BinOp::Implies => ModalFormula::implies,
                BinOp::TruncDiv => ModalFormula::trunc_div,
                BinOp::Iff => ModalFormula::iff,
                BinOp::MaxDisj => ModalFormula::max_disj,
                BinOp::MinConj => ModalFormula::min_conj,
                BinOp::StrongDisj => ModalFormula::strong_disj,
                BinOp::TruncSub => ModalFormula::trunc_sub,
                BinOp::StrongConj => ModalFormula::strong_conj,
                BinOp::Product => ModalFormula::product,
            };
            Some(build(left?, right?))
        }
    }
}

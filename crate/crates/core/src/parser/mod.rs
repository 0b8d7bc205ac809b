//! Polynomial expressions and planar-system definition files.
//!
//! Expression grammar (see `docs/grammar.md` for the full description):
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := primary ('^' unary)?
//! primary := INTEGER | IDENT | '(' expr ')'
//! ```
//!
//! Multiplication is always explicit. Divisors and exponents must be free of variables;
//! exponents must evaluate to non-negative integers.

mod lexer;
pub mod system_file;

use std::fmt;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::algebra::{Poly2, Rational, Vars};
use lexer::{tokenize, Tok, Token};

pub use system_file::{parse_system, parse_system_file, SystemSource};

/// Largest exponent accepted after `^`.
pub const MAX_EXPONENT: u32 = 64;
/// Largest total degree an expression may expand to.
pub const MAX_DEGREE: i64 = 128;
/// Maximum nesting of parentheses and unary minus.
pub const MAX_DEPTH: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DiagnosticKind {
    Lex,
    Syntax,
    Semantic,
}

/// Error located at a byte offset of the parsed text.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ParseDiagnostic {
    pub byte_offset: usize,
    pub message: String,
    pub kind: DiagnosticKind,
    /// Which part of a system definition failed (`dx`, `dy`, `vars`, ...), if any.
    pub component: Option<String>,
}

impl ParseDiagnostic {
    pub fn new(byte_offset: usize, kind: DiagnosticKind, message: impl Into<String>) -> Self {
        ParseDiagnostic { byte_offset, message: message.into(), kind, component: None }
    }

    pub fn in_component(mut self, component: &str) -> Self {
        self.component = Some(component.to_string());
        self
    }

    pub fn shifted(mut self, by: usize) -> Self {
        self.byte_offset += by;
        self
    }
}

impl fmt::Display for ParseDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            DiagnosticKind::Lex => "lex",
            DiagnosticKind::Syntax => "syntax",
            DiagnosticKind::Semantic => "semantic",
        };
        match &self.component {
            Some(c) => write!(f, "{kind} error in {c} at byte {}: {}", self.byte_offset, self.message),
            None => write!(f, "{kind} error at byte {}: {}", self.byte_offset, self.message),
        }
    }
}

impl std::error::Error for ParseDiagnostic {}

/// Parses an expression over the two declared variables into its expanded canonical form.
pub fn parse_polynomial(text: &str, vars: &Vars) -> Result<Poly2, ParseDiagnostic> {
    let tokens = tokenize(text)?;
    let mut p = Parser { tokens, pos: 0, vars, len: text.len(), depth: 0 };
    if p.tokens.is_empty() {
        return Err(ParseDiagnostic::new(0, DiagnosticKind::Syntax, "empty expression"));
    }
    let value = p.expr()?;
    if let Some(t) = p.peek() {
        return Err(ParseDiagnostic::new(
            t.offset,
            DiagnosticKind::Syntax,
            match t.tok {
                Tok::RParen => "unbalanced `)`".to_string(),
                Tok::Ident(_) | Tok::Int(_) | Tok::LParen => {
                    "expected an operator (multiplication must be written with `*`)".to_string()
                }
                _ => "unexpected token".to_string(),
            },
        ));
    }
    Ok(value)
}

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    vars: &'a Vars,
    len: usize,
    depth: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn offset(&self) -> usize {
        self.peek().map(|t| t.offset).unwrap_or(self.len)
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek().is_some_and(|t| &t.tok == tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn enter(&mut self) -> Result<(), ParseDiagnostic> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(ParseDiagnostic::new(
                self.offset(),
                DiagnosticKind::Syntax,
                format!("expression nested deeper than {MAX_DEPTH} levels"),
            ));
        }
        Ok(())
    }

    fn expr(&mut self) -> Result<Poly2, ParseDiagnostic> {
        let mut acc = self.term()?;
        loop {
            if self.eat(&Tok::Plus) {
                let rhs = self.term()?;
                acc = acc.try_add(&rhs).expect("shared variables");
            } else if self.eat(&Tok::Minus) {
                let rhs = self.term()?;
                acc = acc.try_sub(&rhs).expect("shared variables");
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Poly2, ParseDiagnostic> {
        let mut acc = self.unary()?;
        loop {
            if self.eat(&Tok::Star) {
                let at = self.offset();
                let rhs = self.unary()?;
                if acc.degree() + rhs.degree() > MAX_DEGREE {
                    return Err(ParseDiagnostic::new(
                        at,
                        DiagnosticKind::Semantic,
                        format!("product exceeds the maximum total degree {MAX_DEGREE}"),
                    ));
                }
                acc = acc.try_mul(&rhs).expect("shared variables");
            } else if self.eat(&Tok::Slash) {
                let at = self.offset();
                let rhs = self.unary()?;
                let Some(c) = rhs.as_constant() else {
                    return Err(ParseDiagnostic::new(
                        at,
                        DiagnosticKind::Semantic,
                        "division is only allowed by a numeric constant",
                    ));
                };
                if c.is_zero() {
                    return Err(ParseDiagnostic::new(at, DiagnosticKind::Semantic, "division by zero"));
                }
                acc = acc.scale(&(Rational::from_integer(1.into()) / c));
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Poly2, ParseDiagnostic> {
        if self.eat(&Tok::Minus) {
            self.enter()?;
            let v = self.unary()?;
            self.depth -= 1;
            return Ok(v.neg());
        }
        self.power()
    }

    fn power(&mut self) -> Result<Poly2, ParseDiagnostic> {
        let base = self.primary()?;
        if !self.eat(&Tok::Caret) {
            return Ok(base);
        }
        let at = self.offset();
        self.enter()?;
        let exp = self.unary()?;
        self.depth -= 1;
        let e = exponent_value(&exp).map_err(|msg| ParseDiagnostic::new(at, DiagnosticKind::Semantic, msg))?;
        if base.degree().max(0) * e as i64 > MAX_DEGREE {
            return Err(ParseDiagnostic::new(
                at,
                DiagnosticKind::Semantic,
                format!("power exceeds the maximum total degree {MAX_DEGREE}"),
            ));
        }
        Ok(base.pow(e))
    }

    fn primary(&mut self) -> Result<Poly2, ParseDiagnostic> {
        let Some(tok) = self.peek().cloned() else {
            return Err(ParseDiagnostic::new(self.len, DiagnosticKind::Syntax, "unexpected end of input"));
        };
        self.pos += 1;
        match tok.tok {
            Tok::Int(n) => Ok(Poly2::constant(Rational::from_integer(n), self.vars.clone())),
            Tok::Ident(name) => Poly2::var(&name, self.vars.clone()).map_err(|_| {
                ParseDiagnostic::new(
                    tok.offset,
                    DiagnosticKind::Semantic,
                    format!("unknown identifier `{name}` (declared variables: {}, {})", self.vars.0, self.vars.1),
                )
            }),
            Tok::LParen => {
                self.enter()?;
                let inner = self.expr()?;
                self.depth -= 1;
                if !self.eat(&Tok::RParen) {
                    return Err(ParseDiagnostic::new(
                        self.offset(),
                        DiagnosticKind::Syntax,
                        format!("unbalanced `(` opened at byte {}", tok.offset),
                    ));
                }
                Ok(inner)
            }
            Tok::RParen => Err(ParseDiagnostic::new(tok.offset, DiagnosticKind::Syntax, "unbalanced `)`")),
            _ => Err(ParseDiagnostic::new(tok.offset, DiagnosticKind::Syntax, "expected a number, variable or `(`")),
        }
    }
}

fn exponent_value(p: &Poly2) -> Result<u32, String> {
    let c = p
        .as_constant()
        .ok_or_else(|| "exponent must not contain variables".to_string())?;
    if !c.is_integer() {
        return Err(format!("exponent must be an integer, got {c}"));
    }
    let n: &BigInt = c.numer();
    if n.sign() == num_bigint::Sign::Minus {
        return Err(format!("exponent must be non-negative, got {n}"));
    }
    match n.to_u32() {
        Some(e) if e <= MAX_EXPONENT => Ok(e),
        _ => Err(format!("exponent larger than {MAX_EXPONENT}")),
    }
}

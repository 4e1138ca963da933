//! Text form of polynomials: a rigid expression grammar and the canonical
//! printer used by the CLI and golden files.
//!
//! Grammar: integer literals, variable names `[a-z][a-z0-9_]*`, operators
//! `+ - * ^`, parentheses, unary minus. Precedence is `^` above unary `-`
//! above `*` above binary `+ -`; `^` is non-associative and takes a
//! nonnegative integer literal on the right. Multiplication is always
//! explicit.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed};

use crate::poly::{Poly, VarContext};

/// A parse failure, carrying the byte offset it occurred at.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub position: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    UnexpectedChar(char),
    UnexpectedToken(String),
    UnexpectedEnd,
    UnknownVariable(String),
    BadExponent,
    ChainedExponent,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ParseErrorKind::UnexpectedChar(c) => {
                write!(f, "lexical error at position {}: bad character {:?}", self.position, c)
            }
            ParseErrorKind::UnexpectedToken(t) => {
                write!(f, "syntax error at position {}: unexpected {:?}", self.position, t)
            }
            ParseErrorKind::UnexpectedEnd => {
                write!(f, "syntax error at position {}: unexpected end of input", self.position)
            }
            ParseErrorKind::UnknownVariable(v) => {
                write!(f, "unknown variable {:?} at position {}", v, self.position)
            }
            ParseErrorKind::BadExponent => {
                write!(
                    f,
                    "syntax error at position {}: exponent must be a nonnegative integer literal",
                    self.position
                )
            }
            ParseErrorKind::ChainedExponent => {
                write!(
                    f,
                    "syntax error at position {}: '^' is non-associative, parenthesize the base",
                    self.position
                )
            }
        }
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq, Eq)]
enum TokenKind {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

#[derive(Debug, Clone)]
struct Token {
    kind: TokenKind,
    pos: usize,
}

fn lex(src: &str) -> Result<Vec<Token>, ParseError> {
    let bytes = src.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        match b {
            b' ' | b'\t' | b'\n' | b'\r' => i += 1,
            b'+' => { tokens.push(Token { kind: TokenKind::Plus, pos: i }); i += 1; }
            b'-' => { tokens.push(Token { kind: TokenKind::Minus, pos: i }); i += 1; }
            b'*' => { tokens.push(Token { kind: TokenKind::Star, pos: i }); i += 1; }
            b'^' => { tokens.push(Token { kind: TokenKind::Caret, pos: i }); i += 1; }
            b'(' => { tokens.push(Token { kind: TokenKind::LParen, pos: i }); i += 1; }
            b')' => { tokens.push(Token { kind: TokenKind::RParen, pos: i }); i += 1; }
            b'0'..=b'9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let value = BigInt::parse_bytes(&bytes[start..i], 10)
                    .expect("digit run parses as an integer");
                tokens.push(Token { kind: TokenKind::Int(value), pos: start });
            }
            b'a'..=b'z' => {
                let start = i;
                while i < bytes.len()
                    && (bytes[i].is_ascii_lowercase()
                        || bytes[i].is_ascii_digit()
                        || bytes[i] == b'_')
                {
                    i += 1;
                }
                let name = src[start..i].to_string();
                tokens.push(Token { kind: TokenKind::Ident(name), pos: start });
            }
            _ => {
                return Err(ParseError {
                    position: i,
                    kind: ParseErrorKind::UnexpectedChar(src[i..].chars().next().unwrap()),
                })
            }
        }
    }
    Ok(tokens)
}

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    ctx: &'a VarContext,
    src_len: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn bump(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn err_here(&self, kind: ParseErrorKind) -> ParseError {
        let position = self.peek().map(|t| t.pos).unwrap_or(self.src_len);
        ParseError { position, kind }
    }

    fn unexpected(&self) -> ParseError {
        match self.peek() {
            Some(t) => ParseError {
                position: t.pos,
                kind: ParseErrorKind::UnexpectedToken(token_text(&t.kind)),
            },
            None => ParseError {
                position: self.src_len,
                kind: ParseErrorKind::UnexpectedEnd,
            },
        }
    }

    fn expression(&mut self) -> Result<Poly, ParseError> {
        let mut acc = self.term()?;
        while let Some(t) = self.peek() {
            match t.kind {
                TokenKind::Plus => {
                    self.bump();
                    acc = &acc + &self.term()?;
                }
                TokenKind::Minus => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Poly, ParseError> {
        let mut acc = self.unary()?;
        while matches!(self.peek().map(|t| &t.kind), Some(TokenKind::Star)) {
            self.bump();
            acc = &acc * &self.unary()?;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Poly, ParseError> {
        if matches!(self.peek().map(|t| &t.kind), Some(TokenKind::Minus)) {
            self.bump();
            Ok(-&self.unary()?)
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<Poly, ParseError> {
        let base = self.atom()?;
        if !matches!(self.peek().map(|t| &t.kind), Some(TokenKind::Caret)) {
            return Ok(base);
        }
        self.bump();
        let exp_token = self.bump().ok_or_else(|| ParseError {
            position: self.src_len,
            kind: ParseErrorKind::BadExponent,
        })?;
        let exponent = match exp_token.kind {
            TokenKind::Int(v) => u32::try_from(&v).map_err(|_| ParseError {
                position: exp_token.pos,
                kind: ParseErrorKind::BadExponent,
            })?,
            _ => {
                return Err(ParseError {
                    position: exp_token.pos,
                    kind: ParseErrorKind::BadExponent,
                })
            }
        };
        if matches!(self.peek().map(|t| &t.kind), Some(TokenKind::Caret)) {
            return Err(self.err_here(ParseErrorKind::ChainedExponent));
        }
        Ok(base.pow(exponent))
    }

    fn atom(&mut self) -> Result<Poly, ParseError> {
        match self.peek().map(|t| t.kind.clone()) {
            Some(TokenKind::Int(v)) => {
                self.bump();
                Ok(Poly::constant(self.ctx, v))
            }
            Some(TokenKind::Ident(name)) => {
                let pos = self.peek().unwrap().pos;
                self.bump();
                match self.ctx.index_of(&name) {
                    Some(i) => Ok(Poly::variable(self.ctx, i)),
                    None => Err(ParseError {
                        position: pos,
                        kind: ParseErrorKind::UnknownVariable(name),
                    }),
                }
            }
            Some(TokenKind::LParen) => {
                self.bump();
                let inner = self.expression()?;
                match self.bump() {
                    Some(Token { kind: TokenKind::RParen, .. }) => Ok(inner),
                    Some(t) => Err(ParseError {
                        position: t.pos,
                        kind: ParseErrorKind::UnexpectedToken(token_text(&t.kind)),
                    }),
                    None => Err(ParseError {
                        position: self.src_len,
                        kind: ParseErrorKind::UnexpectedEnd,
                    }),
                }
            }
            _ => Err(self.unexpected()),
        }
    }
}

fn token_text(kind: &TokenKind) -> String {
    match kind {
        TokenKind::Int(v) => v.to_string(),
        TokenKind::Ident(s) => s.clone(),
        TokenKind::Plus => "+".into(),
        TokenKind::Minus => "-".into(),
        TokenKind::Star => "*".into(),
        TokenKind::Caret => "^".into(),
        TokenKind::LParen => "(".into(),
        TokenKind::RParen => ")".into(),
    }
}

/// Parses a polynomial expression against the given context.
pub fn parse_poly(text: &str, ctx: &VarContext) -> Result<Poly, ParseError> {
    let tokens = lex(text)?;
    let mut parser = Parser { tokens, pos: 0, ctx, src_len: text.len() };
    let poly = parser.expression()?;
    if parser.peek().is_some() {
        return Err(parser.unexpected());
    }
    Ok(poly)
}

/// Canonical text form: terms in graded-lex descending order, explicit `*`,
/// `^` only for exponents of at least 2, and `-` rendered with spacing
/// (`x^2 - 1`, never `x^2 + -1`). The zero polynomial prints as `0`.
pub fn format_poly(f: &Poly) -> String {
    if f.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    let terms: Vec<_> = f.terms().collect();
    for (idx, (mono, coeff)) in terms.into_iter().rev().enumerate() {
        let negative = coeff.is_negative();
        if idx == 0 {
            if negative {
                out.push('-');
            }
        } else if negative {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        let magnitude = coeff.abs();
        let vars: Vec<String> = mono
            .exponents()
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| {
                if e == 1 {
                    f.context().name(i).to_string()
                } else {
                    format!("{}^{}", f.context().name(i), e)
                }
            })
            .collect();
        if vars.is_empty() {
            out.push_str(&magnitude.to_string());
        } else {
            if !magnitude.is_one() {
                out.push_str(&magnitude.to_string());
                out.push('*');
            }
            out.push_str(&vars.join("*"));
        }
    }
    out
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_poly(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(names: &str) -> VarContext {
        VarContext::new(names.split(',')).unwrap()
    }

    #[test]
    fn parses_paper_input() {
        let c = ctx("x");
        let f = parse_poly("x^3 + 5*x", &c).unwrap();
        assert_eq!(format_poly(&f), "x^3 + 5*x");
    }

    #[test]
    fn expands_parenthesized_powers() {
        let c = ctx("x");
        let f = parse_poly("(x+1)^2", &c).unwrap();
        assert_eq!(format_poly(&f), "x^2 + 2*x + 1");
    }

    #[test]
    fn rejects_juxtaposition() {
        let c = ctx("x");
        let err = parse_poly("2x", &c).unwrap_err();
        assert_eq!(err.position, 1);
        assert!(matches!(err.kind, ParseErrorKind::UnexpectedToken(_)));
    }

    #[test]
    fn rejects_chained_exponent() {
        let c = ctx("x");
        let err = parse_poly("x^2^3", &c).unwrap_err();
        assert!(matches!(err.kind, ParseErrorKind::ChainedExponent));
    }

    #[test]
    fn rejects_negative_exponent() {
        let c = ctx("x");
        let err = parse_poly("x^-2", &c).unwrap_err();
        assert_eq!(err.position, 2);
        assert!(matches!(err.kind, ParseErrorKind::BadExponent));
    }

    #[test]
    fn rejects_unknown_variable() {
        let c = ctx("x,y");
        let err = parse_poly("x + w", &c).unwrap_err();
        assert_eq!(err.position, 4);
        assert!(matches!(err.kind, ParseErrorKind::UnknownVariable(_)));
    }

    #[test]
    fn rejects_bad_character() {
        let c = ctx("x");
        let err = parse_poly("x + $", &c).unwrap_err();
        assert_eq!(err.position, 4);
        assert!(matches!(err.kind, ParseErrorKind::UnexpectedChar('$')));
    }

    #[test]
    fn unary_minus_binds_below_power() {
        let c = ctx("x");
        let f = parse_poly("-x^2", &c).unwrap();
        assert_eq!(format_poly(&f), "-x^2");
        let g = parse_poly("-(x^2)", &c).unwrap();
        assert_eq!(f, g);
    }

    #[test]
    fn formats_canonical_examples() {
        let c = ctx("x");
        let f = parse_poly("-5*x^4 - 10*x^2", &c).unwrap();
        assert_eq!(format_poly(&f), "-5*x^4 - 10*x^2");
        assert_eq!(format_poly(&Poly::zero(&c)), "0");
        let g = parse_poly("x^2 - 1", &c).unwrap();
        assert_eq!(format_poly(&g), "x^2 - 1");
    }

    #[test]
    fn formats_graded_lex_descending() {
        let c = ctx("x,y");
        let f = parse_poly("y + x + x*y^2 + x^2*y", &c).unwrap();
        assert_eq!(format_poly(&f), "x^2*y + x*y^2 + x + y");
    }

    #[test]
    fn unbounded_literals() {
        let c = ctx("x");
        let f = parse_poly("123456789012345678901234567890*x", &c).unwrap();
        assert_eq!(format_poly(&f), "123456789012345678901234567890*x");
    }
}

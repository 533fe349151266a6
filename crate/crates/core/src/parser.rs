//! Recursive-descent parser for polynomial expressions.
//!
//! Grammar, loosest binding first:
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary ('*' unary)*
//! unary   := ('-' | '+') unary | power
//! power   := atom ('^' INTEGER)?
//! atom    := NUMBER | IDENT | '(' expr ')'
//! NUMBER  := digits ('/' digits)?
//! ```
//!
//! A rational literal `p/q` is a single token (no whitespace around `/`).
//! Implicit multiplication is not accepted: `2x1` is an error.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, ParseErrorKind, Result};
use crate::naming::VarNames;
use crate::poly::Polynomial;
use crate::scalar::Coefficient;
use crate::series::TruncatedSeriesMap;

/// Largest exponent accepted after `^`.
pub const MAX_EXPONENT: u32 = 64;

/// Nesting limit for parentheses and unary signs.
pub const MAX_DEPTH: usize = 256;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TokenKind {
    Number,
    Identifier,
    Operator,
    Parenthesis,
    Caret,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExprToken {
    pub kind: TokenKind,
    pub lexeme: String,
    pub position: usize,
}

fn parse_error(kind: ParseErrorKind, position: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        kind,
        position,
        message: message.into(),
    }
}

pub fn tokenize(text: &str) -> Result<Vec<ExprToken>> {
    let bytes = text.as_bytes();
    let mut tokens = Vec::new();
    let mut pos = 0;
    while pos < bytes.len() {
        let b = bytes[pos];
        let start = pos;
        let kind = match b {
            b' ' | b'\t' | b'\n' | b'\r' => {
                pos += 1;
                continue;
            }
            b'0'..=b'9' => {
                while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                    pos += 1;
                }
                if pos + 1 < bytes.len() && bytes[pos] == b'/' && bytes[pos + 1].is_ascii_digit() {
                    pos += 1;
                    while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                        pos += 1;
                    }
                }
                TokenKind::Number
            }
            b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                while pos < bytes.len() && (bytes[pos].is_ascii_alphanumeric() || bytes[pos] == b'_') {
                    pos += 1;
                }
                TokenKind::Identifier
            }
            b'+' | b'-' | b'*' => {
                pos += 1;
                TokenKind::Operator
            }
            b'(' | b')' => {
                pos += 1;
                TokenKind::Parenthesis
            }
            b'^' => {
                pos += 1;
                TokenKind::Caret
            }
            _ => {
                let ch = text[start..].chars().next().unwrap_or('?');
                return Err(parse_error(
                    ParseErrorKind::Syntax,
                    start,
                    format!("unexpected character {ch:?}"),
                ));
            }
        };
        tokens.push(ExprToken {
            kind,
            lexeme: text[start..pos].to_string(),
            position: start,
        });
    }
    Ok(tokens)
}

struct Parser<'a> {
    tokens: Vec<ExprToken>,
    cursor: usize,
    end: usize,
    depth: usize,
    names: &'a VarNames,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&ExprToken> {
        self.tokens.get(self.cursor)
    }

    fn peek_is(&self, lexeme: &str) -> bool {
        self.peek().is_some_and(|t| t.lexeme == lexeme)
    }

    fn next(&mut self) -> Option<ExprToken> {
        let t = self.tokens.get(self.cursor).cloned();
        self.cursor += 1;
        t
    }

    fn position(&self) -> usize {
        self.peek().map_or(self.end, |t| t.position)
    }

    fn expr(&mut self) -> Result<Polynomial<Coefficient>> {
        let mut acc = self.term()?;
        while self.peek_is("+") || self.peek_is("-") {
            let op = self.next().unwrap();
            let rhs = self.term()?;
            acc = if op.lexeme == "+" { &acc + &rhs } else { &acc - &rhs };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Polynomial<Coefficient>> {
        let mut acc = self.unary()?;
        while self.peek_is("*") {
            self.next();
            let rhs = self.unary()?;
            acc = &acc * &rhs;
        }
        Ok(acc)
    }

    fn enter(&mut self) -> Result<()> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(parse_error(
                ParseErrorKind::Syntax,
                self.position(),
                format!("nesting deeper than {MAX_DEPTH}"),
            ));
        }
        Ok(())
    }

    fn unary(&mut self) -> Result<Polynomial<Coefficient>> {
        self.enter()?;
        let out = if self.peek_is("-") {
            self.next();
            self.unary().map(|p| -p)
        } else if self.peek_is("+") {
            self.next();
            self.unary()
        } else {
            self.power()
        };
        self.depth -= 1;
        out
    }

    fn power(&mut self) -> Result<Polynomial<Coefficient>> {
        let base = self.atom()?;
        if self.peek().is_some_and(|t| t.kind == TokenKind::Caret) {
            self.next();
            let k = self.exponent()?;
            return Ok(base.pow(k));
        }
        Ok(base)
    }

    fn exponent(&mut self) -> Result<u32> {
        let position = self.position();
        match self.next() {
            Some(t) if t.kind == TokenKind::Number && !t.lexeme.contains('/') => {
                match t.lexeme.parse::<u32>() {
                    Ok(k) if k <= MAX_EXPONENT => Ok(k),
                    _ => Err(parse_error(
                        ParseErrorKind::BadExponent,
                        position,
                        format!("exponent {} exceeds {MAX_EXPONENT}", t.lexeme),
                    )),
                }
            }
            Some(t) => Err(parse_error(
                ParseErrorKind::BadExponent,
                position,
                format!("expected a nonnegative integer exponent, found {:?}", t.lexeme),
            )),
            None => Err(parse_error(
                ParseErrorKind::BadExponent,
                position,
                "expected a nonnegative integer exponent, found end of input",
            )),
        }
    }

    fn atom(&mut self) -> Result<Polynomial<Coefficient>> {
        let position = self.position();
        let n = self.names.len();
        let Some(tok) = self.next() else {
            return Err(parse_error(
                ParseErrorKind::Syntax,
                position,
                "expected an expression, found end of input",
            ));
        };
        match tok.kind {
            TokenKind::Number => Ok(Polynomial::constant(n, number(&tok)?)),
            TokenKind::Identifier => match self.names.resolve(&tok.lexeme) {
                Some(slot) => Ok(Polynomial::var(n, slot)),
                None => Err(parse_error(
                    ParseErrorKind::UnknownVariable,
                    position,
                    format!("unknown variable {:?}", tok.lexeme),
                )),
            },
            TokenKind::Parenthesis if tok.lexeme == "(" => {
                let inner = self.expr()?;
                if self.peek_is(")") {
                    self.next();
                    Ok(inner)
                } else {
                    Err(parse_error(
                        ParseErrorKind::Syntax,
                        self.position(),
                        "expected ')'",
                    ))
                }
            }
            _ => Err(parse_error(
                ParseErrorKind::Syntax,
                position,
                format!("unexpected {:?}", tok.lexeme),
            )),
        }
    }
}

fn number(tok: &ExprToken) -> Result<Coefficient> {
    let bad = || parse_error(ParseErrorKind::BadLiteral, tok.position, format!("bad number {:?}", tok.lexeme));
    let (num, den) = match tok.lexeme.split_once('/') {
        Some((a, b)) => (a, b),
        None => (tok.lexeme.as_str(), "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(parse_error(
            ParseErrorKind::BadLiteral,
            tok.position,
            "zero denominator",
        ));
    }
    Ok(Coefficient::new(num, den))
}

/// Parses `text` as a polynomial in the variables named by `names`.
pub fn parse_polynomial(text: &str, names: &VarNames) -> Result<Polynomial<Coefficient>> {
    let tokens = tokenize(text)?;
    let mut parser = Parser {
        tokens,
        cursor: 0,
        end: text.len(),
        depth: 0,
        names,
    };
    let p = parser.expr()?;
    if let Some(t) = parser.peek() {
        return Err(parse_error(
            ParseErrorKind::Syntax,
            t.position,
            format!("unexpected {:?}", t.lexeme),
        ));
    }
    Ok(p)
}

/// Parses one expression per component.
pub fn parse_components<S: AsRef<str>>(
    texts: &[S],
    names: &VarNames,
) -> Result<Vec<Polynomial<Coefficient>>> {
    texts.iter().map(|t| parse_polynomial(t.as_ref(), names)).collect()
}

#[derive(Clone, Debug)]
pub struct ParsedSeriesMap {
    pub map: TruncatedSeriesMap<Coefficient>,
    /// Human-readable notes, e.g. about dropped high-degree terms.
    pub warnings: Vec<String>,
}

/// Parses `m` component expressions in `x1..xm` into an `N`-truncated map.
/// Terms above degree `N` are dropped with a warning; a nonzero constant
/// term is an error. With `require_automorphism`, a singular linear part is
/// rejected as well.
pub fn parse_series_map<S: AsRef<str>>(
    texts: &[S],
    m: usize,
    order: usize,
    require_automorphism: bool,
) -> Result<ParsedSeriesMap> {
    if texts.len() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            found: texts.len(),
        });
    }
    let names = VarNames::coordinates(m);
    let mut components = Vec::with_capacity(m);
    let mut warnings = Vec::new();
    for (k, text) in texts.iter().enumerate() {
        let p = parse_polynomial(text.as_ref(), &names)?;
        if !p.constant_term().is_zero() {
            return Err(Error::Validation(format!(
                "component {} ({:?}) has nonzero constant term {}",
                k + 1,
                text.as_ref(),
                p.constant_term()
            )));
        }
        let t = p.truncate_total_degree(order as u32, None);
        if t != p {
            warnings.push(format!(
                "component {}: terms of degree > {order} truncated",
                k + 1
            ));
        }
        components.push(t);
    }
    let map = TruncatedSeriesMap::new(order, components)?;
    if require_automorphism && !map.is_automorphism() {
        return Err(Error::NotAutomorphism(format!(
            "linear part {} is singular",
            map.linear_part_string()
        )));
    }
    Ok(ParsedSeriesMap { map, warnings })
}

/// Checks that the lexemes of `tokens` reproduce `text` once whitespace is
/// removed.
pub fn tokens_reconstruct(text: &str, tokens: &[ExprToken]) -> bool {
    let squashed: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let joined: String = tokens.iter().map(|t| t.lexeme.as_str()).collect();
    squashed == joined
}

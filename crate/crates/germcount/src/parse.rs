//! Parser for the polynomial expressions appearing in germ files and on the
//! command line.
//!
//! Grammar (no implicit multiplication, `/` only between integer literals):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := '-' factor | power
//! power  := atom ('^' INT)?          with INT >= 1
//! atom   := INT ('/' INT)? | IDENT | '(' expr ')'
//! ```
//!
//! Identifiers must name either a context variable or a supplied parameter
//! value (used by `--set name=value`); anything else is an error with a
//! line/column position.

use crate::poly::{Polynomial, VariableContext};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use std::collections::BTreeMap;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("parse error at line {line}, column {col}: {message}")]
pub struct ParseError {
    pub message: String,
    pub line: usize,
    pub col: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(src: &str) -> Result<Vec<Spanned>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0usize;
    let mut line = 1usize;
    let mut col = 1usize;
    fn step(c: char, line: &mut usize, col: &mut usize) {
        if c == '\n' {
            *line += 1;
            *col = 1;
        } else {
            *col += 1;
        }
    }
    while i < chars.len() {
        let c = chars[i];
        let (tline, tcol) = (line, col);
        if c.is_whitespace() {
            step(c, &mut line, &mut col);
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let mut s = String::new();
            while i < chars.len() && chars[i].is_ascii_digit() {
                s.push(chars[i]);
                step(chars[i], &mut line, &mut col);
                i += 1;
            }
            // a digit run immediately followed by a letter is almost always
            // an attempt at implicit multiplication like `2x`
            if i < chars.len() && (chars[i].is_alphabetic() || chars[i] == '_') {
                return Err(ParseError {
                    message: format!(
                        "missing '*' between {s} and {:?} (implicit multiplication is not supported)",
                        chars[i]
                    ),
                    line: tline,
                    col: tcol,
                });
            }
            out.push(Spanned {
                tok: Tok::Int(s.parse().unwrap()),
                line: tline,
                col: tcol,
            });
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let mut s = String::new();
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                s.push(chars[i]);
                step(chars[i], &mut line, &mut col);
                i += 1;
            }
            out.push(Spanned {
                tok: Tok::Ident(s),
                line: tline,
                col: tcol,
            });
            continue;
        }
        let tok = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            _ => {
                return Err(ParseError {
                    message: format!("unexpected character {c:?}"),
                    line: tline,
                    col: tcol,
                })
            }
        };
        step(c, &mut line, &mut col);
        i += 1;
        out.push(Spanned {
            tok,
            line: tline,
            col: tcol,
        });
    }
    out.push(Spanned {
        tok: Tok::End,
        line,
        col,
    });
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Spanned>,
    pos: usize,
    ctx: &'a Arc<VariableContext>,
    params: &'a BTreeMap<String, BigRational>,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Spanned {
        &self.toks[self.pos]
    }

    fn advance(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, at: &Spanned, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError {
            message: message.into(),
            line: at.line,
            col: at.col,
        })
    }

    fn expr(&mut self) -> Result<Polynomial, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek().tok {
                Tok::Plus => {
                    self.advance();
                    acc = &acc + &self.term()?;
                }
                Tok::Minus => {
                    self.advance();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial, ParseError> {
        let mut acc = self.factor()?;
        while self.peek().tok == Tok::Star {
            self.advance();
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Polynomial, ParseError> {
        if self.peek().tok == Tok::Minus {
            self.advance();
            return Ok(-&self.factor()?);
        }
        self.power()
    }

    fn power(&mut self) -> Result<Polynomial, ParseError> {
        let base = self.atom()?;
        if self.peek().tok != Tok::Caret {
            return Ok(base);
        }
        self.advance();
        let at = self.peek().clone();
        match self.advance().tok {
            Tok::Int(n) => {
                let e: u32 = match n.try_into() {
                    Ok(e) if e >= 1 => e,
                    _ => return self.err(&at, "exponent must be a positive integer"),
                };
                Ok(base.pow(e))
            }
            _ => self.err(&at, "expected integer exponent after '^'"),
        }
    }

    fn atom(&mut self) -> Result<Polynomial, ParseError> {
        let at = self.peek().clone();
        match self.advance().tok {
            Tok::Int(n) => {
                if self.peek().tok == Tok::Slash {
                    self.advance();
                    let dat = self.peek().clone();
                    match self.advance().tok {
                        Tok::Int(d) => {
                            if d.is_zero() {
                                return self.err(&dat, "division by zero");
                            }
                            Ok(Polynomial::constant(self.ctx, BigRational::new(n, d)))
                        }
                        _ => self.err(
                            &dat,
                            "'/' is only allowed between integer literals",
                        ),
                    }
                } else {
                    Ok(Polynomial::constant(
                        self.ctx,
                        BigRational::from_integer(n),
                    ))
                }
            }
            Tok::Ident(name) => {
                if let Some(i) = self.ctx.index_of(&name) {
                    return Ok(Polynomial::variable(self.ctx, i));
                }
                if let Some(v) = self.params.get(&name) {
                    return Ok(Polynomial::constant(self.ctx, v.clone()));
                }
                self.err(
                    &at,
                    format!(
                        "unknown identifier {name:?} (variables: {}; parameters: {})",
                        self.ctx.names().join(", "),
                        if self.params.is_empty() {
                            "none".to_string()
                        } else {
                            self.params
                                .keys()
                                .cloned()
                                .collect::<Vec<_>>()
                                .join(", ")
                        }
                    ),
                )
            }
            Tok::LParen => {
                let inner = self.expr()?;
                let cat = self.peek().clone();
                if self.advance().tok != Tok::RParen {
                    return self.err(&cat, "expected ')'");
                }
                Ok(inner)
            }
            Tok::End => self.err(&at, "unexpected end of expression"),
            t => self.err(&at, format!("unexpected token {t:?}")),
        }
    }
}

pub fn parse_polynomial(
    src: &str,
    ctx: &Arc<VariableContext>,
) -> Result<Polynomial, ParseError> {
    parse_polynomial_with(src, ctx, &BTreeMap::new())
}

/// Parse with named rational parameters available as constants, which is how
/// `--set name=value` reaches expressions.
pub fn parse_polynomial_with(
    src: &str,
    ctx: &Arc<VariableContext>,
    params: &BTreeMap<String, BigRational>,
) -> Result<Polynomial, ParseError> {
    let toks = lex(src)?;
    let mut p = Parser {
        toks,
        pos: 0,
        ctx,
        params,
    };
    let poly = p.expr()?;
    let tail = p.peek().clone();
    if tail.tok != Tok::End {
        return Err(ParseError {
            message: format!("trailing input starting with {:?}", tail.tok),
            line: tail.line,
            col: tail.col,
        });
    }
    Ok(poly)
}

/// Parse the value side of `--set name=value`: one rational constant,
/// evaluated in an empty-variable... there are no empty contexts, so this
/// parses against a dummy context and insists the result is constant.
pub fn parse_rational(src: &str) -> Result<BigRational, ParseError> {
    let dummy = VariableContext::new(vec!["__value".into()]);
    let p = parse_polynomial(src, &dummy)?;
    if p.total_degree().unwrap_or(0) > 0 {
        return Err(ParseError {
            message: "expected a rational constant".into(),
            line: 1,
            col: 1,
        });
    }
    Ok(p.constant_term())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{int, rat};

    fn ctx() -> Arc<VariableContext> {
        VariableContext::new(vec!["x".into(), "z".into()])
    }

    #[test]
    fn parses_prenormal_components() {
        let c = ctx();
        let p = parse_polynomial("x*z + z^3", &c).unwrap();
        let x = Polynomial::variable(&c, 0);
        let z = Polynomial::variable(&c, 1);
        assert_eq!(p, &(&x * &z) + &z.pow(3));
    }

    #[test]
    fn precedence_and_unary_minus() {
        let c = ctx();
        let p = parse_polynomial("-x^2 + 2*z", &c).unwrap();
        let x = Polynomial::variable(&c, 0);
        let z = Polynomial::variable(&c, 1);
        assert_eq!(p, &(-&x.pow(2)) + &z.scale(&int(2)));
        // parenthesized base
        let q = parse_polynomial("(x + z)^2", &c).unwrap();
        assert_eq!(q, (&x + &z).pow(2));
    }

    #[test]
    fn rational_literals() {
        let c = ctx();
        let p = parse_polynomial("1/2*x - 3/4", &c).unwrap();
        let x = Polynomial::variable(&c, 0);
        assert_eq!(p, &x.scale(&rat(1, 2)) - &Polynomial::constant(&c, rat(3, 4)));
    }

    #[test]
    fn rejects_implicit_multiplication() {
        let c = ctx();
        let e = parse_polynomial("2x + z", &c).unwrap_err();
        assert!(e.message.contains("implicit multiplication"), "{e}");
        assert_eq!((e.line, e.col), (1, 1));
    }

    #[test]
    fn rejects_unknown_identifier_with_position() {
        let c = ctx();
        let e = parse_polynomial("x + y^2", &c).unwrap_err();
        assert!(e.message.contains("unknown identifier \"y\""), "{e}");
        assert_eq!((e.line, e.col), (1, 5));
    }

    #[test]
    fn rejects_bad_exponents_and_tails() {
        let c = ctx();
        assert!(parse_polynomial("x^0", &c).is_err());
        assert!(parse_polynomial("x^z", &c).is_err());
        assert!(parse_polynomial("x + ", &c).is_err());
        assert!(parse_polynomial("(x + z", &c).is_err());
        assert!(parse_polynomial("x z", &c).is_err());
        assert!(parse_polynomial("x / z", &c).is_err());
        assert!(parse_polynomial("1/0", &c).is_err());
    }

    #[test]
    fn parameters_substitute_as_constants() {
        let c = ctx();
        let mut params = BTreeMap::new();
        params.insert("a".to_string(), rat(-2, 1));
        let p = parse_polynomial_with("a*z^2 + x", &c, &params).unwrap();
        let x = Polynomial::variable(&c, 0);
        let z = Polynomial::variable(&c, 1);
        assert_eq!(p, &z.pow(2).scale(&int(-2)) + &x);
        // zero parameter wipes the term
        params.insert("a".to_string(), int(0));
        let q = parse_polynomial_with("a*z^2 + x", &c, &params).unwrap();
        assert_eq!(q, x);
    }

    #[test]
    fn parse_rational_values() {
        assert_eq!(parse_rational("3/4").unwrap(), rat(3, 4));
        assert_eq!(parse_rational("-5").unwrap(), int(-5));
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn error_positions_track_lines() {
        let c = ctx();
        let e = parse_polynomial("x +\n  q", &c).unwrap_err();
        assert_eq!((e.line, e.col), (2, 3));
    }
}

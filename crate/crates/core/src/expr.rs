//! Numerator expressions for symbolic generator families.
//!
//! The grammar is small on purpose:
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor ('*' factor | '//' integer)*
//! factor := integer | 'n' | 'p' | '(' expr ')'
//! ```
//!
//! `n` is the family index and `p` the `n`-th prime of the family's prime
//! sequence. `//` is floor division by a positive integer literal. The
//! Unicode minus and multiplication signs are accepted as synonyms.

use alloc::boxed::Box;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use num_integer::Integer;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Node {
    Const(i128),
    Index,
    Prime,
    Add(Box<Node>, Box<Node>),
    Sub(Box<Node>, Box<Node>),
    Mul(Box<Node>, Box<Node>),
    FloorDiv(Box<Node>, i128),
}

impl Node {
    fn eval(&self, n: i128, p: i128) -> Option<i128> {
        Some(match self {
            Node::Const(c) => *c,
            Node::Index => n,
            Node::Prime => p,
            Node::Add(a, b) => a.eval(n, p)?.checked_add(b.eval(n, p)?)?,
            Node::Sub(a, b) => a.eval(n, p)?.checked_sub(b.eval(n, p)?)?,
            Node::Mul(a, b) => a.eval(n, p)?.checked_mul(b.eval(n, p)?)?,
            Node::FloorDiv(a, d) => Integer::div_floor(&a.eval(n, p)?, d),
        })
    }

    fn has_vars(&self) -> bool {
        match self {
            Node::Const(_) => false,
            Node::Index | Node::Prime => true,
            Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) => a.has_vars() || b.has_vars(),
            Node::FloorDiv(a, _) => a.has_vars(),
        }
    }
}

/// A parsed numerator expression together with its source text.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NumeratorExpr {
    source: String,
    root: Node,
}

impl NumeratorExpr {
    pub fn parse(text: &str) -> Result<Self> {
        let tokens = tokenize(text)?;
        let mut parser = Parser { tokens, pos: 0, end: text.chars().count() + 1 };
        let root = parser.expr()?;
        if let Some(tok) = parser.tokens.get(parser.pos) {
            return Err(syntax(tok.column, "unexpected trailing input"));
        }
        Ok(NumeratorExpr { source: text.trim().to_string(), root })
    }

    /// Value at family index `n` with assigned prime `p`.
    pub fn eval(&self, n: u64, p: u64) -> Result<i128> {
        self.root.eval(n as i128, p as i128).ok_or(Error::Overflow("evaluating a numerator expression"))
    }

    /// Whether the expression mentions neither `n` nor `p`.
    pub fn is_constant(&self) -> bool {
        !self.root.has_vars()
    }

    pub fn as_str(&self) -> &str {
        &self.source
    }
}

impl fmt::Display for NumeratorExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.source)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(i128),
    Index,
    Prime,
    Plus,
    Minus,
    Star,
    SlashSlash,
    Open,
    Close,
}

struct Token {
    tok: Tok,
    column: usize,
}

fn syntax(column: usize, message: &str) -> Error {
    Error::Syntax { column, message: message.to_string() }
}

fn tokenize(text: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let column = i + 1;
        let c = chars[i];
        let tok = match c {
            ' ' | '\t' => {
                i += 1;
                continue;
            }
            '0'..='9' => {
                let mut value: i128 = 0;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    value = value
                        .checked_mul(10)
                        .and_then(|v| v.checked_add(chars[i] as i128 - '0' as i128))
                        .ok_or_else(|| syntax(column, "integer literal too large"))?;
                    i += 1;
                }
                out.push(Token { tok: Tok::Int(value), column });
                continue;
            }
            'n' => Tok::Index,
            'p' => Tok::Prime,
            '+' => Tok::Plus,
            '-' | '\u{2212}' => Tok::Minus,
            '*' | '\u{d7}' => Tok::Star,
            '(' => Tok::Open,
            ')' => Tok::Close,
            '/' => {
                if chars.get(i + 1) == Some(&'/') {
                    i += 1;
                    Tok::SlashSlash
                } else {
                    return Err(syntax(column, "expected '//'"));
                }
            }
            _ => return Err(syntax(column, "unexpected character")),
        };
        out.push(Token { tok, column });
        i += 1;
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|t| &t.tok)
    }

    fn column(&self) -> usize {
        self.tokens.get(self.pos).map(|t| t.column).unwrap_or(self.end)
    }

    fn expr(&mut self) -> Result<Node> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    lhs = Node::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    lhs = Node::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Node> {
        let mut lhs = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    lhs = Node::Mul(Box::new(lhs), Box::new(self.factor()?));
                }
                Some(Tok::SlashSlash) => {
                    self.pos += 1;
                    let column = self.column();
                    match self.peek() {
                        Some(Tok::Int(d)) if *d > 0 => {
                            let d = *d;
                            self.pos += 1;
                            lhs = Node::FloorDiv(Box::new(lhs), d);
                        }
                        _ => return Err(syntax(column, "'//' needs a positive integer literal")),
                    }
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn factor(&mut self) -> Result<Node> {
        let column = self.column();
        let node = match self.peek() {
            Some(Tok::Int(v)) => Node::Const(*v),
            Some(Tok::Index) => Node::Index,
            Some(Tok::Prime) => Node::Prime,
            Some(Tok::Open) => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(&Tok::Close) {
                    return Err(syntax(self.column(), "expected ')'"));
                }
                self.pos += 1;
                return Ok(inner);
            }
            Some(_) => return Err(syntax(column, "expected a number, 'n', 'p' or '('")),
            None => return Err(syntax(column, "unexpected end of expression")),
        };
        self.pos += 1;
        Ok(node)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(s: &str, n: u64, p: u64) -> i128 {
        NumeratorExpr::parse(s).unwrap().eval(n, p).unwrap()
    }

    #[test]
    fn catalog_family_numerators() {
        assert_eq!(ev("p+1", 2, 3), 4);
        assert_eq!(ev("p//2", 1, 7), 3);
        assert_eq!(ev("p - p//2", 1, 7), 4);
        assert_eq!(ev("p \u{2212} p//2", 1, 11), 6);
        assert_eq!(ev("n", 5, 11), 5);
        assert_eq!(ev("30", 13, 41), 30);
        assert_eq!(ev("2*n - 1", 10, 29), 19);
        assert_eq!(ev("n\u{d7}n", 100, 541), 10_000);
        assert_eq!(ev("(n + 1) * 2", 3, 5), 8);
    }

    #[test]
    fn precedence() {
        assert_eq!(ev("1 + 2 * 3", 0, 0), 7);
        assert_eq!(ev("10 - 3 - 2", 0, 0), 5);
        assert_eq!(ev("p + 1 // 2", 0, 7), 7);
        assert_eq!(ev("(p + 1) // 2", 0, 7), 4);
    }

    #[test]
    fn constants() {
        assert!(NumeratorExpr::parse("30").unwrap().is_constant());
        assert!(NumeratorExpr::parse("(2 + 3) * 6").unwrap().is_constant());
        assert!(!NumeratorExpr::parse("p - p").unwrap().is_constant());
    }

    #[test]
    fn syntax_errors_carry_columns() {
        let col = |s: &str| match NumeratorExpr::parse(s) {
            Err(Error::Syntax { column, .. }) => column,
            other => panic!("{s:?} -> {other:?}"),
        };
        assert_eq!(col("p + q"), 5);
        assert_eq!(col("p / 2"), 3);
        assert_eq!(col("p //"), 5);
        assert_eq!(col("p // n"), 6);
        assert_eq!(col("(p + 1"), 7);
        assert_eq!(col("p +  "), 6);
        assert_eq!(col(""), 1);
        assert_eq!(col("n n"), 3);
    }

    #[test]
    fn overflow_is_reported() {
        let e = NumeratorExpr::parse("p*p*p*p*p").unwrap();
        assert!(matches!(e.eval(1, u64::MAX), Err(Error::Overflow(_))));
    }
}

//! A small expression language for building lattices.
//!
//! ```text
//! expr := hsum ('+' hsum)*        ordinal sum
//! hsum := prod ('#' prod)*        horizontal sum
//! prod := atom ('*' atom)*        direct product
//! atom := 'C' '(' INT ')' | NAME | 'dual' '(' expr ')' | '(' expr ')'
//! ```
//!
//! `C(k)` is the `k`-element chain and `NAME` one of the [`Named`] lattices.
//! Runs of the same operator are kept as one n-ary node; parentheses always
//! produce a nested node.

use std::fmt;

use rand::Rng;

use crate::construct::{self, Named};
use crate::error::{Error, Result};
use crate::lattice::Lattice;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum LatticeExpr {
    Chain(usize),
    Named(Named),
    OrdinalSum(Vec<LatticeExpr>),
    HorizontalSum(Vec<LatticeExpr>),
    Product(Vec<LatticeExpr>),
    Dual(Box<LatticeExpr>),
}

impl LatticeExpr {
    /// Evaluates the expression.
    pub fn build(&self) -> Result<Lattice> {
        match self {
            LatticeExpr::Chain(k) => construct::chain(*k),
            LatticeExpr::Named(id) => Ok(id.lattice()),
            LatticeExpr::OrdinalSum(parts) => {
                let built = build_all(parts)?;
                construct::ordinal_sum_all(&built.iter().collect::<Vec<_>>())
            }
            LatticeExpr::HorizontalSum(parts) => {
                let built = build_all(parts)?;
                construct::horizontal_sum(&built.iter().collect::<Vec<_>>())
            }
            LatticeExpr::Product(parts) => {
                let built = build_all(parts)?;
                construct::direct_product(&built.iter().collect::<Vec<_>>())
            }
            LatticeExpr::Dual(inner) => Ok(inner.build()?.dual()),
        }
    }

    /// Element count of the built lattice, without building it. `None` when
    /// building would fail.
    pub fn size(&self) -> Option<usize> {
        match self {
            LatticeExpr::Chain(0) => None,
            LatticeExpr::Chain(k) => Some(*k),
            LatticeExpr::Named(id) => Some(id.diagram().0.len()),
            LatticeExpr::OrdinalSum(parts) if !parts.is_empty() => {
                let mut total = 1;
                for p in parts {
                    total += p.size()? - 1;
                }
                Some(total)
            }
            LatticeExpr::HorizontalSum(parts) if parts.len() >= 2 => {
                let mut total = 2;
                for p in parts {
                    let s = p.size()?;
                    if s <= 2 {
                        return None;
                    }
                    total += s - 2;
                }
                Some(total)
            }
            LatticeExpr::Product(parts) if !parts.is_empty() => {
                parts.iter().try_fold(1usize, |acc, p| acc.checked_mul(p.size()?))
            }
            LatticeExpr::Dual(inner) => inner.size(),
            _ => None,
        }
    }

    pub fn ordinal(parts: Vec<LatticeExpr>) -> LatticeExpr {
        LatticeExpr::OrdinalSum(parts)
    }

    pub fn horizontal(parts: Vec<LatticeExpr>) -> LatticeExpr {
        LatticeExpr::HorizontalSum(parts)
    }

    pub fn product(parts: Vec<LatticeExpr>) -> LatticeExpr {
        LatticeExpr::Product(parts)
    }

    pub fn dual(inner: LatticeExpr) -> LatticeExpr {
        LatticeExpr::Dual(Box::new(inner))
    }

    fn precedence(&self) -> u8 {
        match self {
            LatticeExpr::OrdinalSum(p) if p.len() > 1 => 0,
            LatticeExpr::HorizontalSum(p) if p.len() > 1 => 1,
            LatticeExpr::Product(p) if p.len() > 1 => 2,
            _ => 3,
        }
    }
}

fn build_all(parts: &[LatticeExpr]) -> Result<Vec<Lattice>> {
    if parts.is_empty() {
        return Err(Error::EmptyOperands);
    }
    parts.iter().map(LatticeExpr::build).collect()
}

impl fmt::Display for LatticeExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (parts, sep, level) = match self {
            LatticeExpr::Chain(k) => return write!(f, "C({k})"),
            LatticeExpr::Named(id) => return write!(f, "{id}"),
            LatticeExpr::Dual(inner) => return write!(f, "dual({inner})"),
            LatticeExpr::OrdinalSum(p) => (p, " + ", 0),
            LatticeExpr::HorizontalSum(p) => (p, " # ", 1),
            LatticeExpr::Product(p) => (p, " * ", 2),
        };
        if parts.len() == 1 {
            // A one-operand node renders as its operand.
            return write!(f, "{}", parts[0]);
        }
        for (i, p) in parts.iter().enumerate() {
            if i > 0 {
                f.write_str(sep)?;
            }
            if p.precedence() <= level {
                write!(f, "({p})")?;
            } else {
                write!(f, "{p}")?;
            }
        }
        Ok(())
    }
}

/// Parses an expression.
pub fn parse_expr(text: &str) -> Result<LatticeExpr> {
    let tokens = tokenize(text)?;
    let mut parser = Parser { tokens, pos: 0, end: text.len() };
    let expr = parser.expr()?;
    match parser.peek() {
        None => Ok(expr),
        Some((pos, tok)) => Err(Error::Syntax { pos, msg: format!("unexpected {tok}") }),
    }
}

/// Parses and evaluates an expression.
pub fn build(text: &str) -> Result<Lattice> {
    parse_expr(text)?.build()
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Ident(String),
    Int(usize),
    Plus,
    Hash,
    Star,
    Open,
    Close,
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::Ident(s) => write!(f, "`{s}`"),
            Token::Int(k) => write!(f, "`{k}`"),
            Token::Plus => f.write_str("`+`"),
            Token::Hash => f.write_str("`#`"),
            Token::Star => f.write_str("`*`"),
            Token::Open => f.write_str("`(`"),
            Token::Close => f.write_str("`)`"),
        }
    }
}

fn tokenize(text: &str) -> Result<Vec<(usize, Token)>> {
    let mut out = Vec::new();
    let bytes = text.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => Token::Plus,
            b'#' => Token::Hash,
            b'*' => Token::Star,
            b'(' => Token::Open,
            b')' => Token::Close,
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let value = text[start..i]
                    .parse()
                    .map_err(|_| Error::Syntax { pos: start, msg: "integer too large".into() })?;
                out.push((start, Token::Int(value)));
                continue;
            }
            c if c.is_ascii_alphabetic() => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((start, Token::Ident(text[start..i].to_string())));
                continue;
            }
            _ => {
                let ch = text[start..].chars().next().unwrap_or('?');
                return Err(Error::Syntax { pos: start, msg: format!("unexpected character `{ch}`") });
            }
        };
        out.push((start, tok));
        i += 1;
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<(usize, Token)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<(usize, &Token)> {
        self.tokens.get(self.pos).map(|(p, t)| (*p, t))
    }

    fn here(&self) -> usize {
        self.peek().map_or(self.end, |(p, _)| p)
    }

    fn eat(&mut self, want: &Token) -> bool {
        if self.peek().map(|(_, t)| t) == Some(want) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, want: &Token) -> Result<()> {
        if self.eat(want) {
            return Ok(());
        }
        let found = self.peek().map_or("end of input".to_string(), |(_, t)| t.to_string());
        Err(Error::Syntax { pos: self.here(), msg: format!("expected {want}, found {found}") })
    }

    fn list(
        &mut self,
        op: &Token,
        next: fn(&mut Parser) -> Result<LatticeExpr>,
        wrap: fn(Vec<LatticeExpr>) -> LatticeExpr,
    ) -> Result<LatticeExpr> {
        let mut parts = vec![next(self)?];
        while self.eat(op) {
            parts.push(next(self)?);
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { wrap(parts) })
    }

    fn expr(&mut self) -> Result<LatticeExpr> {
        self.list(&Token::Plus, Parser::hsum, LatticeExpr::OrdinalSum)
    }

    fn hsum(&mut self) -> Result<LatticeExpr> {
        self.list(&Token::Hash, Parser::prod, LatticeExpr::HorizontalSum)
    }

    fn prod(&mut self) -> Result<LatticeExpr> {
        self.list(&Token::Star, Parser::atom, LatticeExpr::Product)
    }

    fn atom(&mut self) -> Result<LatticeExpr> {
        let pos = self.here();
        let Some((_, tok)) = self.peek() else {
            return Err(Error::Syntax { pos, msg: "expected a lattice, found end of input".into() });
        };
        match tok.clone() {
            Token::Open => {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect(&Token::Close)?;
                Ok(inner)
            }
            Token::Ident(name) if name == "C" => {
                self.pos += 1;
                self.expect(&Token::Open)?;
                let k = match self.peek() {
                    Some((_, Token::Int(k))) => *k,
                    _ => {
                        return Err(Error::Syntax { pos: self.here(), msg: "expected chain length".into() });
                    }
                };
                self.pos += 1;
                self.expect(&Token::Close)?;
                if k == 0 {
                    return Err(Error::EmptyChain);
                }
                Ok(LatticeExpr::Chain(k))
            }
            Token::Ident(name) if name == "dual" => {
                self.pos += 1;
                self.expect(&Token::Open)?;
                let inner = self.expr()?;
                self.expect(&Token::Close)?;
                Ok(LatticeExpr::dual(inner))
            }
            Token::Ident(name) => {
                self.pos += 1;
                Ok(LatticeExpr::Named(name.parse()?))
            }
            other => Err(Error::Syntax { pos, msg: format!("expected a lattice, found {other}") }),
        }
    }
}

/// Random well-formed expression whose lattice has at most `max_size` elements
/// (`max_size >= 1`).
pub fn random_expr<R: Rng + ?Sized>(rng: &mut R, max_size: usize) -> LatticeExpr {
    random_with_depth(rng, max_size.max(1), 4)
}

fn random_with_depth<R: Rng + ?Sized>(rng: &mut R, budget: usize, depth: usize) -> LatticeExpr {
    if budget < 3 || depth == 0 {
        return LatticeExpr::Chain(rng.gen_range(1..=budget.min(4)));
    }
    match rng.gen_range(0..10) {
        0 | 1 => LatticeExpr::Chain(rng.gen_range(1..=budget.min(6))),
        2 => {
            let fits: Vec<Named> = Named::ALL.iter().copied().filter(|id| id.diagram().0.len() <= budget).collect();
            if fits.is_empty() {
                LatticeExpr::Chain(budget)
            } else {
                LatticeExpr::Named(fits[rng.gen_range(0..fits.len())])
            }
        }
        3..=5 => {
            // sizes s_i with sum(s_i - 1) + 1 <= budget
            let count = rng.gen_range(2..=3);
            let mut left = budget - 1;
            let mut parts = Vec::with_capacity(count);
            for i in 0..count {
                let share = if i + 1 == count { left } else { rng.gen_range(1..=left.max(1)) };
                let part = random_with_depth(rng, share + 1, depth - 1);
                left -= part.size().unwrap_or(1) - 1;
                parts.push(part);
                if left == 0 {
                    break;
                }
            }
            if parts.len() == 1 {
                parts.pop().unwrap()
            } else {
                LatticeExpr::OrdinalSum(parts)
            }
        }
        6 | 7 if budget >= 4 => {
            // interiors sum to at most budget - 2, each summand > 2 elements
            let mut left = budget - 2;
            let count = rng.gen_range(2..=4).min(left);
            let mut parts = Vec::with_capacity(count);
            for i in 0..count {
                let reserve = count - i - 1;
                let share = rng.gen_range(1..=(left - reserve).max(1));
                let mut part = random_with_depth(rng, share + 2, depth - 1);
                if part.size().unwrap_or(0) < 3 {
                    part = LatticeExpr::Chain(3);
                }
                left -= part.size().unwrap() - 2;
                parts.push(part);
            }
            if parts.len() < 2 {
                LatticeExpr::Chain(budget.min(5))
            } else {
                LatticeExpr::HorizontalSum(parts)
            }
        }
        8 if budget >= 4 => {
            let a = rng.gen_range(2..=budget / 2);
            let b = budget / a;
            LatticeExpr::Product(vec![random_with_depth(rng, a, depth - 1), random_with_depth(rng, b, depth - 1)])
        }
        _ => LatticeExpr::dual(random_with_depth(rng, budget, depth - 1)),
    }
}

//! Recursive-descent parser for the function and set grammar.
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := primary ('^' ['-'] INT)?
//! primary := NUMBER | NUMBER 'i' | 'i' | 'z' INT | '(' expr ')'
//!          | FN '(' expr ')' | 'clamp' '(' expr ',' NUMBER ')'
//!          | 'ind' '(' set ')' | 'compose' '(' expr ';' expr (',' expr)* ')'
//! set     := 'empty' | 'full' | ('ball' | 'closedball') '(' point ',' NUMBER ')'
//!          | ('re' | 'im') '(' 'z' INT ')' ('<=' | '<') SNUMBER
//!          | 'singleton' '(' point ')' | 'compl' '(' set ')'
//!          | ('union' | 'inter') '(' [set (',' set)*] ')'
//!          | 'preimage' '(' expr ';' set ')'
//! point   := cexpr | '[' cexpr (',' cexpr)* ']'
//! ```
//!
//! `a − b` is read as `a + (−b)`, `a / b` as `a·inv(b)` and `x^n` as a
//! product chain. A bare `z` is shorthand for `z1`. A minus sign directly in front of a number literal (and
//! not followed by `^`) is folded into the literal.

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

#[allow(unused_imports)] // inherent when std is linked
use num_traits::Float;

use super::{Axis, BorelSetExpr, Expr, FuncExpr, SetNode};
use crate::error::{Error, Result};
use crate::matnum::C64;

/// Syntax error with the byte offset at which parsing stopped.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub struct ParseError {
    pub offset: usize,
    pub expected: Vec<&'static str>,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at byte {}: expected ", self.offset)?;
        for (k, e) in self.expected.iter().enumerate() {
            if k > 0 {
                f.write_str(" | ")?;
            }
            f.write_str(e)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num { value: f64, imag: bool },
    Ident(String),
    Coord(usize),
    Sym(&'static str),
    End,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    offset: usize,
}

const SYMBOLS: [&str; 13] = ["<=", "+", "-", "*", "/", "^", "(", ")", ",", ";", "[", "]", "<"];

fn lex(text: &str) -> core::result::Result<Vec<Token>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        if b.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        if b.is_ascii_digit() || (b == b'.' && bytes.get(i + 1).is_some_and(u8::is_ascii_digit)) {
            while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                i += 1;
            }
            if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                let mut j = i + 1;
                if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                    j += 1;
                }
                if j < bytes.len() && bytes[j].is_ascii_digit() {
                    while j < bytes.len() && bytes[j].is_ascii_digit() {
                        j += 1;
                    }
                    i = j;
                }
            }
            let value: f64 = text[start..i].parse().map_err(|_| ParseError {
                offset: start,
                expected: alloc::vec!["number"],
            })?;
            if !value.is_finite() {
                return Err(ParseError {
                    offset: start,
                    expected: alloc::vec!["finite number"],
                });
            }
            let imag = bytes.get(i) == Some(&b'i')
                && !bytes
                    .get(i + 1)
                    .is_some_and(|c| c.is_ascii_alphanumeric() || *c == b'_');
            if imag {
                i += 1;
            }
            out.push(Token {
                tok: Tok::Num { value, imag },
                offset: start,
            });
            continue;
        }
        if b.is_ascii_alphabetic() || b == b'_' {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            let word = &text[start..i];
            let tok = match word.strip_prefix('z') {
                Some(digits) if !digits.is_empty() && digits.bytes().all(|c| c.is_ascii_digit()) => {
                    Tok::Coord(digits.parse().map_err(|_| ParseError {
                        offset: start,
                        expected: alloc::vec!["coordinate index"],
                    })?)
                }
                Some("") => Tok::Coord(1),
                _ => Tok::Ident(String::from(word)),
            };
            out.push(Token { tok, offset: start });
            continue;
        }
        let rest = &text[i..];
        match SYMBOLS.iter().find(|s| rest.starts_with(**s)) {
            Some(s) => {
                out.push(Token {
                    tok: Tok::Sym(s),
                    offset: start,
                });
                i += s.len();
            }
            None => {
                return Err(ParseError {
                    offset: start,
                    expected: alloc::vec!["token"],
                })
            }
        }
    }
    out.push(Token {
        tok: Tok::End,
        offset: text.len(),
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

const FUNCTIONS: [&str; 7] = ["conj", "abs", "re", "im", "sqrt", "exp", "inv"];

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].tok
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].offset
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn fail<T>(&self, expected: &[&'static str]) -> Result<T> {
        Err(Error::Parse(ParseError {
            offset: self.offset(),
            expected: expected.to_vec(),
        }))
    }

    fn eat(&mut self, sym: &'static str) -> bool {
        if *self.peek() == Tok::Sym(sym) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, sym: &'static str) -> Result<()> {
        if self.eat(sym) {
            Ok(())
        } else {
            self.fail(&[sym])
        }
    }

    fn expect_end(&self) -> Result<()> {
        if *self.peek() == Tok::End {
            Ok(())
        } else {
            self.fail(&["end of input", "operator"])
        }
    }

    fn expr(&mut self, arity: usize) -> Result<Expr> {
        let mut lhs = self.term(arity)?;
        loop {
            if self.eat("+") {
                let rhs = self.term(arity)?;
                lhs = Expr::Add(Box::new(lhs), Box::new(rhs));
            } else if self.eat("-") {
                let rhs = self.term(arity)?;
                lhs = Expr::Add(Box::new(lhs), Box::new(Expr::Neg(Box::new(rhs))));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self, arity: usize) -> Result<Expr> {
        let mut lhs = self.unary(arity)?;
        loop {
            if self.eat("*") {
                let rhs = self.unary(arity)?;
                lhs = Expr::Mul(Box::new(lhs), Box::new(rhs));
            } else if self.eat("/") {
                let rhs = self.unary(arity)?;
                lhs = Expr::Mul(Box::new(lhs), Box::new(Expr::Inv(Box::new(rhs))));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self, arity: usize) -> Result<Expr> {
        if self.eat("-") {
            if let Tok::Num { value, imag } = *self.peek() {
                if *self.peek_at(1) != Tok::Sym("^") {
                    self.bump();
                    let c = if imag {
                        C64::new(0.0, -value)
                    } else {
                        C64::new(-value, 0.0)
                    };
                    return Ok(Expr::Const(c));
                }
            }
            let inner = self.unary(arity)?;
            return Ok(Expr::Neg(Box::new(inner)));
        }
        self.power(arity)
    }

    fn power(&mut self, arity: usize) -> Result<Expr> {
        let base = self.primary(arity)?;
        if !self.eat("^") {
            return Ok(base);
        }
        let negative = self.eat("-");
        let n = match *self.peek() {
            Tok::Num { value, imag: false } if value.fract() == 0.0 && value <= 64.0 => value as u32,
            _ => return self.fail(&["integer exponent ≤ 64"]),
        };
        self.bump();
        if n == 0 {
            return Ok(Expr::Const(C64::new(1.0, 0.0)));
        }
        let mut acc = base.clone();
        for _ in 1..n {
            acc = Expr::Mul(Box::new(acc), Box::new(base.clone()));
        }
        Ok(if negative { Expr::Inv(Box::new(acc)) } else { acc })
    }

    fn primary(&mut self, arity: usize) -> Result<Expr> {
        let offset = self.offset();
        if matches!(self.peek(), Tok::Sym(s) if *s != "(") || *self.peek() == Tok::End {
            return self.fail(&["number", "coordinate", "(", "function"]);
        }
        match self.bump() {
            Tok::Num { value, imag } => Ok(Expr::Const(if imag {
                C64::new(0.0, value)
            } else {
                C64::new(value, 0.0)
            })),
            Tok::Coord(j) => {
                if j == 0 || j > arity {
                    Err(Error::CoordinateOutOfRange { index: j, arity })
                } else {
                    Ok(Expr::Coord(j))
                }
            }
            Tok::Sym("(") => {
                let e = self.expr(arity)?;
                self.expect(")")?;
                Ok(e)
            }
            Tok::Ident(name) => self.call(&name, arity, offset),
            _ => unreachable!("non-primary tokens rejected above"),
        }
    }

    fn call(&mut self, name: &str, arity: usize, offset: usize) -> Result<Expr> {
        if name == "i" {
            return Ok(Expr::Const(C64::new(0.0, 1.0)));
        }
        let unknown = || {
            Err(Error::Parse(ParseError {
                offset,
                expected: alloc::vec!["conj", "abs", "re", "im", "sqrt", "exp", "inv", "clamp", "ind", "compose"],
            }))
        };
        if !(FUNCTIONS.contains(&name) || matches!(name, "clamp" | "ind" | "compose")) {
            return unknown();
        }
        self.expect("(")?;
        let e = match name {
            "clamp" => {
                let inner = self.expr(arity)?;
                self.expect(",")?;
                let r = self.number()?;
                if r < 0.0 {
                    return self.fail(&["nonnegative radius"]);
                }
                Expr::Clamp(r, Box::new(inner))
            }
            "ind" => Expr::Indicator(Box::new(self.set(arity)?)),
            "compose" => {
                let save = self.pos;
                // The outer arity is the number of inner functions, which is
                // only known after the ';'. Skip ahead to count them.
                let m = self.count_compose_inners()?;
                self.pos = save;
                let outer = self.expr(m)?;
                self.expect(";")?;
                let mut inners = Vec::with_capacity(m);
                loop {
                    inners.push(self.expr(arity)?);
                    if !self.eat(",") {
                        break;
                    }
                }
                Expr::Compose {
                    outer: Box::new(FuncExpr { arity: m, root: outer }),
                    inners,
                }
            }
            _ => {
                let inner = Box::new(self.expr(arity)?);
                match name {
                    "conj" => Expr::Conj(inner),
                    "abs" => Expr::Abs(inner),
                    "re" => Expr::Re(inner),
                    "im" => Expr::Im(inner),
                    "sqrt" => Expr::Sqrt(inner),
                    "exp" => Expr::Exp(inner),
                    _ => Expr::Inv(inner),
                }
            }
        };
        self.expect(")")?;
        Ok(e)
    }

    /// Counts the top-level comma-separated items after the top-level ';'
    /// of a `compose(` call, leaving the cursor unspecified.
    fn count_compose_inners(&mut self) -> Result<usize> {
        let mut depth = 0usize;
        let mut after_semicolon = false;
        let mut count = 0usize;
        loop {
            match self.peek().clone() {
                Tok::End => return self.fail(&[")"]),
                Tok::Sym("(") | Tok::Sym("[") => depth += 1,
                Tok::Sym(")") | Tok::Sym("]") => {
                    if depth == 0 {
                        return if after_semicolon { Ok(count) } else { self.fail(&[";"]) };
                    }
                    depth -= 1;
                }
                Tok::Sym(";") if depth == 0 => {
                    if after_semicolon {
                        return self.fail(&[",", ")"]);
                    }
                    after_semicolon = true;
                    count = 1;
                }
                Tok::Sym(",") if depth == 0 && after_semicolon => count += 1,
                _ => {}
            }
            self.bump();
        }
    }

    /// Signed real literal.
    fn number(&mut self) -> Result<f64> {
        let negative = self.eat("-");
        match *self.peek() {
            Tok::Num { value, imag: false } => {
                self.bump();
                Ok(if negative { -value } else { value })
            }
            _ => self.fail(&["real number"]),
        }
    }

    /// Constant expression (no coordinates), evaluated.
    fn constant(&mut self) -> Result<C64> {
        let offset = self.offset();
        let e = match self.expr(0) {
            Err(Error::CoordinateOutOfRange { .. }) => {
                return Err(Error::Parse(ParseError {
                    offset,
                    expected: alloc::vec!["constant"],
                }))
            }
            other => other?,
        };
        let v = super::eval_node(&e, &[]);
        if v.re.is_finite() && v.im.is_finite() {
            Ok(v)
        } else {
            Err(Error::Parse(ParseError {
                offset,
                expected: alloc::vec!["finite constant"],
            }))
        }
    }

    fn point(&mut self, arity: usize) -> Result<Vec<C64>> {
        let offset = self.offset();
        let p = if self.eat("[") {
            let mut p = Vec::new();
            loop {
                p.push(self.constant()?);
                if !self.eat(",") {
                    break;
                }
            }
            self.expect("]")?;
            p
        } else {
            alloc::vec![self.constant()?]
        };
        if p.len() != arity {
            return Err(Error::Parse(ParseError {
                offset,
                expected: alloc::vec!["point with one entry per coordinate"],
            }));
        }
        Ok(p)
    }

    fn set(&mut self, arity: usize) -> Result<SetNode> {
        let offset = self.offset();
        let name = match self.peek() {
            Tok::Ident(name) => name.clone(),
            _ => return self.fail(&["set"]),
        };
        self.bump();
        let node = match name.as_str() {
            "empty" => return Ok(SetNode::Empty),
            "full" => return Ok(SetNode::Full),
            "re" | "im" => {
                self.expect("(")?;
                let coord = match *self.peek() {
                    Tok::Coord(j) => j,
                    _ => return self.fail(&["coordinate"]),
                };
                if coord == 0 || coord > arity {
                    return Err(Error::CoordinateOutOfRange { index: coord, arity });
                }
                self.bump();
                self.expect(")")?;
                let strict = if self.eat("<=") {
                    false
                } else if self.eat("<") {
                    true
                } else {
                    return self.fail(&["<=", "<"]);
                };
                let threshold = self.number()?;
                return Ok(SetNode::HalfPlane {
                    coord,
                    axis: if name == "re" { Axis::Re } else { Axis::Im },
                    threshold,
                    strict,
                });
            }
            "ball" | "closedball" => {
                self.expect("(")?;
                let center = self.point(arity)?;
                self.expect(",")?;
                let radius = self.number()?;
                if radius < 0.0 {
                    return self.fail(&["nonnegative radius"]);
                }
                SetNode::Ball {
                    center,
                    radius,
                    closed: name == "closedball",
                }
            }
            "singleton" => {
                self.expect("(")?;
                SetNode::Singleton(self.point(arity)?)
            }
            "compl" => {
                self.expect("(")?;
                SetNode::Complement(Box::new(self.set(arity)?))
            }
            "union" | "inter" => {
                self.expect("(")?;
                let mut items = Vec::new();
                if *self.peek() != Tok::Sym(")") {
                    loop {
                        items.push(self.set(arity)?);
                        if !self.eat(",") {
                            break;
                        }
                    }
                }
                if name == "union" {
                    SetNode::Union(items)
                } else {
                    SetNode::Intersection(items)
                }
            }
            "preimage" => {
                self.expect("(")?;
                let f = self.expr(arity)?;
                self.expect(";")?;
                let inner = self.set(1)?;
                SetNode::Preimage {
                    f: Box::new(f),
                    set: Box::new(BorelSetExpr { arity: 1, root: inner }),
                }
            }
            _ => {
                return Err(Error::Parse(ParseError {
                    offset,
                    expected: alloc::vec![
                        "empty", "full", "ball", "closedball", "re", "im", "singleton", "compl", "union",
                        "inter", "preimage"
                    ],
                }))
            }
        };
        self.expect(")")?;
        Ok(node)
    }
}

/// Parses a function of arity `d`.
pub fn parse_expr(text: &str, d: usize) -> Result<FuncExpr> {
    if d == 0 {
        return Err(Error::Invalid("arity must be positive"));
    }
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
    };
    let root = p.expr(d)?;
    p.expect_end()?;
    FuncExpr::new(d, root)
}

/// Parses a Borel set of arity `d`.
pub fn parse_set(text: &str, d: usize) -> Result<BorelSetExpr> {
    if d == 0 {
        return Err(Error::Invalid("arity must be positive"));
    }
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
    };
    let root = p.set(d)?;
    p.expect_end()?;
    BorelSetExpr::new(d, root)
}

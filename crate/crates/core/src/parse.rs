//! Operand grammar for ad-hoc computations.
//!
//! Loops are sums of mode monomials such as `z^2 e1 - 0.5*z^-1 e3` or `i*z e2`; basis labels
//! come from the algebra (`e1`, `e2`, ... by default).  Operators are sums of products of
//! `|D+P|^s`, `(Delta+P)^s`, `D`, `eps`, `Id`, `z^k`, `ad(<loop>)`, scalars and parentheses.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::lie::{LieAlgebraData, LoopElement};
use crate::modes::BlockBandOperator;
use crate::weight::DiagonalWeight;
use crate::C64;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Sym(char),
}

fn tokenize(src: &str) -> Result<Vec<Tok>> {
    let text = src
        .replace("|D+P|", " absD ")
        .replace("|D|", " absD ")
        .replace("(Delta+P)", " lap ")
        .replace("(Δ+P)", " lap ");
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    i = j;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let s: String = chars[start..i].iter().collect();
            let v = s
                .parse()
                .map_err(|_| Error::Parse(format!("bad number `{s}`")))?;
            out.push(Tok::Num(v));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(chars[start..i].iter().collect()));
        } else if "()+-*^,".contains(c) {
            out.push(Tok::Sym(c));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character `{c}`")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    alg: &'a Arc<LieAlgebraData>,
}

impl<'a> Parser<'a> {
    fn new(src: &str, alg: &'a Arc<LieAlgebraData>) -> Result<Self> {
        Ok(Self {
            toks: tokenize(src)?,
            pos: 0,
            alg,
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(Error::Parse(format!("expected `{c}`")))
        }
    }

    fn finish(&self) -> Result<()> {
        match self.peek() {
            None => Ok(()),
            Some(t) => Err(Error::Parse(format!("trailing input at {t:?}"))),
        }
    }

    fn real(&mut self) -> Result<f64> {
        let neg = self.eat('-');
        let v = match self.next() {
            Some(Tok::Num(v)) => v,
            Some(Tok::Ident(s)) if s == "pi" => std::f64::consts::PI,
            other => return Err(Error::Parse(format!("expected a number, got {other:?}"))),
        };
        Ok(if neg { -v } else { v })
    }

    fn integer(&mut self) -> Result<i64> {
        let v = self.real()?;
        if v.fract() != 0.0 {
            return Err(Error::Parse(format!(
                "expected an integer exponent, got {v}"
            )));
        }
        Ok(v as i64)
    }

    /// Optional scalar prefix: `2`, `i`, `2i`, `0.5*`.
    fn scalar_prefix(&mut self) -> Option<C64> {
        let mut c = None;
        if let Some(Tok::Num(v)) = self.peek().cloned() {
            self.pos += 1;
            c = Some(C64::new(v, 0.0));
        }
        if let Some(Tok::Ident(s)) = self.peek() {
            if s == "i" {
                self.pos += 1;
                c = Some(c.unwrap_or(C64::new(1.0, 0.0)) * C64::new(0.0, 1.0));
            }
        }
        if c.is_some() {
            self.eat('*');
        }
        c
    }

    fn label(&mut self) -> Result<usize> {
        match self.next() {
            Some(Tok::Ident(s)) => {
                if let Some(i) = self.alg.labels().iter().position(|l| *l == s) {
                    return Ok(i);
                }
                s.strip_prefix('e')
                    .and_then(|k| k.parse::<usize>().ok())
                    .filter(|k| (1..=self.alg.dim()).contains(k))
                    .map(|k| k - 1)
                    .ok_or_else(|| Error::Parse(format!("unknown basis label `{s}`")))
            }
            other => Err(Error::Parse(format!(
                "expected a basis label, got {other:?}"
            ))),
        }
    }

    fn loop_term(&mut self) -> Result<LoopElement> {
        let c = self.scalar_prefix().unwrap_or(C64::new(1.0, 0.0));
        let mut n = 0;
        if self.peek() == Some(&Tok::Ident("z".into())) {
            self.pos += 1;
            n = if self.eat('^') { self.integer()? } else { 1 };
        }
        let i = self.label()?;
        Ok(LoopElement::basis_monomial(self.alg.clone(), n, i, c))
    }

    fn loop_expr(&mut self) -> Result<LoopElement> {
        let neg = self.eat('-');
        let mut acc = self.loop_term()?;
        if neg {
            acc = acc.scale(C64::new(-1.0, 0.0));
        }
        loop {
            if self.eat('+') {
                acc = acc.add(&self.loop_term()?)?;
            } else if self.eat('-') {
                acc = acc.sub(&self.loop_term()?)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn op_atom(&mut self) -> Result<BlockBandOperator> {
        let d = self.alg.dim();
        let tok = self
            .next()
            .ok_or_else(|| Error::Parse("unexpected end of operator".into()))?;
        match tok {
            Tok::Num(v) => Ok(BlockBandOperator::identity(d).scale(C64::new(v, 0.0))),
            Tok::Sym('(') => {
                let e = self.op_expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Tok::Ident(s) => match s.as_str() {
                "i" => Ok(BlockBandOperator::identity(d).scale(C64::new(0.0, 1.0))),
                "pi" => {
                    Ok(BlockBandOperator::identity(d).scale(C64::new(std::f64::consts::PI, 0.0)))
                }
                "Id" => Ok(BlockBandOperator::identity(d)),
                "D" => {
                    let k = if self.eat('^') { self.integer()? } else { 1 };
                    if k < 0 {
                        return Err(Error::Unsupported(
                            "negative powers of D; use |D+P|^s".into(),
                        ));
                    }
                    let mut acc = BlockBandOperator::identity(d);
                    for _ in 0..k {
                        acc = acc.compose(&BlockBandOperator::d0(d))?;
                    }
                    Ok(acc)
                }
                "eps" => Ok(BlockBandOperator::epsilon_sign(d)),
                "absD" | "lap" => {
                    let w = if s == "absD" {
                        DiagonalWeight::abs_d()
                    } else {
                        DiagonalWeight::laplacian()
                    };
                    let p = if self.eat('^') { self.real()? } else { 1.0 };
                    Ok(BlockBandOperator::weight_power(d, &w, p))
                }
                "z" => {
                    let k = if self.eat('^') { self.integer()? } else { 1 };
                    Ok(BlockBandOperator::shift(d, k))
                }
                "ad" => {
                    self.expect('(')?;
                    let x = self.loop_expr()?;
                    self.expect(')')?;
                    Ok(BlockBandOperator::ad(&x))
                }
                other => Err(Error::Unsupported(format!("operator `{other}`"))),
            },
            other => Err(Error::Parse(format!("unexpected {other:?}"))),
        }
    }

    fn starts_atom(&self) -> bool {
        matches!(
            self.peek(),
            Some(Tok::Num(_)) | Some(Tok::Ident(_)) | Some(Tok::Sym('('))
        )
    }

    fn op_term(&mut self) -> Result<BlockBandOperator> {
        let mut acc = self.op_atom()?;
        loop {
            if self.eat('*') || self.starts_atom() {
                acc = acc.compose(&self.op_atom()?)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn op_expr(&mut self) -> Result<BlockBandOperator> {
        let neg = self.eat('-');
        let mut acc = self.op_term()?;
        if neg {
            acc = acc.scale(C64::new(-1.0, 0.0));
        }
        loop {
            if self.eat('+') {
                acc = acc.add(&self.op_term()?)?;
            } else if self.eat('-') {
                acc = acc.sub(&self.op_term()?)?;
            } else {
                return Ok(acc);
            }
        }
    }
}

/// Splits `"(X, Y)"` or `"X, Y"` into its top-level comma-separated parts.
pub fn split_operands(src: &str) -> Vec<String> {
    let t = src.trim();
    let inner = if t.starts_with('(') && t.ends_with(')') && matching_close(t) == Some(t.len() - 1)
    {
        &t[1..t.len() - 1]
    } else {
        t
    };
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for c in inner.chars() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                parts.push(cur.trim().to_string());
                cur.clear();
                continue;
            }
            _ => {}
        }
        cur.push(c);
    }
    if !cur.trim().is_empty() {
        parts.push(cur.trim().to_string());
    }
    parts
}

fn matching_close(t: &str) -> Option<usize> {
    let mut depth = 0;
    for (i, c) in t.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth == 0 {
                    return Some(i);
                }
            }
            _ => {}
        }
    }
    None
}

pub fn parse_loop(src: &str, alg: &Arc<LieAlgebraData>) -> Result<LoopElement> {
    let mut p = Parser::new(src, alg)?;
    let x = p.loop_expr()?;
    p.finish()?;
    Ok(x)
}

pub fn parse_operator(src: &str, alg: &Arc<LieAlgebraData>) -> Result<BlockBandOperator> {
    let mut p = Parser::new(src, alg)?;
    let x = p.op_expr()?;
    p.finish()?;
    Ok(x)
}

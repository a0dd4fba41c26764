//! Expression language for functions, exponents and weights.
//!
//! ```text
//! function := chi(a,b) | gauss(mu,sigma) | bump(center,radius) | sinw(freq)
//!           | poly(c0,...,cn) | abspow(f,e) | translate(f,t) | scale(f,c)
//!           | dilate(f,s) | sum(f,g) | prod(f,g)
//! exponent := const(p) | loghold(pinf,a) | clip(function,pmin,pmax)
//! weight   := const(c) | powerw(beta) | expw(a) | sum(w,v) | prod(w,v)
//! ```
//!
//! Numbers are decimal literals with an optional sign and exponent. Printing
//! emits the shortest round-trip form of every number, so parsing a printed
//! expression reproduces it exactly.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;
use varnorm_core::spaces::{ExponentField, WeightField};
use varnorm_core::{Interval, RealFunction};

const FUNCTIONS: &[&str] = &[
    "abspow",
    "bump",
    "chi",
    "dilate",
    "gauss",
    "poly",
    "prod",
    "scale",
    "sinw",
    "sum",
    "translate",
];
const EXPONENTS: &[&str] = &["clip", "const", "loghold"];
const WEIGHTS: &[&str] = &["const", "expw", "powerw", "prod", "sum"];

/// Syntax error: where parsing stopped and which tokens would have been
/// accepted there.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    /// Byte offset into the source text.
    pub position: usize,
    pub expected: BTreeSet<String>,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list: Vec<&str> = self.expected.iter().map(String::as_str).collect();
        write!(
            f,
            "at offset {}: expected {}",
            self.position,
            list.join(" | ")
        )
    }
}

#[derive(Clone, Debug, PartialEq, Error)]
pub enum ExprError {
    #[error("parse error {0}")]
    Parse(ParseError),
    /// Well-formed but with parameters outside the allowed range.
    #[error("invalid expression at offset {position}: {message}")]
    Domain { position: usize, message: String },
}

impl ExprError {
    pub fn position(&self) -> usize {
        match self {
            ExprError::Parse(p) => p.position,
            ExprError::Domain { position, .. } => *position,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum FnExpr {
    Chi(f64, f64),
    Gauss(f64, f64),
    Bump(f64, f64),
    Sinw(f64),
    Poly(Vec<f64>),
    AbsPow(Box<FnExpr>, f64),
    Translate(Box<FnExpr>, f64),
    Scale(Box<FnExpr>, f64),
    Dilate(Box<FnExpr>, f64),
    Sum(Box<FnExpr>, Box<FnExpr>),
    Prod(Box<FnExpr>, Box<FnExpr>),
}

#[derive(Clone, Debug, PartialEq)]
pub enum ExponentExpr {
    Const(f64),
    LogHold(f64, f64),
    Clip(FnExpr, f64, f64),
}

#[derive(Clone, Debug, PartialEq)]
pub enum WeightExpr {
    Const(f64),
    Power(f64),
    Exp(f64),
    Sum(Box<WeightExpr>, Box<WeightExpr>),
    Prod(Box<WeightExpr>, Box<WeightExpr>),
}

impl FnExpr {
    pub fn build(&self) -> varnorm_core::Result<RealFunction> {
        Ok(match self {
            FnExpr::Chi(a, b) => RealFunction::indicator(*a, *b)?,
            FnExpr::Gauss(m, s) => RealFunction::gauss(*m, *s)?,
            FnExpr::Bump(c, r) => RealFunction::bump(*c, *r)?,
            FnExpr::Sinw(w) => RealFunction::sine(*w)?,
            FnExpr::Poly(c) => RealFunction::poly(c.clone())?,
            FnExpr::AbsPow(f, e) => f.build()?.abs_pow(*e)?,
            FnExpr::Translate(f, t) => f.build()?.translate(*t),
            FnExpr::Scale(f, c) => f.build()?.scale(*c),
            FnExpr::Dilate(f, s) => f.build()?.dilate(*s)?,
            FnExpr::Sum(f, g) => f.build()?.add(&g.build()?),
            FnExpr::Prod(f, g) => f.build()?.mul(&g.build()?),
        })
    }
}

impl ExponentExpr {
    /// The exponent field; sampled bounds are taken over `domain`.
    pub fn build(&self, domain: Interval) -> varnorm_core::Result<ExponentField> {
        match self {
            ExponentExpr::Const(p) => ExponentField::constant(*p),
            ExponentExpr::LogHold(p, a) => ExponentField::log_holder(*p, *a, domain),
            ExponentExpr::Clip(f, lo, hi) => ExponentField::clipped(&f.build()?, *lo, *hi, domain),
        }
    }
}

impl WeightExpr {
    pub fn build(&self) -> varnorm_core::Result<WeightField> {
        match self {
            WeightExpr::Const(c) => WeightField::constant(*c),
            WeightExpr::Power(b) => WeightField::power(*b),
            WeightExpr::Exp(a) => WeightField::exp_abs(*a),
            WeightExpr::Sum(a, b) => Ok(a.build()?.sum(&b.build()?)),
            WeightExpr::Prod(a, b) => Ok(a.build()?.product(&b.build()?)),
        }
    }
}

/// Shortest decimal that parses back to the same `f64`.
pub fn format_number(x: f64) -> String {
    let a = x.abs();
    if a != 0.0 && !(1e-4..1e16).contains(&a) {
        format!("{x:e}")
    } else {
        format!("{x}")
    }
}

fn write_call(f: &mut fmt::Formatter<'_>, name: &str, args: &[&dyn fmt::Display]) -> fmt::Result {
    write!(f, "{name}(")?;
    for (i, a) in args.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{a}")?;
    }
    f.write_str(")")
}

struct Num(f64);

impl fmt::Display for Num {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_number(self.0))
    }
}

impl fmt::Display for FnExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FnExpr::Chi(a, b) => write_call(f, "chi", &[&Num(*a), &Num(*b)]),
            FnExpr::Gauss(m, s) => write_call(f, "gauss", &[&Num(*m), &Num(*s)]),
            FnExpr::Bump(c, r) => write_call(f, "bump", &[&Num(*c), &Num(*r)]),
            FnExpr::Sinw(w) => write_call(f, "sinw", &[&Num(*w)]),
            FnExpr::Poly(c) => {
                let nums: Vec<Num> = c.iter().map(|x| Num(*x)).collect();
                let args: Vec<&dyn fmt::Display> =
                    nums.iter().map(|n| n as &dyn fmt::Display).collect();
                write_call(f, "poly", &args)
            }
            FnExpr::AbsPow(g, e) => write_call(f, "abspow", &[g, &Num(*e)]),
            FnExpr::Translate(g, t) => write_call(f, "translate", &[g, &Num(*t)]),
            FnExpr::Scale(g, c) => write_call(f, "scale", &[g, &Num(*c)]),
            FnExpr::Dilate(g, s) => write_call(f, "dilate", &[g, &Num(*s)]),
            FnExpr::Sum(g, h) => write_call(f, "sum", &[g, h]),
            FnExpr::Prod(g, h) => write_call(f, "prod", &[g, h]),
        }
    }
}

impl fmt::Display for ExponentExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExponentExpr::Const(p) => write_call(f, "const", &[&Num(*p)]),
            ExponentExpr::LogHold(p, a) => write_call(f, "loghold", &[&Num(*p), &Num(*a)]),
            ExponentExpr::Clip(g, lo, hi) => write_call(f, "clip", &[g, &Num(*lo), &Num(*hi)]),
        }
    }
}

impl fmt::Display for WeightExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeightExpr::Const(c) => write_call(f, "const", &[&Num(*c)]),
            WeightExpr::Power(b) => write_call(f, "powerw", &[&Num(*b)]),
            WeightExpr::Exp(a) => write_call(f, "expw", &[&Num(*a)]),
            WeightExpr::Sum(a, b) => write_call(f, "sum", &[a, b]),
            WeightExpr::Prod(a, b) => write_call(f, "prod", &[a, b]),
        }
    }
}

pub fn parse_function(src: &str) -> Result<FnExpr, ExprError> {
    let mut p = Parser::new(src);
    let e = p.function()?;
    p.finish()?;
    Ok(e)
}

pub fn parse_exponent(src: &str) -> Result<ExponentExpr, ExprError> {
    let mut p = Parser::new(src);
    let e = p.exponent()?;
    p.finish()?;
    Ok(e)
}

pub fn parse_weight(src: &str) -> Result<WeightExpr, ExprError> {
    let mut p = Parser::new(src);
    let e = p.weight()?;
    p.finish()?;
    Ok(e)
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

fn syntax(position: usize, expected: &[&str]) -> ExprError {
    ExprError::Parse(ParseError {
        position,
        expected: expected.iter().map(|s| s.to_string()).collect(),
    })
}

fn domain(position: usize, message: impl Into<String>) -> ExprError {
    ExprError::Domain {
        position,
        message: message.into(),
    }
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Self { src, pos: 0 }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn finish(&mut self) -> Result<(), ExprError> {
        self.skip_ws();
        if self.pos == self.src.len() {
            Ok(())
        } else {
            Err(syntax(self.pos, &["end of input"]))
        }
    }

    fn punct(&mut self, c: char) -> Result<(), ExprError> {
        self.skip_ws();
        if self.rest().starts_with(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(syntax(self.pos, &[&c.to_string()]))
        }
    }

    /// `,` or `)`; true when the argument list continues.
    fn separator(&mut self) -> Result<bool, ExprError> {
        self.skip_ws();
        match self.rest().chars().next() {
            Some(',') => {
                self.pos += 1;
                Ok(true)
            }
            Some(')') => {
                self.pos += 1;
                Ok(false)
            }
            _ => Err(syntax(self.pos, &[",", ")"])),
        }
    }

    fn ident(&mut self, allowed: &[&str]) -> Result<(&'a str, usize), ExprError> {
        self.skip_ws();
        let start = self.pos;
        let len = self
            .rest()
            .find(|c: char| !c.is_ascii_alphanumeric() && c != '_')
            .unwrap_or(self.rest().len());
        let name = &self.src[start..start + len];
        if !allowed.contains(&name) {
            return Err(syntax(start, allowed));
        }
        self.pos += len;
        self.punct('(')?;
        Ok((name, start))
    }

    fn number(&mut self) -> Result<f64, ExprError> {
        self.skip_ws();
        let start = self.pos;
        let bytes = self.rest().as_bytes();
        let mut i = 0;
        let digits = |i: &mut usize| {
            let s = *i;
            while *i < bytes.len() && bytes[*i].is_ascii_digit() {
                *i += 1;
            }
            *i > s
        };
        if i < bytes.len() && (bytes[i] == b'+' || bytes[i] == b'-') {
            i += 1;
        }
        let mut any = digits(&mut i);
        if i < bytes.len() && bytes[i] == b'.' {
            i += 1;
            any |= digits(&mut i);
        }
        if !any {
            return Err(syntax(start, &["number"]));
        }
        if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
            let mark = i;
            i += 1;
            if i < bytes.len() && (bytes[i] == b'+' || bytes[i] == b'-') {
                i += 1;
            }
            if !digits(&mut i) {
                i = mark;
            }
        }
        let text = &self.src[start..start + i];
        let x: f64 = text.parse().map_err(|_| syntax(start, &["number"]))?;
        if !x.is_finite() {
            return Err(domain(start, "number out of range"));
        }
        self.pos += i;
        Ok(x)
    }

    /// `, number` inside an argument list.
    fn next_number(&mut self) -> Result<f64, ExprError> {
        self.punct(',')?;
        self.number()
    }

    fn function(&mut self) -> Result<FnExpr, ExprError> {
        let (name, at) = self.ident(FUNCTIONS)?;
        let e = match name {
            "chi" | "gauss" | "bump" => {
                let a = self.number()?;
                let b = self.next_number()?;
                match name {
                    "chi" => FnExpr::Chi(a, b),
                    "gauss" => FnExpr::Gauss(a, b),
                    _ => FnExpr::Bump(a, b),
                }
            }
            "sinw" => FnExpr::Sinw(self.number()?),
            "poly" => {
                let mut c = vec![self.number()?];
                while self.separator()? {
                    c.push(self.number()?);
                }
                return self.checked(FnExpr::Poly(c), at);
            }
            "abspow" | "translate" | "scale" | "dilate" => {
                let f = Box::new(self.function()?);
                let x = self.next_number()?;
                match name {
                    "abspow" => FnExpr::AbsPow(f, x),
                    "translate" => FnExpr::Translate(f, x),
                    "scale" => FnExpr::Scale(f, x),
                    _ => FnExpr::Dilate(f, x),
                }
            }
            _ => {
                let f = Box::new(self.function()?);
                self.punct(',')?;
                let g = Box::new(self.function()?);
                if name == "sum" {
                    FnExpr::Sum(f, g)
                } else {
                    FnExpr::Prod(f, g)
                }
            }
        };
        self.punct(')')?;
        self.checked(e, at)
    }

    fn checked(&self, e: FnExpr, at: usize) -> Result<FnExpr, ExprError> {
        match &e {
            FnExpr::Chi(a, b) if !(a < b) => Err(domain(at, "chi(a,b) needs a < b")),
            _ => e
                .build()
                .map(|_| e)
                .map_err(|err| domain(at, err.to_string())),
        }
    }

    fn exponent(&mut self) -> Result<ExponentExpr, ExprError> {
        let (name, at) = self.ident(EXPONENTS)?;
        let e = match name {
            "const" => {
                let p = self.number()?;
                if !(p > 1.0) {
                    return Err(domain(at, "const(p) exponent needs p > 1"));
                }
                ExponentExpr::Const(p)
            }
            "loghold" => {
                let p = self.number()?;
                let a = self.next_number()?;
                if !(p.min(p + a) > 1.0) {
                    return Err(domain(at, "loghold(pinf,a) needs min(pinf, pinf + a) > 1"));
                }
                ExponentExpr::LogHold(p, a)
            }
            _ => {
                let f = self.function()?;
                let lo = self.next_number()?;
                let hi = self.next_number()?;
                if !(lo > 1.0 && hi >= lo) {
                    return Err(domain(at, "clip(f,pmin,pmax) needs 1 < pmin <= pmax"));
                }
                ExponentExpr::Clip(f, lo, hi)
            }
        };
        self.punct(')')?;
        Ok(e)
    }

    fn weight(&mut self) -> Result<WeightExpr, ExprError> {
        let (name, at) = self.ident(WEIGHTS)?;
        let e = match name {
            "const" => WeightExpr::Const(self.number()?),
            "powerw" => WeightExpr::Power(self.number()?),
            "expw" => WeightExpr::Exp(self.number()?),
            _ => {
                let a = Box::new(self.weight()?);
                self.punct(',')?;
                let b = Box::new(self.weight()?);
                if name == "sum" {
                    WeightExpr::Sum(a, b)
                } else {
                    WeightExpr::Prod(a, b)
                }
            }
        };
        self.punct(')')?;
        e.build().map_err(|err| domain(at, err.to_string()))?;
        Ok(e)
    }
}

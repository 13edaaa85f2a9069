//! Recursive-descent parser for the polynomial text grammar.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' '-'? INT)?
//! atom   := INT | NAME ('[' INT ',' INT ']')? | NAME '(' expr ')' | '(' expr ')'
//! ```
//!
//! Names with an index suffix are normalised to `name[i,j]` with no spaces.
//! The parser only builds an [`Expr`]; what the names and operators mean is
//! decided by an [`Interpret`] implementation (commutative polynomials,
//! quantum matrices, flow paths, ...).

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use super::{ExpPoly, MPoly, Scalar, Vars};
use crate::error::{Error, Result};
use crate::exactmat::Rat;

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Int(BigInt),
    Var(String),
    Call(String, Box<Expr>),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Name(String),
    Sym(char),
}

fn tokenize(src: &str) -> Result<Vec<Tok>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            out.push(Tok::Int(s.parse().map_err(|_| Error::parse(format!("bad integer `{s}`")))?));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Tok::Name(chars[start..i].iter().collect()));
        } else if "+-*/^()[],".contains(c) {
            out.push(Tok::Sym(c));
            i += 1;
        } else {
            return Err(Error::parse(format!("unexpected character `{c}` at offset {i}")));
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
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
            Err(Error::parse(format!("expected `{c}` at token {}", self.pos)))
        }
    }

    fn int(&mut self) -> Result<BigInt> {
        match self.toks.get(self.pos) {
            Some(Tok::Int(n)) => {
                let n = n.clone();
                self.pos += 1;
                Ok(n)
            }
            _ => Err(Error::parse(format!("expected integer at token {}", self.pos))),
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat('/') {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.eat('^') {
            let neg = self.eat('-');
            let n = self.int()?;
            let n = n
                .to_i64()
                .filter(|v| *v <= 10_000)
                .ok_or_else(|| Error::parse("exponent too large"))?;
            return Ok(Expr::Pow(Box::new(base), if neg { -n } else { n }));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.toks.get(self.pos).cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                Ok(Expr::Int(n))
            }
            Some(Tok::Name(name)) => {
                self.pos += 1;
                if self.eat('[') {
                    let i = self.int()?;
                    self.expect(',')?;
                    let j = self.int()?;
                    self.expect(']')?;
                    Ok(Expr::Var(format!("{name}[{i},{j}]")))
                } else if self.eat('(') {
                    let arg = self.expr()?;
                    self.expect(')')?;
                    Ok(Expr::Call(name, Box::new(arg)))
                } else {
                    Ok(Expr::Var(name))
                }
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            _ => Err(Error::parse(format!("unexpected token at {}", self.pos))),
        }
    }
}

pub fn parse_expr(src: &str) -> Result<Expr> {
    let toks = tokenize(src)?;
    if toks.is_empty() {
        return Err(Error::parse("empty expression"));
    }
    let mut p = Parser { toks, pos: 0 };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(Error::parse(format!("trailing input at token {}", p.pos)));
    }
    Ok(e)
}

impl Expr {
    /// Collects variable names in order of first appearance.
    pub fn variables(&self) -> Vec<String> {
        fn walk(e: &Expr, out: &mut Vec<String>) {
            match e {
                Expr::Int(_) => {}
                Expr::Var(v) => {
                    if !out.contains(v) {
                        out.push(v.clone());
                    }
                }
                Expr::Call(_, a) | Expr::Neg(a) | Expr::Pow(a, _) => walk(a, out),
                Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                    walk(a, out);
                    walk(b, out);
                }
            }
        }
        let mut out = Vec::new();
        walk(self, &mut out);
        out
    }

    pub fn interpret<I: Interpret>(&self, it: &I) -> Result<I::Value> {
        Ok(match self {
            Expr::Int(n) => it.int(n),
            Expr::Var(v) => it.var(v)?,
            Expr::Call(f, a) => it.call(f, a.interpret(it)?)?,
            Expr::Neg(a) => it.neg(a.interpret(it)?),
            Expr::Add(a, b) => it.add(a.interpret(it)?, b.interpret(it)?),
            Expr::Sub(a, b) => it.sub(a.interpret(it)?, b.interpret(it)?),
            Expr::Mul(a, b) => it.mul(a.interpret(it)?, b.interpret(it)?),
            Expr::Div(a, b) => it.div(a.interpret(it)?, b.interpret(it)?)?,
            Expr::Pow(a, n) => it.pow(a.interpret(it)?, *n)?,
        })
    }
}

/// Semantics for parsed expressions.
pub trait Interpret {
    type Value;
    fn int(&self, n: &BigInt) -> Self::Value;
    fn var(&self, name: &str) -> Result<Self::Value>;
    fn add(&self, a: Self::Value, b: Self::Value) -> Self::Value;
    fn sub(&self, a: Self::Value, b: Self::Value) -> Self::Value;
    fn mul(&self, a: Self::Value, b: Self::Value) -> Self::Value;
    fn neg(&self, a: Self::Value) -> Self::Value;
    fn pow(&self, a: Self::Value, n: i64) -> Result<Self::Value>;

    fn div(&self, _a: Self::Value, _b: Self::Value) -> Result<Self::Value> {
        Err(Error::parse("division is not supported here"))
    }

    fn call(&self, f: &str, _arg: Self::Value) -> Result<Self::Value> {
        Err(Error::parse(format!("unknown function `{f}`")))
    }
}

/// Interprets names as variables of a fixed list, with optional aliases.
pub struct PolyInterp<'a> {
    pub vars: Arc<Vars>,
    pub alias: &'a dyn Fn(&str) -> Option<String>,
}

impl Interpret for PolyInterp<'_> {
    type Value = MPoly;
    fn int(&self, n: &BigInt) -> MPoly {
        MPoly::constant(&self.vars, n.clone())
    }
    fn var(&self, name: &str) -> Result<MPoly> {
        let resolved = (self.alias)(name).unwrap_or_else(|| name.to_string());
        MPoly::var_named(&self.vars, &resolved).map_err(|_| Error::parse(format!("unknown variable `{name}`")))
    }
    fn add(&self, a: MPoly, b: MPoly) -> MPoly {
        &a + &b
    }
    fn sub(&self, a: MPoly, b: MPoly) -> MPoly {
        &a - &b
    }
    fn mul(&self, a: MPoly, b: MPoly) -> MPoly {
        &a * &b
    }
    fn neg(&self, a: MPoly) -> MPoly {
        -&a
    }
    fn pow(&self, a: MPoly, n: i64) -> Result<MPoly> {
        if n < 0 {
            return Err(Error::parse("negative exponent in a polynomial"));
        }
        Ok(a.pow(n as u32))
    }
}

/// Parses a polynomial whose variables are exactly those appearing in the
/// text, ordered by first appearance.
pub fn parse_poly(src: &str) -> Result<MPoly> {
    let e = parse_expr(src)?;
    let vars = Vars::new(e.variables());
    e.interpret(&PolyInterp { vars, alias: &|_| None })
}

/// Parses a polynomial over a given variable list.
pub fn parse_poly_in(src: &str, vars: &Arc<Vars>) -> Result<MPoly> {
    parse_expr(src)?.interpret(&PolyInterp { vars: vars.clone(), alias: &|_| None })
}

/// Closed-form functions of `t`: rationals, `t`, `exp(c*t)`, `+ - * /`
/// (division by nonzero constants or pure exponentials) and integer powers.
pub struct FlowInterp;

impl Interpret for FlowInterp {
    type Value = ExpPoly;
    fn int(&self, n: &BigInt) -> ExpPoly {
        ExpPoly::constant(Rat::from_integer(n.clone()))
    }
    fn var(&self, name: &str) -> Result<ExpPoly> {
        match name {
            "t" => Ok(ExpPoly::t()),
            _ => Err(Error::parse(format!("unknown name `{name}` in a path expression"))),
        }
    }
    fn add(&self, a: ExpPoly, b: ExpPoly) -> ExpPoly {
        a.plus(&b)
    }
    fn sub(&self, a: ExpPoly, b: ExpPoly) -> ExpPoly {
        a.minus(&b)
    }
    fn mul(&self, a: ExpPoly, b: ExpPoly) -> ExpPoly {
        a.times(&b)
    }
    fn neg(&self, a: ExpPoly) -> ExpPoly {
        a.negated()
    }
    fn pow(&self, a: ExpPoly, n: i64) -> Result<ExpPoly> {
        if n >= 0 {
            Ok(a.power(n as u32))
        } else {
            let inv = a.recip().ok_or_else(|| Error::parse("cannot invert this path expression"))?;
            Ok(inv.power(n.unsigned_abs() as u32))
        }
    }
    fn div(&self, a: ExpPoly, b: ExpPoly) -> Result<ExpPoly> {
        let inv = b.recip().ok_or_else(|| Error::parse("division by a non-invertible path expression"))?;
        Ok(a.times(&inv))
    }
    fn call(&self, f: &str, arg: ExpPoly) -> Result<ExpPoly> {
        match f {
            "exp" => {
                let lambda = arg
                    .as_linear_in_t()
                    .ok_or_else(|| Error::parse("exp() argument must be c*t with rational c"))?;
                Ok(ExpPoly::exp(lambda))
            }
            _ => Err(Error::parse(format!("unknown function `{f}`"))),
        }
    }
}

pub fn parse_flow_expr(src: &str) -> Result<ExpPoly> {
    parse_expr(src)?.interpret(&FlowInterp)
}

/// Parses `n`, `-n`, `n/d` as an exact rational.
pub fn parse_rational(src: &str) -> Result<Rat> {
    let s = src.trim();
    let bad = || Error::parse(format!("bad rational literal `{s}`"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(Error::parse(format!("zero denominator in `{s}`")));
    }
    Ok(Rat::new(n, d))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_indexed_names_and_precedence() {
        let p = parse_poly("t[1, 1]*t[3,3] - 2*t[1,3]^2").unwrap();
        assert_eq!(p.vars().names(), &["t[1,1]", "t[3,3]", "t[1,3]"]);
        assert_eq!(p.to_string(), "t[1,1]*t[3,3] - 2*t[1,3]^2");
        let q = parse_poly("-a^2").unwrap();
        assert_eq!(q.to_string(), "-a^2");
        let r = parse_poly("(a+b)*(a-b)").unwrap();
        assert_eq!(r.to_string(), "a^2 - b^2");
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_expr("a +").is_err());
        assert!(parse_expr("a $ b").is_err());
        assert!(parse_expr("").is_err());
        assert!(parse_expr("(a").is_err());
        assert!(parse_poly("a/b").is_err());
        assert!(parse_poly("a^-1").is_err());
    }

    #[test]
    fn flow_expressions() {
        let f = parse_flow_expr("(1/2)*exp(4*t)").unwrap();
        assert_eq!(f, ExpPoly::term(Rat::new(1.into(), 2.into()), 0, Rat::from_integer(4.into())));
        let g = parse_flow_expr("2*3*5*t").unwrap();
        assert_eq!(g.derivative(), ExpPoly::constant(Rat::from_integer(30.into())));
        assert!(parse_flow_expr("exp(t^2)").is_err());
        assert!(parse_flow_expr("1/t").is_err());
    }

    #[test]
    fn rationals() {
        assert_eq!(parse_rational("-3/2").unwrap(), Rat::new((-3).into(), 2.into()));
        assert_eq!(parse_rational(" 7 ").unwrap(), Rat::from_integer(7.into()));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }
}

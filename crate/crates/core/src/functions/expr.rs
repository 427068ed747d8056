//! A small expression language in one variable `x`:
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := '-' factor | base ('^' unsigned-integer)?
//! base   := number | 'x' | '(' expr ')' | func '(' expr ')'
//! func   := 'sin' | 'cos' | 'exp'
//! ```
//!
//! Unary minus is parsed as multiplication by `-1`.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParseError {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown identifier `{name}` at position {pos}")]
    UnknownIdentifier { pos: usize, name: String },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EvalError {
    #[error("division by zero at x = {x}")]
    DivisionByZero { x: f64 },
    #[error("non-finite value at x = {x}")]
    NonFinite { x: f64 },
    #[error("derivative of order {requested} exceeds the available order {max}")]
    OrderTooHigh { requested: usize, max: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    X,
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
    Sin(Box<Expr>),
    Cos(Box<Expr>),
    Exp(Box<Expr>),
}

use Expr::*;

fn c(v: f64) -> Expr {
    Const(v)
}

fn series_mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    (0..a.len())
        .map(|i| (0..=i).map(|j| a[j] * b[i - j]).sum())
        .collect()
}

fn bx(e: Expr) -> Box<Expr> {
    Box::new(e)
}

impl Expr {
    pub fn eval(&self, x: f64) -> Result<f64, EvalError> {
        let v = match self {
            Const(v) => *v,
            X => x,
            Add(a, b) => a.eval(x)? + b.eval(x)?,
            Sub(a, b) => a.eval(x)? - b.eval(x)?,
            Mul(a, b) => a.eval(x)? * b.eval(x)?,
            Div(a, b) => {
                let d = b.eval(x)?;
                if d == 0.0 {
                    return Err(EvalError::DivisionByZero { x });
                }
                a.eval(x)? / d
            }
            Pow(a, n) => a.eval(x)?.powi(*n as i32),
            Sin(a) => a.eval(x)?.sin(),
            Cos(a) => a.eval(x)?.cos(),
            Exp(a) => a.eval(x)?.exp(),
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(EvalError::NonFinite { x })
        }
    }

    /// Values of `∂^d f(x)` for `d = 0..=order`, by arithmetic on truncated
    /// Taylor series. Agrees with repeated [`Expr::differentiate`] but does
    /// not grow the tree.
    pub fn eval_derivatives(&self, x: f64, order: usize) -> Result<Vec<f64>, EvalError> {
        let mut t = self.taylor(x, order + 1)?;
        let mut fact = 1.0;
        for (d, v) in t.iter_mut().enumerate().skip(1) {
            fact *= d as f64;
            *v *= fact;
        }
        if t.iter().all(|v| v.is_finite()) {
            Ok(t)
        } else {
            Err(EvalError::NonFinite { x })
        }
    }

    // Coefficients f^(i)(x) / i! for i < n.
    fn taylor(&self, x: f64, n: usize) -> Result<Vec<f64>, EvalError> {
        let mut out = vec![0.0; n];
        match self {
            Const(v) => out[0] = *v,
            X => {
                out[0] = x;
                if n > 1 {
                    out[1] = 1.0;
                }
            }
            Add(a, b) | Sub(a, b) => {
                let (ta, tb) = (a.taylor(x, n)?, b.taylor(x, n)?);
                let sign = if matches!(self, Add(..)) { 1.0 } else { -1.0 };
                for i in 0..n {
                    out[i] = ta[i] + sign * tb[i];
                }
            }
            Mul(a, b) => out = series_mul(&a.taylor(x, n)?, &b.taylor(x, n)?),
            Div(a, b) => {
                let (ta, tb) = (a.taylor(x, n)?, b.taylor(x, n)?);
                if tb[0] == 0.0 {
                    return Err(EvalError::DivisionByZero { x });
                }
                for i in 0..n {
                    let s: f64 = (1..=i).map(|j| tb[j] * out[i - j]).sum();
                    out[i] = (ta[i] - s) / tb[0];
                }
            }
            Pow(a, m) => {
                out[0] = 1.0;
                let mut base = a.taylor(x, n)?;
                let mut m = *m;
                while m > 0 {
                    if m & 1 == 1 {
                        out = series_mul(&out, &base);
                    }
                    m >>= 1;
                    if m > 0 {
                        base = series_mul(&base, &base);
                    }
                }
            }
            Exp(a) => {
                let ta = a.taylor(x, n)?;
                out[0] = ta[0].exp();
                for i in 1..n {
                    let s: f64 = (1..=i).map(|j| j as f64 * ta[j] * out[i - j]).sum();
                    out[i] = s / i as f64;
                }
            }
            Sin(a) | Cos(a) => {
                let ta = a.taylor(x, n)?;
                let (mut s, mut co) = (vec![0.0; n], vec![0.0; n]);
                s[0] = ta[0].sin();
                co[0] = ta[0].cos();
                for i in 1..n {
                    let (mut ss, mut cs) = (0.0, 0.0);
                    for j in 1..=i {
                        ss += j as f64 * ta[j] * co[i - j];
                        cs += j as f64 * ta[j] * s[i - j];
                    }
                    s[i] = ss / i as f64;
                    co[i] = -cs / i as f64;
                }
                out = if matches!(self, Sin(_)) { s } else { co };
            }
        }
        Ok(out)
    }

    /// Symbolic derivative with constant folding.
    pub fn differentiate(&self) -> Expr {
        let d = match self {
            Const(_) => c(0.0),
            X => c(1.0),
            Add(a, b) => Add(bx(a.differentiate()), bx(b.differentiate())),
            Sub(a, b) => Sub(bx(a.differentiate()), bx(b.differentiate())),
            Mul(a, b) => Add(
                bx(Mul(bx(a.differentiate()), b.clone())),
                bx(Mul(a.clone(), bx(b.differentiate()))),
            ),
            Div(a, b) => Div(
                bx(Sub(
                    bx(Mul(bx(a.differentiate()), b.clone())),
                    bx(Mul(a.clone(), bx(b.differentiate()))),
                )),
                bx(Pow(b.clone(), 2)),
            ),
            Pow(a, n) => match n {
                0 => c(0.0),
                _ => Mul(
                    bx(Mul(bx(c(*n as f64)), bx(Pow(a.clone(), n - 1)))),
                    bx(a.differentiate()),
                ),
            },
            Sin(a) => Mul(bx(Cos(a.clone())), bx(a.differentiate())),
            Cos(a) => Mul(bx(Mul(bx(c(-1.0)), bx(Sin(a.clone())))), bx(a.differentiate())),
            Exp(a) => Mul(bx(Exp(a.clone())), bx(a.differentiate())),
        };
        d.simplify()
    }

    /// Constant folding and removal of neutral elements.
    pub fn simplify(&self) -> Expr {
        match self {
            Const(_) | X => self.clone(),
            Add(a, b) => match (a.simplify(), b.simplify()) {
                (Const(u), Const(v)) => c(u + v),
                (Const(z), e) | (e, Const(z)) if z == 0.0 => e,
                (u, v) => Add(bx(u), bx(v)),
            },
            Sub(a, b) => match (a.simplify(), b.simplify()) {
                (Const(u), Const(v)) => c(u - v),
                (e, Const(z)) if z == 0.0 => e,
                (u, v) => Sub(bx(u), bx(v)),
            },
            Mul(a, b) => match (a.simplify(), b.simplify()) {
                (Const(u), Const(v)) => c(u * v),
                (Const(z), _) | (_, Const(z)) if z == 0.0 => c(0.0),
                (Const(o), e) | (e, Const(o)) if o == 1.0 => e,
                (Const(u), Mul(inner_a, inner_b)) if matches!(*inner_a, Const(_)) => {
                    let Const(v) = *inner_a else { unreachable!() };
                    Mul(bx(c(u * v)), inner_b).simplify()
                }
                (e, Const(u)) => Mul(bx(c(u)), bx(e)).simplify(),
                (u, v) => Mul(bx(u), bx(v)),
            },
            Div(a, b) => match (a.simplify(), b.simplify()) {
                (Const(u), Const(v)) if v != 0.0 => c(u / v),
                (Const(z), _) if z == 0.0 => c(0.0),
                (e, Const(o)) if o == 1.0 => e,
                (u, v) => Div(bx(u), bx(v)),
            },
            Pow(a, n) => match (a.simplify(), *n) {
                (_, 0) => c(1.0),
                (e, 1) => e,
                (Const(u), n) => c(u.powi(n as i32)),
                (e, n) => Pow(bx(e), n),
            },
            Sin(a) => match a.simplify() {
                Const(u) => c(u.sin()),
                e => Sin(bx(e)),
            },
            Cos(a) => match a.simplify() {
                Const(u) => c(u.cos()),
                e => Cos(bx(e)),
            },
            Exp(a) => match a.simplify() {
                Const(u) => c(u.exp()),
                e => Exp(bx(e)),
            },
        }
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        match self {
            Const(_) | X => 1,
            Add(a, b) | Sub(a, b) | Mul(a, b) | Div(a, b) => 1 + a.size() + b.size(),
            Pow(a, _) | Sin(a) | Cos(a) | Exp(a) => 1 + a.size(),
        }
    }
}

impl fmt::Display for Expr {
    /// Fully parenthesised output that [`parse`] reads back.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Const(v) if *v < 0.0 => write!(f, "(-{:?})", -v),
            Const(v) => write!(f, "{v:?}"),
            X => write!(f, "x"),
            Add(a, b) => write!(f, "({a} + {b})"),
            Sub(a, b) => write!(f, "({a} - {b})"),
            Mul(a, b) => write!(f, "({a} * {b})"),
            Div(a, b) => write!(f, "({a} / {b})"),
            Pow(a, n) => write!(f, "({a})^{n}"),
            Sin(a) => write!(f, "sin({a})"),
            Cos(a) => write!(f, "cos({a})"),
            Exp(a) => write!(f, "exp({a})"),
        }
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn expect(&mut self, ch: u8) -> Result<(), ParseError> {
        if self.peek() == Some(ch) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected '{}'", ch as char))
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    lhs = Add(bx(lhs), bx(self.term()?));
                }
                Some(b'-') => {
                    self.pos += 1;
                    lhs = Sub(bx(lhs), bx(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    lhs = Mul(bx(lhs), bx(self.factor()?));
                }
                Some(b'/') => {
                    self.pos += 1;
                    lhs = Div(bx(lhs), bx(self.factor()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            let inner = self.factor()?;
            return Ok(match inner {
                Const(v) => c(-v),
                e => Mul(bx(c(-1.0)), bx(e)),
            });
        }
        let base = self.base()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            if start == self.pos {
                return self.err("expected an unsigned integer exponent");
            }
            let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
            let n: u32 = match text.parse() {
                Ok(n) => n,
                Err(_) => return self.err("exponent too large"),
            };
            return Ok(Pow(bx(base), n));
        }
        Ok(base)
    }

    fn base(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(ch) if ch.is_ascii_digit() || ch == b'.' => self.number(),
            Some(ch) if ch.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphanumeric() {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                let wrap: fn(Box<Expr>) -> Expr = match name {
                    "x" => return Ok(X),
                    "sin" => Sin,
                    "cos" => Cos,
                    "exp" => Exp,
                    _ => {
                        return Err(ParseError::UnknownIdentifier {
                            pos: start,
                            name: name.to_string(),
                        })
                    }
                };
                self.expect(b'(')?;
                let arg = self.expr()?;
                self.expect(b')')?;
                Ok(wrap(bx(arg)))
            }
            Some(_) => self.err("unexpected character"),
            None => self.err("unexpected end of input"),
        }
    }

    fn number(&mut self) -> Result<Expr, ParseError> {
        let start = self.pos;
        let s = self.src;
        while self.pos < s.len() && (s[self.pos].is_ascii_digit() || s[self.pos] == b'.') {
            self.pos += 1;
        }
        if self.pos < s.len() && (s[self.pos] == b'e' || s[self.pos] == b'E') {
            let save = self.pos;
            self.pos += 1;
            if self.pos < s.len() && (s[self.pos] == b'+' || s[self.pos] == b'-') {
                self.pos += 1;
            }
            let digits = self.pos;
            while self.pos < s.len() && s[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            if digits == self.pos {
                self.pos = save;
            }
        }
        let text = std::str::from_utf8(&s[start..self.pos]).unwrap();
        match text.parse::<f64>() {
            Ok(v) => Ok(c(v)),
            Err(_) => {
                self.pos = start;
                self.err(format!("malformed number `{text}`"))
            }
        }
    }
}

/// Parse an expression in `x`.
pub fn parse(src: &str) -> Result<Expr, ParseError> {
    let mut p = Parser {
        src: src.as_bytes(),
        pos: 0,
    };
    let e = p.expr()?;
    if p.peek().is_some() {
        return p.err("unexpected trailing input");
    }
    Ok(e)
}

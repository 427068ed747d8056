//! Smooth target functions with exact derivatives: the builtin test cases
//! and functions defined by a parsed expression.

mod expr;

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

pub use expr::{parse, EvalError, Expr, ParseError};

use crate::error::{Error, Result};

/// Highest derivative order provided by the builtins.
pub const BUILTIN_MAX_ORDER: usize = 64;

/// Number of symbolic derivatives precomputed for parsed expressions.
pub const EXPR_MAX_ORDER: usize = 12;

type DerivFn = dyn Fn(f64, usize) -> std::result::Result<f64, EvalError> + Send + Sync;

/// A function `u` together with its derivatives `∂^d u` for `d <= max_order`.
#[derive(Clone)]
pub struct SmoothFunction {
    eval: Arc<DerivFn>,
    offset: usize,
    max_order: usize,
    description: String,
}

impl fmt::Debug for SmoothFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SmoothFunction")
            .field("description", &self.description)
            .field("offset", &self.offset)
            .field("max_order", &self.max_order)
            .finish()
    }
}

const BUILTINS: &[(&str, &str)] = &[
    ("sin4x", "sin(4x)"),
    ("x6", "x^6"),
    ("runge", "1/(1+25x^2)"),
    ("exp", "exp(x)"),
];

fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, i| acc * i as f64)
}

impl SmoothFunction {
    /// Wrap a closure returning `∂^d u(x)`.
    pub fn custom<F>(description: impl Into<String>, max_order: usize, f: F) -> Self
    where
        F: Fn(f64, usize) -> std::result::Result<f64, EvalError> + Send + Sync + 'static,
    {
        Self {
            eval: Arc::new(f),
            offset: 0,
            max_order,
            description: description.into(),
        }
    }

    /// Names accepted by [`SmoothFunction::builtin`].
    pub fn builtin_names() -> Vec<&'static str> {
        BUILTINS.iter().map(|(n, _)| *n).collect()
    }

    pub fn builtin(name: &str) -> Result<Self> {
        let desc = BUILTINS
            .iter()
            .find(|(n, _)| *n == name)
            .map(|(_, d)| *d)
            .ok_or_else(|| Error::UnknownFunction {
                name: name.to_string(),
                available: Self::builtin_names().join(", "),
            })?;
        let f: Box<DerivFn> = match name {
            "sin4x" => Box::new(|x, d| {
                let s = 4f64.powi(d as i32);
                let arg = 4.0 * x;
                Ok(s * match d % 4 {
                    0 => arg.sin(),
                    1 => arg.cos(),
                    2 => -arg.sin(),
                    _ => -arg.cos(),
                })
            }),
            "x6" => Box::new(|x, d| {
                Ok(if d > 6 {
                    0.0
                } else {
                    factorial(6) / factorial(6 - d) * x.powi(6 - d as i32)
                })
            }),
            // 1/(1+25x^2) = Re 1/(1+5ix)
            "runge" => Box::new(|x, d| {
                let z = Complex64::new(1.0, 5.0 * x);
                let k = Complex64::new(0.0, -5.0).powu(d as u32) * factorial(d);
                Ok((k / z.powu(d as u32 + 1)).re)
            }),
            _ => Box::new(|x, _| Ok(x.exp())),
        };
        Ok(Self {
            eval: Arc::from(f),
            offset: 0,
            max_order: BUILTIN_MAX_ORDER,
            description: desc.to_string(),
        })
    }

    /// Function defined by an expression, with derivatives up to
    /// [`EXPR_MAX_ORDER`].
    pub fn from_expr(src: &str) -> Result<Self> {
        let ast = parse(src)?.simplify();
        Ok(Self::custom(src.trim(), EXPR_MAX_ORDER, move |x, d| {
            Ok(ast.eval_derivatives(x, d)?[d])
        }))
    }

    /// Builtin name or expression.
    pub fn resolve(spec: &str) -> Result<Self> {
        let trimmed = spec.trim();
        if BUILTINS.iter().any(|(n, _)| *n == trimmed) {
            Self::builtin(trimmed)
        } else {
            Self::from_expr(trimmed)
        }
    }

    /// Polynomial `Σ c_i x^i` with exact derivatives of every order.
    pub fn polynomial(coeffs: Vec<f64>) -> Self {
        let desc = format!("polynomial {coeffs:?}");
        Self::custom(desc, BUILTIN_MAX_ORDER, move |x, d| {
            let mut acc = 0.0;
            for (i, &c) in coeffs.iter().enumerate().skip(d).rev() {
                acc = acc * x + c * factorial(i) / factorial(i - d);
            }
            Ok(acc)
        })
    }

    pub fn description(&self) -> &str {
        &self.description
    }

    /// Highest derivative order available.
    pub fn max_order(&self) -> usize {
        self.max_order
    }

    /// `∂^deriv u(x)`.
    pub fn eval(&self, x: f64, deriv: usize) -> std::result::Result<f64, EvalError> {
        if deriv > self.max_order {
            return Err(EvalError::OrderTooHigh {
                requested: deriv,
                max: self.max_order,
            });
        }
        (self.eval)(x, deriv + self.offset)
    }

    pub fn value(&self, x: f64) -> std::result::Result<f64, EvalError> {
        self.eval(x, 0)
    }

    /// `∂u` as a function in its own right.
    pub fn derivative(&self) -> Result<Self> {
        self.derivative_n(1)
    }

    pub fn derivative_n(&self, n: usize) -> Result<Self> {
        if n > self.max_order {
            return Err(EvalError::OrderTooHigh {
                requested: n,
                max: self.max_order,
            }
            .into());
        }
        Ok(Self {
            eval: self.eval.clone(),
            offset: self.offset + n,
            max_order: self.max_order - n,
            description: if n == 0 {
                self.description.clone()
            } else {
                format!("d^{n}/dx^{n} [{}]", self.description)
            },
        })
    }
}

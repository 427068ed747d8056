use thiserror::Error;

use crate::functions::{EvalError, ParseError};

/// Errors raised by spaces, projectors, bounds and the eigenvalue lab.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid breakpoints: {0}")]
    Breakpoints(String),

    #[error("invalid spline space: {0}")]
    Space(String),

    #[error("point {x} lies outside [{a}, {b}]")]
    OutOfDomain { x: f64, a: f64, b: f64 },

    /// A documented precondition was violated. The message names the
    /// offending inequality, e.g. `requires p >= 2q-l-1`.
    #[error("{0}")]
    Precondition(String),

    #[error("target space does not contain the source space: {0}")]
    NotSubspace(String),

    #[error("singular system: {0}")]
    Singular(String),

    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error(transparent)]
    Eval(#[from] EvalError),

    #[error("unknown builtin function `{name}`; available: {available}")]
    UnknownFunction { name: String, available: String },
}

pub type Result<T> = std::result::Result<T, Error>;

/// Shorthand for a precondition failure.
pub(crate) fn precondition<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Precondition(msg.into()))
}

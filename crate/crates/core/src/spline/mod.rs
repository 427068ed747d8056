//! Breakpoint sequences, spline spaces `S^k_{p,Ξ}` with their clamped
//! B-spline bases, and the exact derivative and left-integration maps
//! between neighbouring spaces.

mod breakpoints;
mod bspline;
mod polynomial;
mod space;

pub use breakpoints::Breakpoints;
pub use bspline::Spline;
pub use polynomial::Polynomial;
pub use space::{SplineSpace, MAX_DEGREE};

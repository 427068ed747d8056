//! Spline approximation with Ritz-type projectors.
//!
//! The crate works with univariate spline spaces `S^k_{p,Ξ}` of arbitrary
//! degree `p` and smoothness `k` on a breakpoint sequence `Ξ`, and provides
//!
//! * the `L^2` projector, the boundary-interpolating projector `Q`, the Ritz
//!   projector `R` and the mean-preserving `Q̃` ([`projectors`]);
//! * explicit a priori error constants and bounds ([`bounds`]);
//! * error norms, convergence studies and boundary/moment diagnostics
//!   ([`analysis`]);
//! * the clamped biharmonic eigenvalue problem with an outlier predictor
//!   ([`eigen`]).
//!
//! ```
//! use ritz_spline::{functions::SmoothFunction, projectors::q_project, spline::SplineSpace};
//!
//! let space = SplineSpace::polynomials(2, 0.0, 1.0).unwrap();
//! let u = SmoothFunction::builtin("x6").unwrap();
//! let qu = q_project(&space, 2, &u).unwrap();
//! // Q u = 3x^2
//! assert!((qu.eval(0.5, 0).unwrap() - 0.75).abs() < 1e-12);
//! ```

pub mod analysis;
pub mod bounds;
pub mod cli;
pub mod eigen;
mod error;
pub mod functions;
pub mod linalg;
pub mod plot;
pub mod projectors;
pub mod quadrature;
pub mod spline;

pub use error::{Error, Result};

//! Error norms, convergence studies and the boundary / moment diagnostics.

mod reports;
mod study;

pub use reports::{boundary_report, moment_report, BoundaryEntry, Endpoint, MomentEntry, MomentKind};
pub use study::{
    convergence_study, rq_difference_study, ConvergenceRow, ConvergenceTable, MeshKind,
    StudyConfig, StudyKind, EOC_NOISE_FLOOR,
};

use crate::error::Result;
use crate::functions::SmoothFunction;
use crate::quadrature::{integrate_elements, MAX_GAUSS_POINTS};
use crate::spline::{Breakpoints, Spline};

/// Broken norm `‖∂^ℓ(u - s)‖_Ξ`: the root of the sum of squared element
/// norms. For `ℓ <= k` this is the ordinary `L^2` norm.
pub fn error_norm(u: &SmoothFunction, s: &Spline, ell: usize) -> Result<f64> {
    let n = (s.space().degree() + ell + 10).min(MAX_GAUSS_POINTS);
    let sq = integrate_elements(s.space().breakpoints(), n, |j, x| {
        let d = u.eval(x, ell)? - s.eval_in_element(j, x, ell);
        Ok(d * d)
    })?;
    Ok(sq.sqrt())
}

/// `‖∂^ℓ s‖_Ξ` of a spline alone.
pub fn spline_norm(s: &Spline, ell: usize) -> Result<f64> {
    let n = (s.space().degree() + 2).min(MAX_GAUSS_POINTS);
    let sq = integrate_elements(s.space().breakpoints(), n, |j, x| {
        Ok(s.eval_in_element(j, x, ell).powi(2))
    })?;
    Ok(sq.sqrt())
}

/// `‖∂^r u‖` over the interval of `xi`, with `r + 10` points per element.
pub fn derivative_norm(u: &SmoothFunction, r: usize, xi: &Breakpoints) -> Result<f64> {
    let n = (r + 10).min(MAX_GAUSS_POINTS);
    let sq = integrate_elements(xi, n, |_, x| Ok(u.eval(x, r)?.powi(2)))?;
    Ok(sq.sqrt())
}

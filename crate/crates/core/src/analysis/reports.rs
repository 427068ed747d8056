use serde::Serialize;

use crate::error::Result;
use crate::functions::SmoothFunction;
use crate::quadrature::{integrate_elements, MAX_GAUSS_POINTS};
use crate::spline::Spline;

/// Endpoint at which a derivative condition is checked.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Endpoint {
    Left,
    Right,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundaryEntry {
    pub ell: usize,
    pub endpoint: Endpoint,
    pub residual: f64,
    /// `residual / max(1, |∂^ℓ u|)` at the endpoint.
    pub scaled_residual: f64,
    /// Whether a `Q` projection is guaranteed to match `∂^ℓ u` here.
    pub applicable: bool,
}

/// Derivative mismatches `|∂^ℓ s - ∂^ℓ u|` at both endpoints for
/// `ℓ = 0..q-1`. The left conditions hold for `Q` by construction; the right
/// ones require `p >= 2q - ℓ - 1`.
pub fn boundary_report(u: &SmoothFunction, s: &Spline, q: usize) -> Result<Vec<BoundaryEntry>> {
    let space = s.space();
    let p = space.degree();
    let mut out = Vec::with_capacity(2 * q);
    for ell in 0..q {
        for (endpoint, x) in [(Endpoint::Left, space.a()), (Endpoint::Right, space.b())] {
            let exact = u.eval(x, ell)?;
            let residual = (s.eval(x, ell)? - exact).abs();
            let applicable = match endpoint {
                Endpoint::Left => true,
                Endpoint::Right => p + ell + 1 >= 2 * q,
            };
            out.push(BoundaryEntry {
                ell,
                endpoint,
                residual,
                scaled_residual: residual / exact.abs().max(1.0),
                applicable,
            });
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MomentKind {
    /// `(∂^ℓ(u - s), 1)`.
    Derivative,
    /// `(u - s, (x-a)^i)`.
    Power,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentEntry {
    pub kind: MomentKind,
    /// `ℓ` for derivative moments, `i` for power moments.
    pub index: usize,
    pub residual: f64,
    /// Whether the space contains the polynomials that force this moment
    /// to vanish for a `Q` projection.
    pub applicable: bool,
}

/// Moment residuals of `u - s`: derivative moments for `ℓ = 0..q` and power
/// moments for `i = 0..q-1`.
pub fn moment_report(u: &SmoothFunction, s: &Spline, q: usize) -> Result<Vec<MomentEntry>> {
    let space = s.space();
    let p = space.degree();
    let (a, b) = (space.a(), space.b());
    let xi = space.breakpoints();
    // spline integrands are polynomial per element, integrated exactly; `u`
    // gets the finest rule
    let n_spline = (p + q) / 2 + 1;
    let mut out = Vec::with_capacity(2 * q + 1);
    for ell in 0..=q.min(u.max_order()) {
        let u_part = if ell == 0 {
            integrate_elements(xi, MAX_GAUSS_POINTS, |_, x| Ok(u.eval(x, 0)?))?
        } else {
            u.eval(b, ell - 1)? - u.eval(a, ell - 1)?
        };
        let s_part = if ell > p {
            0.0
        } else {
            integrate_elements(xi, n_spline, |j, x| Ok(s.eval_in_element(j, x, ell)))?
        };
        out.push(MomentEntry {
            kind: MomentKind::Derivative,
            index: ell,
            residual: (u_part - s_part).abs(),
            applicable: p + ell >= 2 * q,
        });
    }
    for i in 0..q {
        let r = integrate_elements(xi, MAX_GAUSS_POINTS, |j, x| {
            Ok((u.eval(x, 0)? - s.eval_in_element(j, x, 0)) * (x - a).powi(i as i32))
        })?;
        out.push(MomentEntry {
            kind: MomentKind::Power,
            index: i,
            residual: r.abs(),
            applicable: p >= 2 * q + i,
        });
    }
    Ok(out)
}

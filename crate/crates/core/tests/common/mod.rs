#![allow(dead_code)]

use proptest::prelude::*;
use ritz_spline::functions::{EvalError, SmoothFunction};
use ritz_spline::spline::{Breakpoints, Spline, SplineSpace};

/// Breakpoints on `[a, b]` from positive element weights.
pub fn breakpoints_from(a: f64, b: f64, weights: &[f64]) -> Breakpoints {
    let total: f64 = weights.iter().sum();
    let mut pts = vec![a];
    let mut acc = 0.0;
    for w in &weights[..weights.len() - 1] {
        acc += w / total;
        pts.push(a + (b - a) * acc);
    }
    pts.push(b);
    Breakpoints::new(pts).unwrap()
}

pub fn arb_breakpoints(max_elements: usize) -> impl Strategy<Value = Breakpoints> {
    (
        -1.0..1.0f64,
        0.5..2.0f64,
        prop::collection::vec(0.2..1.0f64, 1..=max_elements),
    )
        .prop_map(|(a, len, w)| breakpoints_from(a, a + len, &w))
}

/// `(p, k, Ξ)` with `p <= max_p` and `-1 <= k <= p-1`.
pub fn arb_space(max_p: usize, max_elements: usize) -> impl Strategy<Value = SplineSpace> {
    (1..=max_p)
        .prop_flat_map(move |p| (Just(p), -1..p as i32, arb_breakpoints(max_elements)))
        .prop_map(|(p, k, xi)| SplineSpace::new(p, k, xi).unwrap())
}

/// `(space, q)` with `q <= min(k+1, 3)`.
pub fn arb_space_q(max_p: usize, max_elements: usize) -> impl Strategy<Value = (SplineSpace, usize)> {
    arb_space(max_p, max_elements).prop_flat_map(|s| {
        let qmax = ((s.smoothness() + 1) as usize).min(3);
        (Just(s), 0..=qmax)
    })
}

pub fn arb_coeffs(dim: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-2.0..2.0f64, dim)
}

/// `α sin(βx + γ) + δ exp(εx)`, a smooth target with exact derivatives.
pub fn arb_smooth() -> impl Strategy<Value = SmoothFunction> {
    (-2.0..2.0f64, 0.5..4.0f64, -1.0..1.0f64, -2.0..2.0f64, -1.5..1.5f64).prop_map(
        |(al, be, ga, de, ep)| {
            SmoothFunction::custom("random trig-exp", 64, move |x, d| {
                let arg = be * x + ga;
                let trig = match d % 4 {
                    0 => arg.sin(),
                    1 => arg.cos(),
                    2 => -arg.sin(),
                    _ => -arg.cos(),
                };
                Ok(al * be.powi(d as i32) * trig + de * ep.powi(d as i32) * (ep * x).exp())
            })
        },
    )
}

/// A spline viewed as a target function.
pub fn spline_function(s: &Spline) -> SmoothFunction {
    let s = s.clone();
    let p = s.space().degree();
    SmoothFunction::custom("spline", p, move |x, d| {
        s.eval(x, d).map_err(|_| EvalError::NonFinite { x })
    })
}

/// Reference B-spline values by the Cox-de Boor recursion, written directly
/// from the definition with the convention 0/0 = 0.
pub fn cox_de_boor(knots: &[f64], i: usize, p: usize, x: f64, b: f64) -> f64 {
    if p == 0 {
        let (l, r) = (knots[i], knots[i + 1]);
        // closed at the right end of the domain
        return if (l <= x && x < r) || (x == b && r == b && l < r) { 1.0 } else { 0.0 };
    }
    let mut v = 0.0;
    let d1 = knots[i + p] - knots[i];
    if d1 > 0.0 {
        v += (x - knots[i]) / d1 * cox_de_boor(knots, i, p - 1, x, b);
    }
    let d2 = knots[i + p + 1] - knots[i + 1];
    if d2 > 0.0 {
        v += (knots[i + p + 1] - x) / d2 * cox_de_boor(knots, i + 1, p - 1, x, b);
    }
    v
}

/// Derivative of the reference B-spline.
pub fn cox_de_boor_deriv(knots: &[f64], i: usize, p: usize, x: f64, b: f64) -> f64 {
    if p == 0 {
        return 0.0;
    }
    let mut v = 0.0;
    let d1 = knots[i + p] - knots[i];
    if d1 > 0.0 {
        v += p as f64 / d1 * cox_de_boor(knots, i, p - 1, x, b);
    }
    let d2 = knots[i + p + 1] - knots[i + 1];
    if d2 > 0.0 {
        v -= p as f64 / d2 * cox_de_boor(knots, i + 1, p - 1, x, b);
    }
    v
}

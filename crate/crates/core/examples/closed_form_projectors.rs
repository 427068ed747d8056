//! The four projectors applied to `u = x^6` on polynomial spaces `P_t` of
//! `[0, 1]`, printed in monomial form.

use ritz_spline::functions::SmoothFunction;
use ritz_spline::projectors::{e_polynomial, project, ProjectorKind};
use ritz_spline::spline::SplineSpace;

fn show(c: &[f64]) -> String {
    c.iter()
        .enumerate()
        .filter(|(_, v)| v.abs() > 1e-12)
        .map(|(i, v)| format!("{v:+.6}x^{i}"))
        .collect::<Vec<_>>()
        .join(" ")
}

fn main() -> ritz_spline::Result<()> {
    let u = SmoothFunction::builtin("x6")?;
    let q = 2;
    for t in 2..=5 {
        let space = SplineSpace::polynomials(t, 0.0, 1.0)?;
        println!("P_{t}:");
        for kind in [ProjectorKind::L2, ProjectorKind::Q, ProjectorKind::Ritz, ProjectorKind::QTilde] {
            let s = project(kind, &space, q, &u)?;
            let mono = s.local_polynomials()[0].monomial_coeffs();
            println!("  {:<6} {}", kind.name(), show(&mono));
        }
        println!("  R - Q  {}", show(&e_polynomial(&space, q, &u)?.monomial_coeffs()));
    }
    Ok(())
}

//! Endpoint interpolation and moment preservation of `Q` on spline spaces,
//! with the degree conditions under which each one is guaranteed.

use ritz_spline::analysis::{boundary_report, moment_report};
use ritz_spline::functions::SmoothFunction;
use ritz_spline::projectors::q_project;
use ritz_spline::spline::{Breakpoints, SplineSpace};

fn main() -> ritz_spline::Result<()> {
    let u = SmoothFunction::builtin("runge")?;
    let q = 2;
    for p in 2..=5 {
        let space = SplineSpace::new(p, 1, Breakpoints::uniform(-1.0, 1.0, 4)?)?;
        let s = q_project(&space, q, &u)?;
        println!("p={p}");
        for b in boundary_report(&u, &s, q)? {
            println!("  d^{} at {:?}: {:.2e} (guaranteed: {})", b.ell, b.endpoint, b.residual, b.applicable);
        }
        for m in moment_report(&u, &s, q)? {
            println!("  {:?} moment {}: {:.2e} (guaranteed: {})", m.kind, m.index, m.residual, m.applicable);
        }
    }
    Ok(())
}

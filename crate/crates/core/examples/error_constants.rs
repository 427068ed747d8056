//! Explicit constants of the error estimates, and the resulting bound for a
//! concrete projection compared with the measured error.

use ritz_spline::analysis::{derivative_norm, error_norm};
use ritz_spline::bounds::{c_bound_simplified, c_const, d_const, q_error_bound, BoundQuery};
use ritz_spline::functions::SmoothFunction;
use ritz_spline::projectors::q_project;
use ritz_spline::spline::{Breakpoints, SplineSpace};

fn main() -> ritz_spline::Result<()> {
    println!("  p  k  r  c_pkr         simplified");
    for p in 1..=5 {
        for k in -1..p - 1 {
            let r = p + 1;
            let simple = c_bound_simplified(p, k, r).map_or("-".to_string(), |v| format!("{v:.6e}"));
            println!("{p:>3}{k:>3}{r:>3}  {:.6e}  {simple}", c_const(p, k, r)?);
        }
    }
    println!("d_p: {:?}", (0..=5).map(d_const).collect::<Vec<_>>());

    let u = SmoothFunction::builtin("sin4x")?;
    let (p, k, q, r) = (3usize, 2i32, 2usize, 4usize);
    for n in [2, 4, 8, 16] {
        let xi = Breakpoints::uniform(0.0, 1.0, n)?;
        let s = q_project(&SplineSpace::new(p, k, xi.clone())?, q, &u)?;
        let bound = q_error_bound(&BoundQuery::uniform(p as i64, k as i64, q as i64, 0, r as i64, xi.h()))?
            * derivative_norm(&u, r, &xi)?;
        let err = error_norm(&u, &s, 0)?;
        println!("N={n:<3} error {err:.3e}  bound {bound:.3e}  ratio {:.3}", err / bound);
    }
    Ok(())
}

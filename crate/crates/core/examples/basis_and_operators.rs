//! B-spline basis of a spline space, and the derivative / integral operators
//! that move along the chain `S^k_p -> S^{k-1}_{p-1}`.

use ritz_spline::spline::{Breakpoints, Spline, SplineSpace};

fn main() -> ritz_spline::Result<()> {
    let xi = Breakpoints::new(vec![0.0, 0.25, 0.6, 1.0])?;
    let space = SplineSpace::new(3, 1, xi)?;
    println!("degree {}, smoothness {}, dim {}", space.degree(), space.smoothness(), space.dim());
    println!("knots {:?}", space.knots());

    // partition of unity at a few points
    for x in [0.0, 0.3, 0.6, 0.99] {
        let (first, vals) = space.eval_basis(x, 0)?;
        let sum: f64 = vals.iter().sum();
        println!("x={x:<4} first active {first}, sum of basis = {sum:.15}");
    }

    // s(x) = sin(3x) represented locally, then differentiated and integrated back
    let s = Spline::from_piecewise(space.clone(), |_, x| (3.0 * x).sin())?;
    let ds = s.derive()?;
    let back = ds.integrate_from_left()?.add_constant(s.eval(0.0, 0)?);
    println!(
        "derived space: p={} k={}; max |K d s - s| coeff = {:.2e}",
        ds.space().degree(),
        ds.space().smoothness(),
        back.sub(&s)?.max_abs_coeff()
    );
    println!("integral of s over [0,1] = {:.12}", s.integral());
    Ok(())
}

//! Target functions from expressions: parsing, symbolic derivatives, and
//! projection of the parsed function.

use ritz_spline::analysis::error_norm;
use ritz_spline::functions::{parse, SmoothFunction};
use ritz_spline::projectors::q_project;
use ritz_spline::spline::{Breakpoints, SplineSpace};

fn main() -> ritz_spline::Result<()> {
    let src = "exp(-x)*cos(3*x) + x^3/(2+x)";
    let ast = parse(src)?;
    println!("parsed : {ast}");
    let mut d = ast.simplify();
    for order in 1..=2 {
        d = d.differentiate();
        println!("d^{order}    : {d}");
    }

    let u = SmoothFunction::from_expr(src)?;
    println!("u(0.5) = {:.12}, u''(0.5) = {:.12}", u.eval(0.5, 0)?, u.eval(0.5, 2)?);

    for n in [2, 4, 8, 16] {
        let space = SplineSpace::new(4, 3, Breakpoints::uniform(0.0, 1.0, n)?)?;
        let s = q_project(&space, 2, &u)?;
        println!("N={n:<3} |u - Qu| = {:.3e}", error_norm(&u, &s, 0)?);
    }

    match parse("sin(4*y)") {
        Err(e) => println!("rejected: {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}

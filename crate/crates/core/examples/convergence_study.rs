//! Errors of `Q` for `u = sin(4x)` under dyadic refinement, with maximal
//! smoothness, and the `R - Q` difference on the same meshes.

use ritz_spline::analysis::{convergence_study, rq_difference_study, StudyConfig};
use ritz_spline::functions::SmoothFunction;
use ritz_spline::projectors::ProjectorKind;

fn main() -> ritz_spline::Result<()> {
    let u = SmoothFunction::builtin("sin4x")?;
    let cfg = StudyConfig::default();
    for p in 2..=4 {
        let t = convergence_study(&u, ProjectorKind::Q, p, p as i32 - 1, 2, &[0, 1], &cfg)?;
        println!("Q error, p={p}");
        print!("{}", t.to_csv());
        let d = rq_difference_study(&u, p, p as i32 - 1, 2, &[0, 1], &cfg)?;
        println!(
            "R - Q difference, p={p}: final orders l=0 {:?}, l=1 {:?}{}",
            d.final_order(0),
            d.final_order(1),
            if d.exact_zero_expected { " (R = Q here)" } else { "" }
        );
        println!();
    }
    Ok(())
}

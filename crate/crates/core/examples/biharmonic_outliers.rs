//! Clamped biharmonic eigenvalues with maximally smooth splines: discrete
//! versus exact spectrum and the predicted number of well-approximated modes.

use ritz_spline::eigen::outlier_report;
use ritz_spline::spline::Breakpoints;

fn main() -> ritz_spline::Result<()> {
    for p in [2, 3, 4] {
        for n in [8, 16, 32] {
            let r = outlier_report(p, Breakpoints::uniform(0.0, 1.0, n)?, 0.10)?;
            let worst_predicted = r.rel_err[..r.predicted_non_outliers]
                .iter()
                .fold(0.0f64, |m, &e| m.max(e));
            println!(
                "p={p} N={n:<3} n={:<3} lambda_1={:.4} predicted ok {:<3} observed outliers {:<3} worst predicted error {:.3}",
                r.n,
                r.lambda_h[0],
                r.predicted_non_outliers,
                r.observed_outliers.len(),
                worst_predicted
            );
        }
    }
    let r = outlier_report(3, Breakpoints::uniform(0.0, 1.0, 20)?, 0.10)?;
    print!("{}", r.to_csv());
    Ok(())
}

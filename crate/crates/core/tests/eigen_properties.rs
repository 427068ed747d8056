use ritz_spline::eigen::{
    assemble, asymptotic_eigenvalues, constrained_space, outlier_report, predict_non_outliers,
    reference_eigenvalues, solve_biharmonic,
};
use ritz_spline::spline::{Breakpoints, Spline};

#[test]
fn constrained_members_vanish_with_slope() {
    for p in 2..=5 {
        let basis = constrained_space(p, Breakpoints::uniform(0.0, 1.0, 6).unwrap()).unwrap();
        let mut c = vec![0.0; basis.space.dim()];
        for (n, &i) in basis.indices.iter().enumerate() {
            c[i] = 1.0 + n as f64 * 0.37;
        }
        let s = Spline::new(basis.space.clone(), c).unwrap();
        for x in [0.0, 1.0] {
            assert!(s.eval(x, 0).unwrap().abs() < 1e-12);
            assert!(s.eval(x, 1).unwrap().abs() < 1e-12);
        }
    }
}

#[test]
fn matrices_symmetric_and_mass_definite() {
    for p in 2..=6 {
        for n in [1usize, 2, 7, 16, 64] {
            let Ok(basis) = constrained_space(p, Breakpoints::uniform(0.0, 1.0, n).unwrap()) else {
                continue;
            };
            let (k, m) = assemble(&basis).unwrap();
            let sym = |a: &nalgebra::DMatrix<f64>| (a - a.transpose()).amax() <= 1e-12 * a.amax();
            assert!(sym(&k) && sym(&m), "p={p} n={n}");
            assert!(m.clone().cholesky().is_some(), "p={p} n={n}");
        }
    }
}

#[test]
fn discrete_eigenvalues_are_upper_bounds_and_decrease() {
    for p in [3usize, 4] {
        let mut prev: Option<Vec<f64>> = None;
        for n in [4usize, 8, 16, 32] {
            let r = solve_biharmonic(p, Breakpoints::uniform(0.0, 1.0, n).unwrap()).unwrap();
            assert!(r.max_residual <= 1e-8);
            for (lh, l) in r.lambda_h.iter().zip(&r.lambda_ref) {
                assert!(*lh > 0.0 && *lh >= l * (1.0 - 1e-6), "p={p} n={n}: {lh} < {l}");
            }
            if let Some(prev) = prev {
                // nested spaces: eigenvalue i can only go down
                for (a, b) in r.lambda_h.iter().zip(&prev) {
                    assert!(*a <= b * (1.0 + 1e-10));
                }
            }
            prev = Some(r.lambda_h);
        }
    }
}

#[test]
fn first_eigenvalue_converges_at_order_2p_minus_2() {
    let p = 3;
    let err = |n: usize| {
        let r = solve_biharmonic(p, Breakpoints::uniform(0.0, 1.0, n).unwrap()).unwrap();
        r.rel_err[0]
    };
    let (e1, e2) = (err(4), err(8));
    let order = (e1 / e2).log2();
    assert!((order - 2.0 * (p as f64 - 1.0)).abs() < 0.5, "order {order}");
}

#[test]
fn observed_outliers_form_an_upper_block() {
    let r = outlier_report(3, Breakpoints::uniform(0.0, 1.0, 16).unwrap(), 0.10).unwrap();
    assert!(!r.observed_outliers.is_empty());
    // the flagged modes form one block in the upper half of the spectrum
    let first = r.observed_outliers[0];
    let last = *r.observed_outliers.last().unwrap();
    assert_eq!(r.observed_outliers, (first..=last).collect::<Vec<_>>());
    assert!(first >= r.n / 2);
    assert!(r.predicted_non_outliers <= r.n);
}

#[test]
fn predicted_modes_are_accurate_to_one_third() {
    // the rule h λ^{1/4} < π separates the badly resolved tail, but with a
    // 10% threshold a few predicted modes near the cutoff still exceed it
    for p in [3usize, 4] {
        for n in [8usize, 16, 32] {
            let r = outlier_report(p, Breakpoints::uniform(0.0, 1.0, n).unwrap(), 0.10).unwrap();
            for i in 0..r.predicted_non_outliers {
                assert!(r.rel_err[i] < 0.35, "p={p} n={n} mode {}: {}", i + 1, r.rel_err[i]);
            }
            // and the leading half of them is well inside 10%
            for i in 0..r.predicted_non_outliers / 2 {
                assert!(r.rel_err[i] < 0.10);
            }
        }
    }
}

#[test]
fn reference_spectrum() {
    let exact = reference_eigenvalues(40, 1.0);
    let asym = asymptotic_eigenvalues(40, 1.0);
    assert!((exact[0] - 500.5639017404).abs() < 1e-6);
    for (i, (e, a)) in exact.iter().zip(&asym).enumerate().skip(3) {
        assert!((e / a - 1.0).abs() < 1e-6, "mode {}", i + 1);
    }
    assert_eq!(predict_non_outliers(1e-6, &exact).unwrap(), exact.len());
}

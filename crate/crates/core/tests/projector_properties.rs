mod common;

use common::*;
use proptest::prelude::*;
use ritz_spline::analysis::{error_norm, moment_report, MomentKind};
use ritz_spline::projectors::{
    e_polynomial, l2_project, project, q_project, q_tilde_project, ritz_project, ProjectorKind,
    RitzMethod,
};
use ritz_spline::quadrature::{gram_matrix, load_vector};
use ritz_spline::spline::{Breakpoints, Spline, SplineSpace};

fn max_diff(a: &Spline, b: &Spline) -> f64 {
    a.sub(b).unwrap().max_abs_coeff()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn projectors_reproduce_their_space(((space, q), c) in arb_space_q(5, 4).prop_flat_map(|(s, q)| {
        let dim = s.dim();
        (Just((s, q)), arb_coeffs(dim))
    })) {
        let s = Spline::new(space.clone(), c).unwrap();
        let u = spline_function(&s);
        for kind in [ProjectorKind::L2, ProjectorKind::Q, ProjectorKind::Ritz, ProjectorKind::QTilde] {
            let ps = project(kind, &space, q, &u).unwrap();
            prop_assert!(max_diff(&ps, &s) < 1e-8 * s.max_abs_coeff().max(1.0), "{:?}", kind);
        }
    }

    #[test]
    fn q_is_galerkin_in_order_q((space, q) in arb_space_q(5, 5), u in arb_smooth()) {
        let qu = q_project(&space, q, &u).unwrap();
        let n = space.degree() + 20;
        let f = load_vector(&space, q, n, |_, x| Ok(u.eval(x, q)?)).unwrap();
        let aq = gram_matrix(&space, q, n).unwrap().matvec(qu.coeffs());
        let scale = f.iter().fold(1.0f64, |m, v| m.max(v.abs()));
        for (a, b) in f.iter().zip(&aq) {
            prop_assert!((a - b).abs() < 1e-9 * scale);
        }
    }

    #[test]
    fn q_commutes_with_derivative((space, q) in arb_space_q(5, 5), u in arb_smooth()) {
        prop_assume!(q >= 1);
        let lhs = q_project(&space, q, &u).unwrap().derive().unwrap();
        let rhs = q_project(&space.derived().unwrap(), q - 1, &u.derivative().unwrap()).unwrap();
        prop_assert!(max_diff(&lhs, &rhs) < 1e-9 * rhs.max_abs_coeff().max(1.0));
    }

    #[test]
    fn q_interpolates_at_left_end((space, q) in arb_space_q(5, 5), u in arb_smooth()) {
        let qu = q_project(&space, q, &u).unwrap();
        for d in 0..q {
            let (a, b) = (qu.eval(space.a(), d).unwrap(), u.eval(space.a(), d).unwrap());
            prop_assert!((a - b).abs() < 1e-10 * b.abs().max(1.0));
        }
    }

    #[test]
    fn ritz_methods_agree_and_preserve_moments((space, q) in arb_space_q(5, 5), u in arb_smooth()) {
        let rc = ritz_project(&space, q, &u, RitzMethod::Correction).unwrap();
        let rs = ritz_project(&space, q, &u, RitzMethod::Saddle).unwrap();
        prop_assert!(max_diff(&rc, &rs) < 1e-8 * rc.max_abs_coeff().max(1.0));
        let moments = moment_report(&u, &rc, q).unwrap();
        for m in moments.iter().filter(|m| m.kind == MomentKind::Power) {
            prop_assert!(m.residual < 1e-9, "{:?}", m);
        }
    }

    #[test]
    fn e_polynomial_has_degree_below_q((space, q) in arb_space_q(5, 5), u in arb_smooth()) {
        let e = e_polynomial(&space, q, &u).unwrap();
        let scale = e.max_abs_coeff().max(1.0);
        for (i, c) in e.coeffs().iter().enumerate() {
            if i >= q {
                prop_assert!(c.abs() < 1e-12 * scale);
            }
        }
    }

    #[test]
    fn ritz_error_never_exceeds_q_error((space, q) in arb_space_q(5, 5), u in arb_smooth()) {
        let eq = error_norm(&u, &q_project(&space, q, &u).unwrap(), 0).unwrap();
        let er = error_norm(&u, &ritz_project(&space, q, &u, RitzMethod::Correction).unwrap(), 0).unwrap();
        prop_assert!(er <= eq * (1.0 + 1e-8) + 1e-13);
    }

    #[test]
    fn q_tilde_preserves_the_mean((space, q) in arb_space_q(5, 5), u in arb_smooth()) {
        let s = q_tilde_project(&space, q, &u).unwrap();
        let m = moment_report(&u, &s, q).unwrap();
        prop_assert!(m[0].residual < 1e-10);
    }

    #[test]
    fn l2_error_decreases_under_refinement(p in 1usize..5, k_off in 1i32..3, u in arb_smooth()) {
        let k = (p as i32 - k_off).max(-1);
        let mut prev = f64::INFINITY;
        for n in [1usize, 2, 4, 8, 16] {
            let space = SplineSpace::new(p, k, Breakpoints::uniform(0.0, 1.0, n).unwrap()).unwrap();
            let e = error_norm(&u, &l2_project(&space, &u).unwrap(), 0).unwrap();
            prop_assert!(e <= prev * (1.0 + 1e-9) + 1e-14);
            prev = e;
        }
    }
}

#[test]
fn q_rejects_order_beyond_smoothness_chain() {
    let space = SplineSpace::new(3, 0, Breakpoints::uniform(0.0, 1.0, 3).unwrap()).unwrap();
    let u = ritz_spline::functions::SmoothFunction::builtin("sin4x").unwrap();
    let err = q_project(&space, 2, &u).unwrap_err().to_string();
    assert!(err.contains("q <= k+1"), "{err}");
}

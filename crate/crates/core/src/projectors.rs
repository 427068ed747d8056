//! Projectors onto `S^k_{p,Ξ}`.
//!
//! * [`l2_project`]: the `L^2` projector.
//! * [`q_project`]: `Q^{q,k}_p u = u(a) + K Q^{q-1,k-1}_{p-1} ∂u`, which
//!   interpolates `u, ..., u^{(q-1)}` at `a` (and at `b` when the degree is
//!   high enough) and is Galerkin-orthogonal in the order-`q` semi-inner
//!   product.
//! * [`ritz_project`]: the Ritz projector, order-`q` Galerkin orthogonality
//!   plus preservation of the moments against `P_{q-1}`.
//! * [`q_tilde_project`]: the mean-preserving variant of `Q`.
//!
//! `Ritz - Q` is always a polynomial of degree `q - 1`, namely the `L^2`
//! projection onto `P_{q-1}` of the `Q` error; [`e_polynomial`] returns it.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{precondition, Error, Result};
use crate::functions::SmoothFunction;
use crate::quadrature::{default_points, gram_matrix, integrate_elements, load_vector};
use crate::spline::{Breakpoints, Polynomial, Spline, SplineSpace};

/// How [`ritz_project`] computes its result.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RitzMethod {
    /// `R u = Q u + P_{q-1}(u - Q u)`.
    #[default]
    Correction,
    /// Direct solve of the constrained order-`q` Galerkin system.
    Saddle,
}

/// Gauss points per element used when projecting `u` onto `space`.
pub fn quad_points_for(space: &SplineSpace, u: &SmoothFunction) -> usize {
    default_points(space.degree(), u.max_order())
}

fn check_q(space: &SplineSpace, q: usize, u: &SmoothFunction) -> Result<()> {
    let k = space.smoothness();
    if q as i64 > k as i64 + 1 {
        return precondition(format!(
            "requires q <= k+1 (q={q}, k={k}): the recursion leaves the smoothness chain"
        ));
    }
    if q > u.max_order() {
        return precondition(format!(
            "requires q <= available derivative order (q={q}, max={})",
            u.max_order()
        ));
    }
    Ok(())
}

/// `L^2` projection of a (possibly piecewise) function given element-wise.
pub(crate) fn l2_project_with<F>(space: &SplineSpace, n: usize, f: F) -> Result<Spline>
where
    F: FnMut(usize, f64) -> Result<f64>,
{
    let gram = gram_matrix(space, 0, n)?;
    let load = load_vector(space, 0, n, f)?;
    let chol = gram
        .cholesky()
        .map_err(|e| Error::Singular(format!("mass matrix of S^{}_{}: {e}", space.smoothness(), space.degree())))?;
    Spline::new(space.clone(), chol.solve(&load))
}

/// Best `L^2` approximation of `u` in `space`.
pub fn l2_project(space: &SplineSpace, u: &SmoothFunction) -> Result<Spline> {
    let n = quad_points_for(space, u);
    l2_project_with(space, n, |_, x| Ok(u.eval(x, 0)?))
}

/// Shifted Legendre polynomials `P_j((2x - a - b)/(b - a))`, `j = 0..=deg`.
pub fn shifted_legendre(deg: usize, a: f64, b: f64) -> Vec<Polynomial> {
    // coefficients in y = (x - a)/(b - a)
    let mut ys: Vec<Vec<f64>> = vec![vec![1.0]];
    if deg >= 1 {
        ys.push(vec![-1.0, 2.0]);
    }
    for j in 1..deg {
        let (pj, pjm1) = (&ys[j], &ys[j - 1]);
        let mut next = vec![0.0; j + 2];
        for (i, &c) in pj.iter().enumerate() {
            next[i] -= (2 * j + 1) as f64 * c;
            next[i + 1] += 2.0 * (2 * j + 1) as f64 * c;
        }
        for (i, &c) in pjm1.iter().enumerate() {
            next[i] -= j as f64 * c;
        }
        for v in next.iter_mut() {
            *v /= (j + 1) as f64;
        }
        ys.push(next);
    }
    let len = b - a;
    ys.into_iter()
        .map(|cs| {
            let coeffs = cs
                .iter()
                .enumerate()
                .map(|(i, c)| c / len.powi(i as i32))
                .collect();
            Polynomial::new(a, b, coeffs)
        })
        .collect()
}

/// `L^2` projection onto `P_deg` over the interval of `xi`, via a Legendre
/// expansion. `f` is integrated element by element.
pub fn poly_l2_project_with<F>(deg: usize, xi: &Breakpoints, n: usize, mut f: F) -> Result<Polynomial>
where
    F: FnMut(usize, f64) -> Result<f64>,
{
    let (a, b) = (xi.a(), xi.b());
    let basis = shifted_legendre(deg, a, b);
    // evaluate f once per node and accumulate all moments
    let mut moments = vec![0.0; deg + 1];
    let rule = crate::quadrature::GaussRule::new(n)?;
    for (j, (l, r)) in xi.elements().enumerate() {
        for (x, w) in rule.mapped(l, r) {
            let fx = f(j, x)?;
            for (m, pm) in moments.iter_mut().zip(&basis) {
                *m += w * fx * pm.eval(x);
            }
        }
    }
    let len = b - a;
    let mut out = Polynomial::zero(a, b);
    for (jdeg, (m, pj)) in moments.iter().zip(&basis).enumerate() {
        let alpha = m * (2 * jdeg + 1) as f64 / len;
        out = out.add(&pj.scale(alpha));
    }
    Ok(out)
}

/// Best `L^2` approximation of `u` in `P_deg` on `[a, b]`.
pub fn poly_l2_project(deg: usize, u: &SmoothFunction, a: f64, b: f64) -> Result<Polynomial> {
    let xi = Breakpoints::new(vec![a, b])?;
    let n = default_points(deg, u.max_order()).max(deg + 2);
    poly_l2_project_with(deg, &xi, n, |_, x| Ok(u.eval(x, 0)?))
}

/// Best `L^2` approximation of a spline in `P_deg`, exact up to rounding.
pub fn poly_l2_project_spline(deg: usize, s: &Spline) -> Result<Polynomial> {
    let n = (deg + s.space().degree()) / 2 + 1;
    poly_l2_project_with(deg, s.space().breakpoints(), n, |j, x| Ok(s.eval_in_element(j, x, 0)))
}

/// The projector `Q^{q,k}_p`, computed as the unrolled recursion: project
/// `∂^q u` onto `S^{k-q}_{p-q}`, then integrate `q` times from the left,
/// adding `u^{(ℓ)}(a)` at each step.
pub fn q_project(space: &SplineSpace, q: usize, u: &SmoothFunction) -> Result<Spline> {
    check_q(space, q, u)?;
    let n = quad_points_for(space, u);
    let a = space.a();
    let derived = space.derived_n(q)?;
    let mut s = l2_project_with(&derived, n, |_, x| Ok(u.eval(x, q)?))?;
    for i in 1..=q {
        s = s.integrate_from_left()?.add_constant(u.eval(a, q - i)?);
    }
    debug_assert_eq!(s.space(), space);
    Ok(s)
}

/// The polynomial `E_{q-1} u = R u - Q u = P_{q-1}(u - Q u)` given `Q u`.
fn correction_polynomial(
    space: &SplineSpace,
    q: usize,
    u: &SmoothFunction,
    qu: &Spline,
) -> Result<Polynomial> {
    let (a, b) = (space.a(), space.b());
    if q == 0 {
        return Ok(Polynomial::zero(a, b));
    }
    let n = quad_points_for(space, u);
    poly_l2_project_with(q - 1, space.breakpoints(), n, |j, x| {
        Ok(u.eval(x, 0)? - qu.eval_in_element(j, x, 0))
    })
}

/// `E_{q-1} u = R u - Q u`, a polynomial of degree at most `q - 1`.
pub fn e_polynomial(space: &SplineSpace, q: usize, u: &SmoothFunction) -> Result<Polynomial> {
    let qu = q_project(space, q, u)?;
    correction_polynomial(space, q, u, &qu)
}

/// The Ritz projector `R^{q,k}_p`.
pub fn ritz_project(
    space: &SplineSpace,
    q: usize,
    u: &SmoothFunction,
    method: RitzMethod,
) -> Result<Spline> {
    check_q(space, q, u)?;
    match method {
        RitzMethod::Correction => {
            let qu = q_project(space, q, u)?;
            let e = correction_polynomial(space, q, u, &qu)?;
            if q == 0 {
                return Ok(qu);
            }
            qu.add(&Spline::from_polynomial(space.clone(), &e)?)
        }
        RitzMethod::Saddle => ritz_saddle(space, q, u),
    }
}

/// Assemble and solve
///
/// ```text
/// [ A_q  C^T ] [c]   [f]
/// [ C    0   ] [μ] = [g]
/// ```
///
/// with `A_q` the order-`q` stiffness matrix, `f_i = (∂^q u, ∂^q B_i)`,
/// `C_mi = (B_i, L_m)`, `g_m = (u, L_m)` and `L_m` the shifted Legendre
/// polynomials of degree `m < q`.
fn ritz_saddle(space: &SplineSpace, q: usize, u: &SmoothFunction) -> Result<Spline> {
    let n = quad_points_for(space, u);
    let dim = space.dim();
    let (a, b) = (space.a(), space.b());
    let xi = space.breakpoints();
    let stiff = gram_matrix(space, q, n)?;
    let f = load_vector(space, q, n, |_, x| Ok(u.eval(x, q)?))?;
    let legendre = if q > 0 { shifted_legendre(q - 1, a, b) } else { Vec::new() };

    let size = dim + q;
    let mut m = DMatrix::zeros(size, size);
    let mut rhs = DVector::zeros(size);
    for i in 0..dim {
        let lo = i.saturating_sub(stiff.bandwidth());
        let hi = (i + stiff.bandwidth()).min(dim - 1);
        for j in lo..=hi {
            m[(i, j)] = stiff.get(i, j);
        }
        rhs[i] = f[i];
    }
    for (mi, lm) in legendre.iter().enumerate() {
        let row = load_vector(space, 0, n, |_, x| Ok(lm.eval(x)))?;
        for (i, v) in row.into_iter().enumerate() {
            m[(dim + mi, i)] = v;
            m[(i, dim + mi)] = v;
        }
        rhs[dim + mi] = integrate_elements(xi, n, |_, x| Ok(u.eval(x, 0)? * lm.eval(x)))?;
    }
    let sol = m
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::Singular(format!("Ritz saddle-point system (dim={dim}, q={q})")))?;
    Spline::new(space.clone(), sol.rows(0, dim).iter().copied().collect())
}

/// `Q̃^q u = c(u) + K Q^{q-1} ∂u` with `c(u)` fixed by `(Q̃ u, 1) = (u, 1)`.
pub fn q_tilde_project(space: &SplineSpace, q: usize, u: &SmoothFunction) -> Result<Spline> {
    check_q(space, q, u)?;
    if q == 0 {
        return l2_project(space, u);
    }
    let w = q_project(&space.derived()?, q - 1, &u.derivative()?)?.integrate_from_left()?;
    let n = quad_points_for(space, u);
    let mean_u = integrate_elements(space.breakpoints(), n, |_, x| Ok(u.eval(x, 0)?))?;
    let c = (mean_u - w.integral()) / space.breakpoints().length();
    Ok(w.add_constant(c))
}

/// The projector families, for callers that select one at runtime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProjectorKind {
    L2,
    Q,
    Ritz,
    QTilde,
}

impl ProjectorKind {
    pub fn name(self) -> &'static str {
        match self {
            ProjectorKind::L2 => "l2",
            ProjectorKind::Q => "q",
            ProjectorKind::Ritz => "ritz",
            ProjectorKind::QTilde => "qtilde",
        }
    }
}

impl std::str::FromStr for ProjectorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "l2" => Ok(ProjectorKind::L2),
            "q" => Ok(ProjectorKind::Q),
            "ritz" | "r" => Ok(ProjectorKind::Ritz),
            "qtilde" => Ok(ProjectorKind::QTilde),
            other => precondition(format!(
                "unknown projector `{other}`; expected one of l2, q, ritz, qtilde"
            )),
        }
    }
}

/// Apply the selected projector. `q` is ignored for [`ProjectorKind::L2`].
pub fn project(kind: ProjectorKind, space: &SplineSpace, q: usize, u: &SmoothFunction) -> Result<Spline> {
    match kind {
        ProjectorKind::L2 => l2_project(space, u),
        ProjectorKind::Q => q_project(space, q, u),
        ProjectorKind::Ritz => ritz_project(space, q, u, RitzMethod::default()),
        ProjectorKind::QTilde => q_tilde_project(space, q, u),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly_space(p: usize) -> SplineSpace {
        SplineSpace::polynomials(p, 0.0, 1.0).unwrap()
    }

    fn mono(s: &Spline) -> Vec<f64> {
        s.local_polynomials()[0].monomial_coeffs()
    }

    fn assert_coeffs(got: &[f64], want: &[f64], tol: f64) {
        for i in 0..got.len().max(want.len()) {
            let g = got.get(i).copied().unwrap_or(0.0);
            let w = want.get(i).copied().unwrap_or(0.0);
            assert!((g - w).abs() <= tol, "coeff {i}: {g} vs {w} ({got:?})");
        }
    }

    #[test]
    fn l2_of_identity_onto_constants() {
        let u = SmoothFunction::polynomial(vec![0.0, 1.0]);
        let s = l2_project(&poly_space(0), &u).unwrap();
        assert!((s.coeffs()[0] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn l2_reproduces_space_members() {
        let space = SplineSpace::new(3, 1, Breakpoints::uniform(0.0, 1.0, 3).unwrap()).unwrap();
        let coeffs = vec![0.3, -1.0, 2.0, 0.5, 0.0, 1.5, -0.25, 0.75];
        let s = Spline::new(space.clone(), coeffs.clone()).unwrap();
        let s2 = s.clone();
        let back = l2_project_with(&space, 6, |j, x| Ok(s2.eval_in_element(j, x, 0))).unwrap();
        assert_coeffs(back.coeffs(), &coeffs, 1e-10);
    }

    #[test]
    fn shifted_legendre_is_orthogonal() {
        let ls = shifted_legendre(4, 0.5, 2.0);
        let rule = crate::quadrature::GaussRule::new(6).unwrap();
        for i in 0..5 {
            for j in 0..5 {
                let v = rule.integrate(0.5, 2.0, |x| ls[i].eval(x) * ls[j].eval(x));
                let expected = if i == j { 1.5 / (2 * i + 1) as f64 } else { 0.0 };
                assert!((v - expected).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn poly_projection_examples() {
        let sq = SmoothFunction::polynomial(vec![0.0, 0.0, 1.0]);
        let p = poly_l2_project(1, &sq, 0.0, 1.0).unwrap();
        assert_coeffs(&p.monomial_coeffs(), &[-1.0 / 6.0, 1.0], 1e-14);

        let sin = SmoothFunction::builtin("sin4x").unwrap();
        let p0 = poly_l2_project(0, &sin, 0.0, 1.0).unwrap();
        assert!((p0.coeffs()[0] - (1.0 - 4f64.cos()) / 4.0).abs() < 1e-12);

        let cubic = SmoothFunction::polynomial(vec![1.0, -1.0, 0.5, 2.0]);
        let p3 = poly_l2_project(3, &cubic, 0.0, 1.0).unwrap();
        assert_coeffs(&p3.monomial_coeffs(), &[1.0, -1.0, 0.5, 2.0], 1e-12);
    }

    #[test]
    fn q_rejects_bad_order() {
        let space = SplineSpace::new(3, 0, Breakpoints::uniform(0.0, 1.0, 2).unwrap()).unwrap();
        let u = SmoothFunction::builtin("sin4x").unwrap();
        assert!(matches!(q_project(&space, 2, &u), Err(Error::Precondition(_))));
        let lin = SmoothFunction::from_expr("x").unwrap().derivative_n(12).unwrap();
        assert!(q_project(&space, 1, &lin).is_err());
    }

    #[test]
    fn q_on_linear_polynomials() {
        let u = SmoothFunction::builtin("exp").unwrap();
        let s = q_project(&poly_space(1), 1, &u).unwrap();
        let e = std::f64::consts::E;
        assert_coeffs(&mono(&s), &[1.0, e - 1.0], 1e-13);
    }

    #[test]
    fn x6_closed_forms() {
        let u = SmoothFunction::builtin("x6").unwrap();
        let q2 = q_project(&poly_space(2), 2, &u).unwrap();
        assert_coeffs(&mono(&q2), &[0.0, 0.0, 3.0], 1e-12);
        let q4 = q_project(&poly_space(4), 2, &u).unwrap();
        assert_coeffs(&mono(&q4), &[0.0, 0.0, 9.0 / 7.0, -32.0 / 7.0, 30.0 / 7.0], 1e-12);

        let e2 = e_polynomial(&poly_space(2), 2, &u).unwrap();
        assert_coeffs(&e2.monomial_coeffs(), &[9.0 / 28.0, -33.0 / 14.0], 1e-12);
        let e5 = e_polynomial(&poly_space(5), 2, &u).unwrap();
        assert!(e5.max_abs_coeff() < 1e-12);

        for method in [RitzMethod::Correction, RitzMethod::Saddle] {
            let r3 = ritz_project(&poly_space(3), 2, &u, method).unwrap();
            assert_coeffs(&mono(&r3), &[17.0 / 140.0, 3.0 / 70.0, -3.0, 4.0], 1e-10);
        }
    }

    #[test]
    fn q_tilde_examples() {
        let u = SmoothFunction::builtin("sin4x").unwrap();
        let q = q_project(&poly_space(2), 1, &u).unwrap();
        let qt = q_tilde_project(&poly_space(2), 1, &u).unwrap();
        assert_coeffs(qt.coeffs(), q.coeffs(), 1e-12);

        let q1 = q_project(&poly_space(1), 1, &u).unwrap();
        let qt1 = q_tilde_project(&poly_space(1), 1, &u).unwrap();
        let mean_u = (1.0 - 4f64.cos()) / 4.0;
        assert!((q1.integral() - mean_u).abs() > 1e-3);
        assert!((qt1.integral() - mean_u).abs() < 1e-12);

        let c = SmoothFunction::polynomial(vec![2.5]);
        let s = q_tilde_project(&SplineSpace::new(3, 1, Breakpoints::uniform(0.0, 1.0, 3).unwrap()).unwrap(), 2, &c).unwrap();
        assert!(s.coeffs().iter().all(|v| (v - 2.5).abs() < 1e-12));
    }
}

//! Gauss–Legendre rules, element-wise integration over a breakpoint
//! sequence, and assembly of B-spline Gram matrices `(∂^q B_i, ∂^q B_j)`.

use crate::error::{precondition, Result};
use crate::linalg::BandedSym;
use crate::spline::{Breakpoints, SplineSpace};

/// Environment variable overriding the default number of Gauss points
/// per element used by the projectors.
pub const QUAD_ORDER_ENV: &str = "RITZ_SPLINE_QUAD_ORDER";

pub const MAX_GAUSS_POINTS: usize = 64;

/// An `n`-point Gauss–Legendre rule on `[-1, 1]`, exact for polynomials of
/// degree `2n - 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

/// Legendre polynomial `P_n(x)` and its derivative.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

impl GaussRule {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_GAUSS_POINTS {
            return precondition(format!(
                "gauss rule order n={n} outside 1..={MAX_GAUSS_POINTS}"
            ));
        }
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let half = n.div_ceil(2);
        for i in 0..half {
            // Tricomi start, then Newton kept inside the bracket between
            // neighbouring Chebyshev-Gauss angles
            let theta = std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5);
            let mut x = theta.cos();
            let lo = (std::f64::consts::PI * (i + 1) as f64 / (n as f64 + 0.5)).cos();
            let hi = (std::f64::consts::PI * i as f64 / (n as f64 + 0.5)).cos();
            for _ in 0..100 {
                let (p, dp) = legendre_with_derivative(n, x);
                let mut next = x - p / dp;
                if !(next > lo && next < hi) {
                    next = 0.5 * (x + if p * dp > 0.0 { lo } else { hi });
                }
                let done = (next - x).abs() <= 1e-16;
                x = next;
                if done {
                    break;
                }
            }
            let (_, dp) = legendre_with_derivative(n, x);
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Ok(Self { nodes, weights })
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Nodes and weights mapped to `[l, r]`.
    pub fn mapped(&self, l: f64, r: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let mid = 0.5 * (l + r);
        let half = 0.5 * (r - l);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(x, w)| (mid + half * x, half * w))
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, l: f64, r: f64, mut f: F) -> f64 {
        self.mapped(l, r).map(|(x, w)| w * f(x)).sum()
    }
}

/// Sum of per-element Gauss approximations. The integrand also receives
/// the element index so that piecewise objects can be evaluated on the
/// correct piece.
pub fn integrate_elements<F>(xi: &Breakpoints, n: usize, mut f: F) -> Result<f64>
where
    F: FnMut(usize, f64) -> Result<f64>,
{
    let rule = GaussRule::new(n)?;
    let mut total = 0.0;
    for (j, (l, r)) in xi.elements().enumerate() {
        for (x, w) in rule.mapped(l, r) {
            total += w * f(j, x)?;
        }
    }
    Ok(total)
}

/// `(f, g) = ∫_a^b f g` with an `n`-point rule on every element of `xi`.
pub fn inner_product<F, G, E>(f: F, g: G, xi: &Breakpoints, n: usize) -> Result<f64>
where
    F: Fn(f64) -> std::result::Result<f64, E>,
    G: Fn(f64) -> std::result::Result<f64, E>,
    crate::Error: From<E>,
{
    integrate_elements(xi, n, |_, x| Ok(f(x)? * g(x)?))
}

/// Default number of Gauss points per element, `p + r + 2`, for a target
/// function of declared regularity `r`. Overridden by
/// `RITZ_SPLINE_QUAD_ORDER`.
pub fn default_points(degree: usize, regularity: usize) -> usize {
    if let Some(n) = std::env::var(QUAD_ORDER_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|n| (1..=MAX_GAUSS_POINTS).contains(n))
    {
        return n;
    }
    (degree + regularity + 2).min(MAX_GAUSS_POINTS)
}

/// Gram matrix `G_ij = (∂^deriv B_i, ∂^deriv B_j)` in banded storage.
pub fn gram_matrix(space: &SplineSpace, deriv: usize, n: usize) -> Result<BandedSym> {
    let p = space.degree();
    if deriv > p {
        return precondition(format!("gram matrix requires deriv <= p (deriv={deriv}, p={p})"));
    }
    if n < p + 1 {
        return precondition(format!("gram matrix requires n >= p+1 (n={n}, p={p})"));
    }
    let rule = GaussRule::new(n)?;
    let mut g = BandedSym::zeros(space.dim(), p);
    for (j, (l, r)) in space.breakpoints().elements().enumerate() {
        let first = space.first_index(j);
        for (x, w) in rule.mapped(l, r) {
            let ders = space.basis_derivs_in_element(j, x, deriv);
            let vals = &ders[deriv];
            for a in 0..=p {
                for b in 0..=a {
                    g.add(first + a, first + b, w * vals[a] * vals[b]);
                }
            }
        }
    }
    Ok(g)
}

/// Load vector `(f, ∂^deriv B_i)` where `f` may depend on the element.
pub fn load_vector<F>(space: &SplineSpace, deriv: usize, n: usize, mut f: F) -> Result<Vec<f64>>
where
    F: FnMut(usize, f64) -> Result<f64>,
{
    let p = space.degree();
    let rule = GaussRule::new(n)?;
    let mut load = vec![0.0; space.dim()];
    for (j, (l, r)) in space.breakpoints().elements().enumerate() {
        let first = space.first_index(j);
        for (x, w) in rule.mapped(l, r) {
            let fx = f(j, x)?;
            if deriv > p {
                continue;
            }
            let ders = space.basis_derivs_in_element(j, x, deriv);
            for (a, v) in ders[deriv].iter().enumerate() {
                load[first + a] += w * fx * v;
            }
        }
    }
    Ok(load)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_and_two_point_rules() {
        let g1 = GaussRule::new(1).unwrap();
        assert_eq!(g1.nodes(), &[0.0]);
        assert!((g1.weights()[0] - 2.0).abs() < 1e-15);
        let g2 = GaussRule::new(2).unwrap();
        assert!((g2.nodes()[1] - 0.5773502691896258).abs() < 1e-15);
        assert!((g2.nodes()[0] + 0.5773502691896258).abs() < 1e-15);
        assert!((g2.weights()[0] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(GaussRule::new(0).is_err());
        assert!(GaussRule::new(65).is_err());
    }

    #[test]
    fn odd_symmetry() {
        let g = GaussRule::new(5).unwrap();
        assert!(g.integrate(-1.0, 1.0, |x| x.powi(9)).abs() < 1e-14);
    }

    #[test]
    fn rule_invariants_all_orders() {
        for n in 1..=MAX_GAUSS_POINTS {
            let g = GaussRule::new(n).unwrap();
            let wsum: f64 = g.weights().iter().sum();
            assert!((wsum - 2.0).abs() < 1e-14, "n={n} weight sum {wsum}");
            assert!(g.weights().iter().all(|w| *w > 0.0));
            for i in 0..n {
                assert!((g.nodes()[i] + g.nodes()[n - 1 - i]).abs() < 1e-14);
            }
            for d in 0..2 * n {
                let exact = if d % 2 == 1 { 0.0 } else { 2.0 / (d + 1) as f64 };
                let got = g.integrate(-1.0, 1.0, |x| x.powi(d as i32));
                assert!((got - exact).abs() < 1e-13, "n={n} d={d}: {got} vs {exact}");
            }
        }
    }

    #[test]
    fn inner_products() {
        let xi = Breakpoints::uniform(0.0, 1.0, 1).unwrap();
        let one = |_: f64| Ok::<f64, crate::Error>(1.0);
        assert!((inner_product(one, one, &xi, 3).unwrap() - 1.0).abs() < 1e-15);
        let id = |x: f64| Ok::<f64, crate::Error>(x);
        assert!((inner_product(id, id, &xi, 2).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        let s = |x: f64| Ok::<f64, crate::Error>((4.0 * x).sin());
        let expected = (1.0 - 4f64.cos()) / 4.0;
        assert!((inner_product(s, one, &xi, 20).unwrap() - expected).abs() < 1e-12);
    }

    #[test]
    fn small_gram_matrices() {
        let xi = Breakpoints::uniform(0.0, 1.0, 1).unwrap();
        let p0 = SplineSpace::new(0, -1, xi.clone()).unwrap();
        assert!((gram_matrix(&p0, 0, 1).unwrap().get(0, 0) - 1.0).abs() < 1e-15);

        let p1 = SplineSpace::new(1, 0, xi).unwrap();
        let m = gram_matrix(&p1, 0, 2).unwrap();
        assert!((m.get(0, 0) - 1.0 / 3.0).abs() < 1e-15);
        assert!((m.get(0, 1) - 1.0 / 6.0).abs() < 1e-15);
        assert!((m.get(1, 1) - 1.0 / 3.0).abs() < 1e-15);
        let k = gram_matrix(&p1, 1, 2).unwrap();
        assert!((k.get(0, 0) - 1.0).abs() < 1e-15);
        assert!((k.get(0, 1) + 1.0).abs() < 1e-15);
        let ones = k.matvec(&[1.0, 1.0]);
        assert!(ones.iter().all(|v| v.abs() < 1e-15));
    }

    #[test]
    fn gram_preconditions() {
        let s = SplineSpace::new(2, 1, Breakpoints::uniform(0.0, 1.0, 2).unwrap()).unwrap();
        assert!(gram_matrix(&s, 3, 4).is_err());
        assert!(gram_matrix(&s, 1, 2).is_err());
    }
}

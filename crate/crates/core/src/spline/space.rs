use serde::Serialize;

use super::Breakpoints;
use crate::error::{Error, Result};

/// Largest supported degree. Gram and stiffness matrices lose too much
/// accuracy in double precision beyond this.
pub const MAX_DEGREE: usize = 20;

/// The space `S^k_{p,Ξ}` of piecewise polynomials of degree `p` that are
/// `C^k` across every interior breakpoint, with its clamped B-spline basis.
///
/// `k = -1` gives discontinuous piecewise polynomials and `k = p - 1` the
/// maximally smooth splines. With no interior breakpoints the space is
/// just `P_p` on `[a, b]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SplineSpace {
    degree: usize,
    smoothness: i32,
    breakpoints: Breakpoints,
    knots: Vec<f64>,
    dim: usize,
}

impl SplineSpace {
    pub fn new(degree: usize, smoothness: i32, breakpoints: Breakpoints) -> Result<Self> {
        if degree > MAX_DEGREE {
            return Err(Error::Space(format!(
                "degree {degree} exceeds the supported maximum {MAX_DEGREE}"
            )));
        }
        if smoothness < -1 || smoothness > degree as i32 - 1 {
            return Err(Error::Space(format!(
                "smoothness k={smoothness} must satisfy -1 <= k <= p-1 = {}",
                degree as i32 - 1
            )));
        }
        let mult = (degree as i32 - smoothness) as usize;
        let pts = breakpoints.points();
        let interior = breakpoints.num_interior();
        let dim = degree + 1 + interior * mult;

        let mut knots = Vec::with_capacity(dim + degree + 1);
        knots.extend(std::iter::repeat(breakpoints.a()).take(degree + 1));
        for &x in &pts[1..pts.len() - 1] {
            knots.extend(std::iter::repeat(x).take(mult));
        }
        knots.extend(std::iter::repeat(breakpoints.b()).take(degree + 1));
        debug_assert_eq!(knots.len(), dim + degree + 1);

        Ok(Self {
            degree,
            smoothness,
            breakpoints,
            knots,
            dim,
        })
    }

    /// `P_p` on `[a, b]`, i.e. a space without interior breakpoints.
    pub fn polynomials(degree: usize, a: f64, b: f64) -> Result<Self> {
        Self::new(degree, degree as i32 - 1, Breakpoints::new(vec![a, b])?)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn smoothness(&self) -> i32 {
        self.smoothness
    }

    pub fn breakpoints(&self) -> &Breakpoints {
        &self.breakpoints
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn a(&self) -> f64 {
        self.breakpoints.a()
    }

    pub fn b(&self) -> f64 {
        self.breakpoints.b()
    }

    /// Multiplicity of each interior knot, `p - k`.
    pub fn interior_multiplicity(&self) -> usize {
        (self.degree as i32 - self.smoothness) as usize
    }

    /// True when `P_deg` is contained in the space.
    pub fn contains_polynomials(&self, deg: i64) -> bool {
        deg <= self.degree as i64
    }

    /// `S^{k-1}_{p-1,Ξ}`, the image of the derivative.
    pub fn derived(&self) -> Result<Self> {
        if self.degree == 0 || self.smoothness < 0 {
            return Err(Error::Precondition(format!(
                "derivative of S^{}_{} leaves the space chain (requires p >= 1 and k >= 0)",
                self.smoothness, self.degree
            )));
        }
        Self::new(self.degree - 1, self.smoothness - 1, self.breakpoints.clone())
    }

    /// `S^{k-q}_{p-q,Ξ}`, the image of `∂^q`.
    pub fn derived_n(&self, q: usize) -> Result<Self> {
        (0..q).try_fold(self.clone(), |s, _| s.derived())
    }

    /// `S^{k+1}_{p+1,Ξ}`, the image of integration from the left.
    pub fn integrated(&self) -> Result<Self> {
        Self::new(self.degree + 1, self.smoothness + 1, self.breakpoints.clone())
    }

    /// Knot span index `μ` with `t_μ = ξ_j < t_{μ+1} = ξ_{j+1}`.
    pub fn span_of_element(&self, element: usize) -> usize {
        self.degree + element * self.interior_multiplicity()
    }

    /// Index of the first basis function supported on `element`.
    pub fn first_index(&self, element: usize) -> usize {
        element * self.interior_multiplicity()
    }

    /// Range of basis indices whose support includes element `element`.
    pub fn active_range(&self, element: usize) -> std::ops::Range<usize> {
        let f = self.first_index(element);
        f..f + self.degree + 1
    }

    /// Basis values (and derivatives) on a given element. `x` is not
    /// required to lie inside the element; the element polynomial is
    /// evaluated, which is what broken evaluation needs at breakpoints.
    ///
    /// Returns `ders[d][r]` for `d = 0..=nderiv`, `r = 0..=p`, referring to
    /// basis function `first_index(element) + r`.
    pub fn basis_derivs_in_element(&self, element: usize, x: f64, nderiv: usize) -> Vec<Vec<f64>> {
        let p = self.degree;
        let span = self.span_of_element(element);
        let t = &self.knots;
        let mut ders = vec![vec![0.0; p + 1]; nderiv + 1];

        let mut ndu = vec![vec![0.0; p + 1]; p + 1];
        let mut left = vec![0.0; p + 1];
        let mut right = vec![0.0; p + 1];
        ndu[0][0] = 1.0;
        for j in 1..=p {
            left[j] = x - t[span + 1 - j];
            right[j] = t[span + j] - x;
            let mut saved = 0.0;
            for r in 0..j {
                ndu[j][r] = right[r + 1] + left[j - r];
                let temp = ndu[r][j - 1] / ndu[j][r];
                ndu[r][j] = saved + right[r + 1] * temp;
                saved = left[j - r] * temp;
            }
            ndu[j][j] = saved;
        }
        for j in 0..=p {
            ders[0][j] = ndu[j][p];
        }

        let n = nderiv.min(p);
        let mut a = [vec![0.0; p + 1], vec![0.0; p + 1]];
        for r in 0..=p {
            let (mut s1, mut s2) = (0usize, 1usize);
            a[0][0] = 1.0;
            for k in 1..=n {
                let mut d = 0.0;
                let rk = r as isize - k as isize;
                let pk = p - k;
                if rk >= 0 {
                    a[s2][0] = a[s1][0] / ndu[pk + 1][rk as usize];
                    d = a[s2][0] * ndu[rk as usize][pk];
                }
                let j1 = if rk >= -1 { 1 } else { (-rk) as usize };
                let j2 = if r as isize - 1 <= pk as isize { k - 1 } else { p - r };
                for j in j1..=j2 {
                    let idx = (rk + j as isize) as usize;
                    a[s2][j] = (a[s1][j] - a[s1][j - 1]) / ndu[pk + 1][idx];
                    d += a[s2][j] * ndu[idx][pk];
                }
                if r <= pk {
                    a[s2][k] = -a[s1][k - 1] / ndu[pk + 1][r];
                    d += a[s2][k] * ndu[r][pk];
                }
                ders[k][r] = d;
                std::mem::swap(&mut s1, &mut s2);
            }
        }
        let mut factor = p as f64;
        for k in 1..=n {
            for v in ders[k].iter_mut() {
                *v *= factor;
            }
            factor *= (p - k) as f64;
        }
        ders
    }

    /// The `p + 1` possibly nonzero values of `∂^deriv B_i(x)` and the index
    /// of the first one. Derivatives above the smoothness are taken from the
    /// element containing `x` (right element at interior breakpoints, left
    /// element at `b`).
    pub fn eval_basis(&self, x: f64, deriv: usize) -> Result<(usize, Vec<f64>)> {
        let j = self.breakpoints.element_of(x)?;
        let mut ders = self.basis_derivs_in_element(j, x, deriv);
        Ok((self.first_index(j), ders.swap_remove(deriv)))
    }

    /// Greville abscissae, the knot averages `(t_{i+1} + ... + t_{i+p}) / p`.
    pub fn greville(&self) -> Vec<f64> {
        let p = self.degree;
        if p == 0 {
            return (0..self.dim)
                .map(|i| 0.5 * (self.knots[i] + self.knots[i + 1]))
                .collect();
        }
        (0..self.dim)
            .map(|i| self.knots[i + 1..=i + p].iter().sum::<f64>() / p as f64)
            .collect()
    }

    /// Whether every element of `self` is also an element of `other`.
    pub fn is_subspace_of(&self, other: &SplineSpace) -> Result<()> {
        let tol = 1e-14 * self.breakpoints.length().abs().max(1.0);
        if (self.a() - other.a()).abs() > tol || (self.b() - other.b()).abs() > tol {
            return Err(Error::NotSubspace("intervals differ".into()));
        }
        if other.degree < self.degree {
            return Err(Error::NotSubspace(format!(
                "target degree {} is below source degree {}",
                other.degree, self.degree
            )));
        }
        if !self.breakpoints.is_subset_of(&other.breakpoints) {
            return Err(Error::NotSubspace(
                "source breakpoints are not all target breakpoints".into(),
            ));
        }
        if self.breakpoints.num_interior() > 0 && other.smoothness > self.smoothness {
            return Err(Error::NotSubspace(format!(
                "target smoothness {} exceeds source smoothness {} at shared breakpoints",
                other.smoothness, self.smoothness
            )));
        }
        Ok(())
    }
}

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use super::{Polynomial, SplineSpace};
use crate::error::{Error, Result};

/// An element of a [`SplineSpace`], stored as B-spline coefficients.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Spline {
    space: SplineSpace,
    coeffs: Vec<f64>,
}

impl Spline {
    pub fn new(space: SplineSpace, coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.len() != space.dim() {
            return Err(Error::Space(format!(
                "expected {} coefficients, got {}",
                space.dim(),
                coeffs.len()
            )));
        }
        Ok(Self { space, coeffs })
    }

    pub fn zero(space: SplineSpace) -> Self {
        let coeffs = vec![0.0; space.dim()];
        Self { space, coeffs }
    }

    /// The constant function `value` (partition of unity).
    pub fn constant(space: SplineSpace, value: f64) -> Self {
        let coeffs = vec![value; space.dim()];
        Self { space, coeffs }
    }

    /// Represent a function known to be piecewise in the space (for example
    /// a polynomial, or a spline from a subspace). On every element the
    /// `p + 1` active coefficients are recovered by collocation at Chebyshev
    /// points; the result is exact when `f` belongs to the space.
    pub fn from_piecewise<F>(space: SplineSpace, f: F) -> Result<Self>
    where
        F: Fn(usize, f64) -> f64,
    {
        let p = space.degree();
        let mut coeffs = vec![0.0; space.dim()];
        let mut assigned = vec![false; space.dim()];
        for (j, (l, r)) in space.breakpoints().elements().enumerate() {
            let range = space.active_range(j);
            if range.clone().all(|i| assigned[i]) {
                continue;
            }
            let mid = 0.5 * (l + r);
            let half = 0.5 * (r - l);
            let nodes: Vec<f64> = (0..=p)
                .map(|m| {
                    let theta = std::f64::consts::PI * (2 * m + 1) as f64 / (2 * (p + 1)) as f64;
                    mid + half * theta.cos()
                })
                .collect();
            let mut a = DMatrix::zeros(p + 1, p + 1);
            let mut rhs = DVector::zeros(p + 1);
            for (row, &x) in nodes.iter().enumerate() {
                let vals = space.basis_derivs_in_element(j, x, 0);
                for c in 0..=p {
                    a[(row, c)] = vals[0][c];
                }
                rhs[row] = f(j, x);
            }
            let sol = a
                .lu()
                .solve(&rhs)
                .ok_or_else(|| Error::Singular(format!("local collocation on element {j}")))?;
            for (c, i) in range.enumerate() {
                if !assigned[i] {
                    coeffs[i] = sol[c];
                    assigned[i] = true;
                }
            }
        }
        Ok(Self { space, coeffs })
    }

    /// Embed a polynomial on the space's interval.
    pub fn from_polynomial(space: SplineSpace, poly: &Polynomial) -> Result<Self> {
        if poly.degree_bound() > space.degree() as isize {
            return Err(Error::NotSubspace(format!(
                "polynomial of degree {} does not fit degree {}",
                poly.degree_bound(),
                space.degree()
            )));
        }
        Self::from_piecewise(space, |_, x| poly.eval(x))
    }

    pub fn space(&self) -> &SplineSpace {
        &self.space
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<f64> {
        self.coeffs
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    /// `∂^deriv s(x)`; derivatives above the smoothness use the element
    /// containing `x`.
    pub fn eval(&self, x: f64, deriv: usize) -> Result<f64> {
        let j = self.space.breakpoints().element_of(x)?;
        Ok(self.eval_in_element(j, x, deriv))
    }

    /// Evaluate the polynomial piece of element `j` (or its derivative) at `x`.
    pub fn eval_in_element(&self, element: usize, x: f64, deriv: usize) -> f64 {
        if deriv > self.space.degree() {
            return 0.0;
        }
        let ders = self.space.basis_derivs_in_element(element, x, deriv);
        let first = self.space.first_index(element);
        ders[deriv]
            .iter()
            .zip(&self.coeffs[first..])
            .map(|(b, c)| b * c)
            .sum()
    }

    /// `∂s` in `S^{k-1}_{p-1,Ξ}`.
    pub fn derive(&self) -> Result<Self> {
        let target = self.space.derived()?;
        let p = self.space.degree();
        let t = self.space.knots();
        let coeffs = (0..self.coeffs.len() - 1)
            .map(|i| p as f64 * (self.coeffs[i + 1] - self.coeffs[i]) / (t[i + p + 1] - t[i + 1]))
            .collect();
        Self::new(target, coeffs)
    }

    /// `Ks(x) = ∫_a^x s` in `S^{k+1}_{p+1,Ξ}`.
    pub fn integrate_from_left(&self) -> Result<Self> {
        let target = self.space.integrated()?;
        let p = self.space.degree();
        let t = self.space.knots();
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        let mut acc = 0.0;
        coeffs.push(acc);
        for (i, c) in self.coeffs.iter().enumerate() {
            acc += c * (t[i + p + 1] - t[i]) / (p + 1) as f64;
            coeffs.push(acc);
        }
        Self::new(target, coeffs)
    }

    /// `∫_a^b s`.
    pub fn integral(&self) -> f64 {
        let p = self.space.degree();
        let t = self.space.knots();
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c * (t[i + p + 1] - t[i]))
            .sum::<f64>()
            / (p + 1) as f64
    }

    /// The same function expressed in a superspace.
    pub fn embed(&self, target: &SplineSpace) -> Result<Self> {
        self.space.is_subspace_of(target)?;
        if self.space == *target {
            return Ok(self.clone());
        }
        let src = self;
        Self::from_piecewise(target.clone(), |_, x| {
            // sample points are interior to target elements, hence interior
            // to source elements as well
            src.eval(x, 0).unwrap_or(f64::NAN)
        })
    }

    /// Local Taylor form of every element, `s|_{I_j}` around `ξ_j`.
    pub fn local_polynomials(&self) -> Vec<Polynomial> {
        let p = self.space.degree();
        self.space
            .breakpoints()
            .elements()
            .enumerate()
            .map(|(j, (l, r))| {
                let ders = self.space.basis_derivs_in_element(j, l, p);
                let first = self.space.first_index(j);
                let mut fact = 1.0;
                let coeffs = (0..=p)
                    .map(|d| {
                        if d > 0 {
                            fact *= d as f64;
                        }
                        ders[d]
                            .iter()
                            .zip(&self.coeffs[first..])
                            .map(|(b, c)| b * c)
                            .sum::<f64>()
                            / fact
                    })
                    .collect();
                Polynomial::new(l, r, coeffs)
            })
            .collect()
    }

    fn check_same_space(&self, other: &Self) -> Result<()> {
        if self.space != other.space {
            return Err(Error::Space("operands live in different spaces".into()));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_space(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Self::new(self.space.clone(), coeffs)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_space(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        Self::new(self.space.clone(), coeffs)
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self {
            space: self.space.clone(),
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
        }
    }

    pub fn add_constant(&self, value: f64) -> Self {
        Self {
            space: self.space.clone(),
            coeffs: self.coeffs.iter().map(|c| c + value).collect(),
        }
    }
}

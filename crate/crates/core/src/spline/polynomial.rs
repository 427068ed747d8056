use serde::Serialize;

use crate::quadrature::GaussRule;

/// A polynomial on `[a, b]` stored in the shifted monomial basis
/// `(x - a)^i`. The leading coefficient may be zero.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Polynomial {
    a: f64,
    b: f64,
    coeffs: Vec<f64>,
}

impl Polynomial {
    pub fn new(a: f64, b: f64, coeffs: Vec<f64>) -> Self {
        Self { a, b, coeffs }
    }

    pub fn zero(a: f64, b: f64) -> Self {
        Self::new(a, b, Vec::new())
    }

    /// Build from coefficients of plain powers `x^i`.
    pub fn from_monomials(a: f64, b: f64, mono: &[f64]) -> Self {
        // re-expand around a: x^j = sum_i C(j,i) a^{j-i} (x-a)^i
        let mut coeffs = vec![0.0; mono.len()];
        for (j, &c) in mono.iter().enumerate() {
            let mut binom = 1.0;
            for i in 0..=j {
                coeffs[i] += c * binom * a.powi((j - i) as i32);
                binom = binom * (j - i) as f64 / (i + 1) as f64;
            }
        }
        Self::new(a, b, coeffs)
    }

    pub fn interval(&self) -> (f64, f64) {
        (self.a, self.b)
    }

    /// Coefficients in the `(x - a)^i` basis.
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Upper bound on the degree (`-1` for the empty representation).
    pub fn degree_bound(&self) -> isize {
        self.coeffs.len() as isize - 1
    }

    /// Coefficients of plain powers `x^i`.
    pub fn monomial_coeffs(&self) -> Vec<f64> {
        let n = self.coeffs.len();
        let mut out = vec![0.0; n];
        // (x-a)^i = sum_j C(i,j) x^j (-a)^{i-j}
        for (i, &c) in self.coeffs.iter().enumerate() {
            let mut binom = 1.0;
            for j in 0..=i {
                out[j] += c * binom * (-self.a).powi((i - j) as i32);
                binom = binom * (i - j) as f64 / (j + 1) as f64;
            }
        }
        out
    }

    pub fn eval(&self, x: f64) -> f64 {
        let s = x - self.a;
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * s + c)
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| c * i as f64)
            .collect();
        Self::new(self.a, self.b, coeffs)
    }

    pub fn eval_deriv(&self, x: f64, deriv: usize) -> f64 {
        let mut p = self.clone();
        for _ in 0..deriv {
            p = p.derivative();
        }
        p.eval(x)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| {
                self.coeffs.get(i).copied().unwrap_or(0.0)
                    + other.coeffs.get(i).copied().unwrap_or(0.0)
            })
            .collect();
        Self::new(self.a, self.b, coeffs)
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self::new(self.a, self.b, self.coeffs.iter().map(|c| c * factor).collect())
    }

    /// `L^2(a, b)` norm, exact up to rounding.
    pub fn l2_norm(&self) -> f64 {
        let n = (self.coeffs.len() + 1).max(1);
        let rule = GaussRule::new(n.min(64)).expect("gauss order in range");
        rule.integrate(self.a, self.b, |x| self.eval(x).powi(2)).sqrt()
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monomial_round_trip() {
        let p = Polynomial::from_monomials(2.0, 3.0, &[1.0, -2.0, 0.5, 3.0]);
        let back = p.monomial_coeffs();
        for (u, v) in back.iter().zip([1.0, -2.0, 0.5, 3.0]) {
            assert!((u - v).abs() < 1e-12);
        }
        assert!((p.eval(2.5) - (1.0 - 5.0 + 0.5 * 6.25 + 3.0 * 15.625)).abs() < 1e-12);
    }

    #[test]
    fn derivative_and_norm() {
        let p = Polynomial::new(0.0, 1.0, vec![0.0, 0.0, 1.0]);
        assert_eq!(p.derivative().coeffs(), &[0.0, 2.0]);
        assert!((p.eval_deriv(0.3, 1) - 0.6).abs() < 1e-15);
        assert!((p.l2_norm() - (0.2f64).sqrt()).abs() < 1e-15);
        assert_eq!(Polynomial::zero(0.0, 1.0).l2_norm(), 0.0);
    }
}

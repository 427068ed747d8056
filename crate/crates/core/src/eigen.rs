//! Clamped biharmonic eigenproblem `u'''' = λu`, `u = u' = 0` at both ends,
//! discretized with maximally smooth splines, and the outlier predictor
//! `h λ^{1/4} < π`.

use std::f64::consts::PI;
use std::fmt::Write as _;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::Serialize;

use crate::error::{precondition, Error, Result};
use crate::linalg::BandedSym;
use crate::quadrature::gram_matrix;
use crate::spline::{Breakpoints, SplineSpace};

/// Default relative error above which a discrete eigenvalue counts as an
/// outlier.
pub const DEFAULT_OUTLIER_THRESHOLD: f64 = 0.10;

/// Maximally smooth space together with the basis indices that survive the
/// clamped boundary conditions.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstrainedBasis {
    pub space: SplineSpace,
    /// Indices `2..dim-2` of the B-spline basis.
    pub indices: Vec<usize>,
}

impl ConstrainedBasis {
    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }
}

/// `S^{p-1}_{p,Ξ}` with the two leftmost and two rightmost basis functions
/// removed; these are the only ones with nonzero value or slope at the ends.
pub fn constrained_space(p: usize, xi: Breakpoints) -> Result<ConstrainedBasis> {
    if p < 2 {
        return precondition(format!(
            "clamped biharmonic problem requires p >= 2 (p={p})"
        ));
    }
    let space = SplineSpace::new(p, p as i32 - 1, xi)?;
    let dim = space.dim();
    if dim <= 4 {
        return precondition(format!(
            "clamped biharmonic problem requires dim > 4 (dim={dim})"
        ));
    }
    Ok(ConstrainedBasis {
        indices: (2..dim - 2).collect(),
        space,
    })
}

fn restrict(g: &BandedSym, idx: &[usize]) -> DMatrix<f64> {
    DMatrix::from_fn(idx.len(), idx.len(), |i, j| g.get(idx[i], idx[j]))
}

/// Stiffness `(∂²B_i, ∂²B_j)` and mass `(B_i, B_j)` on the constrained basis.
pub fn assemble(basis: &ConstrainedBasis) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    let n = basis.space.degree() + 1;
    let k = gram_matrix(&basis.space, 2, n)?;
    let m = gram_matrix(&basis.space, 0, n)?;
    Ok((restrict(&k, &basis.indices), restrict(&m, &basis.indices)))
}

/// Generalized eigenpairs of `K v = λ M v`, ascending, with `M`-normalized
/// eigenvectors as columns.
pub fn generalized_eigen(k: &DMatrix<f64>, m: &DMatrix<f64>) -> Result<(Vec<f64>, DMatrix<f64>)> {
    let chol = m
        .clone()
        .cholesky()
        .ok_or_else(|| Error::Singular("mass matrix is not positive definite".into()))?;
    let l = chol.l();
    let linv_k = l
        .solve_lower_triangular(k)
        .ok_or_else(|| Error::Singular("mass factor is singular".into()))?;
    let a = l
        .solve_lower_triangular(&linv_k.transpose())
        .ok_or_else(|| Error::Singular("mass factor is singular".into()))?;
    let a = (&a + a.transpose()) * 0.5;
    let eig = SymmetricEigen::new(a);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let lt = l.transpose();
    let mut vectors = DMatrix::zeros(k.nrows(), order.len());
    for (c, &i) in order.iter().enumerate() {
        let y = eig.eigenvectors.column(i).into_owned();
        let v = lt
            .solve_upper_triangular(&y)
            .ok_or_else(|| Error::Singular("mass factor is singular".into()))?;
        vectors.set_column(c, &v);
    }
    Ok((values, vectors))
}

fn beam_residual(mu: f64) -> (f64, f64) {
    // cos μ cosh μ - 1 = 0, divided by cosh μ to stay bounded
    let c = mu.cosh();
    (mu.cos() - 1.0 / c, -mu.sin() + mu.tanh() / c)
}

/// `i`-th positive root of `cos μ cosh μ = 1` (1-based).
pub fn beam_root(i: usize) -> f64 {
    let guess = (2 * i + 1) as f64 * PI / 2.0;
    let (mut lo, mut hi) = (guess - 0.5, guess + 0.5);
    let f_lo = beam_residual(lo).0;
    let mut mu = guess;
    for _ in 0..100 {
        let (f, df) = beam_residual(mu);
        if f == 0.0 {
            break;
        }
        if (f < 0.0) == (f_lo < 0.0) {
            lo = mu;
        } else {
            hi = mu;
        }
        let mut next = mu - f / df;
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if (next - mu).abs() <= 1e-15 * mu {
            mu = next;
            break;
        }
        mu = next;
    }
    mu
}

/// First `n` clamped-beam eigenvalues `μ_i^4` on an interval of the given
/// length.
pub fn reference_eigenvalues(n: usize, length: f64) -> Vec<f64> {
    (1..=n).map(|i| (beam_root(i) / length).powi(4)).collect()
}

/// Asymptotic estimates `((2i+1)π/2)^4`.
pub fn asymptotic_eigenvalues(n: usize, length: f64) -> Vec<f64> {
    (1..=n)
        .map(|i| ((2 * i + 1) as f64 * PI / 2.0 / length).powi(4))
        .collect()
}

/// Number of modes with `h λ_i^{1/4} < π`.
pub fn predict_non_outliers(h: f64, reference: &[f64]) -> Result<usize> {
    if !(h > 0.0) {
        return precondition(format!("prediction requires h > 0 (h={h})"));
    }
    Ok(reference.iter().filter(|&&l| h * l.powf(0.25) < PI).count())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumReport {
    pub p: usize,
    pub elements: usize,
    pub h: f64,
    /// Dimension of the constrained space.
    pub n: usize,
    pub threshold: f64,
    pub lambda_h: Vec<f64>,
    /// Roots of the transcendental equation, raised to the fourth power.
    pub lambda_ref: Vec<f64>,
    pub lambda_asymptotic: Vec<f64>,
    pub rel_err: Vec<f64>,
    pub predicted_non_outliers: usize,
    /// Count predicted against the asymptotic estimates.
    pub predicted_non_outliers_asymptotic: usize,
    /// Zero-based indices with relative error above the threshold.
    pub observed_outliers: Vec<usize>,
    /// `max_i ‖K v_i - λ_i M v_i‖ / (λ_i ‖v_i‖_M)`.
    pub max_residual: f64,
}

impl SpectrumReport {
    /// CSV with one row per mode; indices are 1-based.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("index,lambda_h,lambda_ref,rel_err,predicted_flag,observed_flag\n");
        for i in 0..self.n {
            writeln!(
                out,
                "{},{:.16e},{:.16e},{:.16e},{},{}",
                i + 1,
                self.lambda_h[i],
                self.lambda_ref[i],
                self.rel_err[i],
                u8::from(i < self.predicted_non_outliers),
                u8::from(self.observed_outliers.contains(&i)),
            )
            .unwrap();
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Discrete spectrum with the default outlier threshold.
pub fn solve_biharmonic(p: usize, xi: Breakpoints) -> Result<SpectrumReport> {
    outlier_report(p, xi, DEFAULT_OUTLIER_THRESHOLD)
}

/// Discrete spectrum, references, and observed versus predicted outliers.
pub fn outlier_report(p: usize, xi: Breakpoints, threshold: f64) -> Result<SpectrumReport> {
    if !(threshold > 0.0 && threshold <= 1.0) {
        return precondition(format!(
            "outlier threshold requires 0 < threshold <= 1 (threshold={threshold})"
        ));
    }
    let h = xi.h();
    let elements = xi.num_elements();
    let length = xi.length();
    let basis = constrained_space(p, xi)?;
    let (k, m) = assemble(&basis)?;
    let (lambda_h, vectors) = generalized_eigen(&k, &m)?;

    let mut max_residual: f64 = 0.0;
    for (i, &lam) in lambda_h.iter().enumerate() {
        let v: DVector<f64> = vectors.column(i).into_owned();
        let mv = &m * &v;
        let r = (&k * &v - &mv * lam).norm();
        let vm = v.dot(&mv).sqrt();
        max_residual = max_residual.max(r / (lam.abs() * vm));
    }

    let n = basis.len();
    let lambda_ref = reference_eigenvalues(n, length);
    let lambda_asymptotic = asymptotic_eigenvalues(n, length);
    let rel_err: Vec<f64> = lambda_h
        .iter()
        .zip(&lambda_ref)
        .map(|(lh, l)| (lh - l).abs() / l)
        .collect();
    let observed_outliers = rel_err
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > threshold)
        .map(|(i, _)| i)
        .collect();
    Ok(SpectrumReport {
        p,
        elements,
        h,
        n,
        threshold,
        predicted_non_outliers: predict_non_outliers(h, &lambda_ref)?,
        predicted_non_outliers_asymptotic: predict_non_outliers(h, &lambda_asymptotic)?,
        lambda_h,
        lambda_ref,
        lambda_asymptotic,
        rel_err,
        observed_outliers,
        max_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_beam_roots() {
        assert!((beam_root(1) - 4.730040744862704).abs() < 1e-12);
        assert!((beam_root(2) - 7.853204624095838).abs() < 1e-12);
        assert!((beam_root(1).powi(4) - 500.5639).abs() < 1e-3);
        for i in 1..60 {
            let mu = beam_root(i);
            assert!((mu.cos() * mu.cosh() - 1.0).abs() <= 1e-9 * mu.cosh());
        }
    }

    #[test]
    fn constrained_dimensions() {
        let b = constrained_space(3, Breakpoints::uniform(0.0, 1.0, 8).unwrap()).unwrap();
        assert_eq!(b.space.dim(), 11);
        assert_eq!(b.len(), 7);
        let b = constrained_space(2, Breakpoints::uniform(0.0, 1.0, 4).unwrap()).unwrap();
        assert_eq!(b.len(), 2);
        assert!(constrained_space(1, Breakpoints::uniform(0.0, 1.0, 4).unwrap()).is_err());
    }

    #[test]
    fn prediction_counts() {
        let asym = asymptotic_eigenvalues(30, 1.0);
        assert_eq!(predict_non_outliers(0.1, &asym).unwrap(), 9);
        let l1 = [500.0];
        assert_eq!(predict_non_outliers(PI / 500f64.powf(0.25), &l1).unwrap(), 0);
        assert!(predict_non_outliers(0.0, &l1).is_err());
    }

    #[test]
    fn first_eigenvalue_p3() {
        let r = solve_biharmonic(3, Breakpoints::uniform(0.0, 1.0, 20).unwrap()).unwrap();
        assert!((r.lambda_h[0] / 500.564 - 1.0).abs() < 5e-3);
        assert!(r.max_residual <= 1e-8);
        for (lh, l) in r.lambda_h.iter().zip(&r.lambda_ref) {
            assert!(*lh >= l * (1.0 - 1e-6));
        }
    }

    #[test]
    fn threshold_one_has_no_outliers() {
        let r = outlier_report(3, Breakpoints::uniform(0.0, 1.0, 20).unwrap(), 1.0).unwrap();
        assert!(r.observed_outliers.is_empty() || r.rel_err.iter().any(|&e| e > 1.0));
        assert!(r.predicted_non_outliers <= r.n);
    }
}

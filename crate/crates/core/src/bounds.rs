//! Explicit error constants and a priori bounds for spline projectors.
//!
//! All bound functions return the coefficient that multiplies `‖∂^r u‖`;
//! the caller supplies the seminorm.

use std::f64::consts::{E, PI};

use serde::Serialize;

use crate::error::{precondition, Result};

fn ln_factorial(n: i64) -> f64 {
    (2..=n).map(|i| (i as f64).ln()).sum()
}

/// Parameters of a bound evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundQuery {
    pub p: i64,
    pub k: i64,
    pub q: i64,
    pub ell: i64,
    pub r: i64,
    /// Largest element length.
    pub h: f64,
    /// Smallest element length.
    pub h_min: f64,
    /// Interval length `b - a`.
    pub length: f64,
}

impl BoundQuery {
    /// Query on a uniform mesh of `[0, 1]` with spacing `h`.
    pub fn uniform(p: i64, k: i64, q: i64, ell: i64, r: i64, h: f64) -> Self {
        Self {
            p,
            k,
            q,
            ell,
            r,
            h,
            h_min: h,
            length: 1.0,
        }
    }

    fn validate(&self) -> Result<()> {
        let Self { p, k, q, ell, r, h, h_min, length } = *self;
        if k < -1 || k > p - 1 {
            return precondition(format!("requires -1 <= k <= p-1 (p={p}, k={k})"));
        }
        if ell < 0 {
            return precondition(format!("requires l >= 0 (l={ell})"));
        }
        if q < 0 || q > k + 1 {
            return precondition(format!("requires 0 <= q <= k+1 (q={q}, k={k})"));
        }
        if q > r {
            return precondition(format!("requires q <= r (q={q}, r={r})"));
        }
        if !(h > 0.0) || !(h_min > 0.0) || !(length > 0.0) || h < h_min {
            return precondition(format!(
                "requires h >= h_min > 0 and b-a > 0 (h={h}, h_min={h_min}, b-a={length})"
            ));
        }
        Ok(())
    }
}

/// `ln c_{p,k,r}`.
pub fn ln_c_const(p: i64, k: i64, r: i64) -> Result<f64> {
    if r < 0 {
        return precondition(format!("requires r >= 0 (r={r})"));
    }
    if k < -1 || k > p - 1 {
        return precondition(format!("requires -1 <= k <= p-1 (p={p}, k={k})"));
    }
    if p < r - 1 {
        return precondition(format!("requires p >= r-1 (p={p}, r={r})"));
    }
    let r_f = r as f64;
    if k == p - 1 {
        return Ok(-r_f * PI.ln());
    }
    let ln_inv_sqrt = -0.5 * (((p - k) * (p - k + 1)) as f64).ln();
    let ln_half = -r_f * 2f64.ln();
    if k >= r - 2 {
        Ok(ln_half + r_f * ln_inv_sqrt)
    } else {
        let ratio = 0.5 * (ln_factorial(p + 1 - r) - ln_factorial(p - 1 + r - 2 * k));
        Ok(ln_half + (k + 1) as f64 * ln_inv_sqrt + ratio)
    }
}

/// The constant `c_{p,k,r}` of the spline `L^2` projection estimate
/// `‖u - S u‖ <= c_{p,k,r} h^r ‖∂^r u‖`, valid for `p >= r - 1`.
pub fn c_const(p: i64, k: i64, r: i64) -> Result<f64> {
    ln_c_const(p, k, r).map(f64::exp)
}

/// Stirling-type upper bound for `c_{p,k,r}` when `k <= p - 2`:
/// `(1/(2(p-k)))^r` if `k >= r - 2`, otherwise `(e/(4(p-k)))^r`.
pub fn c_bound_simplified(p: i64, k: i64, r: i64) -> Result<f64> {
    if k > p - 2 {
        return precondition(format!(
            "simplified bound requires k <= p-2 (p={p}, k={k})"
        ));
    }
    if k < -1 || r < 0 {
        return precondition(format!("requires k >= -1 and r >= 0 (k={k}, r={r})"));
    }
    let pk = (p - k) as f64;
    let base = if k >= r - 2 { 1.0 / (2.0 * pk) } else { E / (4.0 * pk) };
    Ok(base.powi(r as i32))
}

/// `d_p = sqrt(p(p+1)(p+2)(p+3)/2)`, the polynomial inverse inequality
/// constant: `‖∂g‖ <= d_p/(b-a) ‖g‖` for `g ∈ P_p`.
pub fn d_const(p: i64) -> f64 {
    assert!(p >= 0, "d_p requires p >= 0");
    let p = p as f64;
    (p * (p + 1.0) * (p + 2.0) * (p + 3.0) / 2.0).sqrt()
}

fn d_product(from: i64, to: i64) -> f64 {
    (from..=to).map(d_const).product()
}

/// Coefficient of `‖∂^r u‖` in the bound
/// `‖∂^ℓ(u - Q^{q,k}_p u)‖ <= c_{p-q,k-q,q-ℓ} c_{p-q,k-q,r-q} h^{r-ℓ} ‖∂^r u‖`,
/// valid for `ℓ <= q` and `p >= max(r-1, 2q-ℓ-1)`.
pub fn q_error_bound(query: &BoundQuery) -> Result<f64> {
    query.validate()?;
    let BoundQuery { p, k, q, ell, r, h, .. } = *query;
    if ell > q {
        return precondition(format!("requires l <= q (l={ell}, q={q})"));
    }
    if p < r - 1 {
        return precondition(format!("requires p >= r-1 (p={p}, r={r})"));
    }
    if p < 2 * q - ell - 1 {
        return precondition(format!("requires p >= 2q-l-1 (p={p}, q={q}, l={ell})"));
    }
    let c1 = c_const(p - q, k - q, q - ell)?;
    let c2 = c_const(p - q, k - q, r - q)?;
    Ok(c1 * c2 * h.powi((r - ell) as i32))
}

/// Coefficient of `‖∂^r u‖` bounding the broken norm `‖∂^ℓ(u - Q u)‖_Ξ`
/// for `q < ℓ <= r`, with `m = max(2r-q-1, p)`:
///
/// `[c_{m-r,-1,r-ℓ} + (c_{m-r,-1,r-q} + c_{p-q,k-q,r-q}) (h/h_min)^{ℓ-q} Π_{i=m-ℓ+1}^{m-q} d_i] h^{r-ℓ}`.
pub fn higher_deriv_bound(query: &BoundQuery) -> Result<f64> {
    query.validate()?;
    let BoundQuery { p, k, q, ell, r, h, h_min, .. } = *query;
    if !(q < ell && ell <= r) {
        return precondition(format!("requires q < l <= r (q={q}, l={ell}, r={r})"));
    }
    if q > r - 1 {
        return precondition(format!("requires q <= r-1 (q={q}, r={r})"));
    }
    if p < r - 1 {
        return precondition(format!("requires p >= r-1 (p={p}, r={r})"));
    }
    let m = (2 * r - q - 1).max(p);
    let first = c_const(m - r, -1, r - ell)?;
    let second = c_const(m - r, -1, r - q)? + c_const(p - q, k - q, r - q)?;
    let ratio = (h / h_min).powi((ell - q) as i32);
    let prod = d_product(m - ell + 1, m - q);
    Ok((first + second * ratio * prod) * h.powi((r - ell) as i32))
}

/// Coefficient of `‖∂^r u‖` bounding `‖∂^ℓ(R u - Q u)‖`:
/// `c_{p-q,k-q,q} c_{p-q,k-q,r-q} h^r (1/(b-a))^ℓ Π_{i=q-ℓ}^{q-1} d_i`
/// for `ℓ < q`, and exactly zero for `ℓ >= q`.
pub fn diff_bound(query: &BoundQuery) -> Result<f64> {
    query.validate()?;
    let BoundQuery { p, k, q, ell, r, h, length, .. } = *query;
    if ell >= q {
        return Ok(0.0);
    }
    if p < r - 1 {
        return precondition(format!("requires p >= r-1 (p={p}, r={r})"));
    }
    if p < 2 * q - 1 {
        return precondition(format!("requires p >= 2q-1 (p={p}, q={q})"));
    }
    let base = c_const(p - q, k - q, q)? * c_const(p - q, k - q, r - q)? * h.powi(r as i32);
    if ell == 0 {
        return Ok(base);
    }
    Ok(base * length.powi(-(ell as i32)) * d_product(q - ell, q - 1))
}

fn check_schultz_range(q: i64, k: i64) -> Result<()> {
    if q < 1 {
        return precondition(format!("requires q >= 1 (q={q})"));
    }
    if k < q - 1 || k > 2 * q - 2 {
        return precondition(format!("requires q-1 <= k <= 2q-2 (q={q}, k={k})"));
    }
    Ok(())
}

/// `ln K_{q,q,k,ℓ}`.
pub fn ln_schultz_k(q: i64, k: i64, ell: i64) -> Result<f64> {
    check_schultz_range(q, k)?;
    if ell < 0 || ell > q {
        return precondition(format!("requires 0 <= l <= q (l={ell}, q={q})"));
    }
    if ell == q {
        return Ok(0.0);
    }
    let ln_pi = (q - ell) as f64 * PI.ln();
    if ell > 2 * q - k - 2 {
        Ok(ln_factorial(k + 2 - q) - ln_factorial(k + ell + 2 - 2 * q) - ln_pi)
    } else {
        Ok(ln_factorial(k + 2 - q) - ln_pi)
    }
}

/// Schultz's constant `K_{q,q,k,ℓ}` for the odd-degree (`p = 2q - 1`)
/// Hermite spline interpolant.
pub fn schultz_k(q: i64, k: i64, ell: i64) -> Result<f64> {
    ln_schultz_k(q, k, ell).map(f64::exp)
}

/// `ln K_{q,q,k,0} - ln c_{q-1,k-q,q}`; nonnegative over the admissible range.
pub fn schultz_gap(q: i64, k: i64) -> Result<f64> {
    check_schultz_range(q, k)?;
    Ok(ln_schultz_k(q, k, 0)? - ln_c_const(q - 1, k - q, q)?)
}

/// One row of the Schultz comparison grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SchultzGapEntry {
    pub q: i64,
    pub k: i64,
    pub gap: f64,
}

/// `schultz_gap` for `q = 1..=q_max` and `q-1 <= k <= 2q-2`.
pub fn schultz_gap_table(q_max: i64) -> Vec<SchultzGapEntry> {
    (1..=q_max)
        .flat_map(|q| (q - 1..=2 * q - 2).map(move |k| (q, k)))
        .map(|(q, k)| SchultzGapEntry {
            q,
            k,
            gap: schultz_gap(q, k).expect("admissible range"),
        })
        .collect()
}

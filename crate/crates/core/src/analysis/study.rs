use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use super::error_norm;
use crate::error::{precondition, Result};
use crate::functions::SmoothFunction;
use crate::projectors::{e_polynomial, project, ProjectorKind};
use crate::spline::{Breakpoints, SplineSpace};

/// Errors at or below this level are treated as rounding noise and carry
/// no order estimate.
pub const EOC_NOISE_FLOOR: f64 = 1e-14;

/// Refinement family used by a study.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MeshKind {
    Uniform,
    /// `x_j = a + (b-a)(j/n)^γ`.
    Graded { exponent: f64 },
}

/// Interval and refinement levels; level `i` uses `2^i` elements.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StudyConfig {
    pub a: f64,
    pub b: f64,
    pub levels: Vec<u32>,
    pub mesh: MeshKind,
}

impl Default for StudyConfig {
    fn default() -> Self {
        Self {
            a: 0.0,
            b: 1.0,
            levels: (1..=5).collect(),
            mesh: MeshKind::Uniform,
        }
    }
}

impl StudyConfig {
    pub fn with_levels(levels: u32) -> Self {
        Self {
            levels: (1..=levels).collect(),
            ..Self::default()
        }
    }

    fn mesh(&self, level: u32) -> Result<Breakpoints> {
        let n = 1usize << level;
        match self.mesh {
            MeshKind::Uniform => Breakpoints::uniform(self.a, self.b, n),
            MeshKind::Graded { exponent } => Breakpoints::graded(self.a, self.b, n, exponent),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StudyKind {
    /// `‖∂^ℓ(u - Π u)‖` for a projector `Π`.
    Error,
    /// `‖∂^ℓ(R u - Q u)‖`.
    RqDiff,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub level: u32,
    pub h: f64,
    /// One entry per requested `ℓ`.
    pub errors: Vec<f64>,
    /// Estimated order against the previous row; `None` on the first row or
    /// when either error is at rounding level.
    pub orders: Vec<Option<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceTable {
    pub study: StudyKind,
    pub function: String,
    pub projector: String,
    pub p: usize,
    pub k: i32,
    pub q: usize,
    pub ells: Vec<usize>,
    pub a: f64,
    pub b: f64,
    /// Set for `RqDiff` studies with `p >= 3q-1`, where `R = Q` exactly.
    pub exact_zero_expected: bool,
    pub rows: Vec<ConvergenceRow>,
}

fn estimated_order(e_prev: f64, e: f64, h_prev: f64, h: f64) -> Option<f64> {
    if e_prev <= EOC_NOISE_FLOOR || e <= EOC_NOISE_FLOOR {
        return None;
    }
    Some((e_prev / e).ln() / (h_prev / h).ln())
}

impl ConvergenceTable {
    fn from_errors(mut self, raw: Vec<(u32, f64, Vec<f64>)>) -> Self {
        let mut rows: Vec<ConvergenceRow> = Vec::with_capacity(raw.len());
        for (level, h, errors) in raw {
            let orders = match rows.last() {
                None => vec![None; errors.len()],
                Some(prev) => prev
                    .errors
                    .iter()
                    .zip(&errors)
                    .map(|(&ep, &e)| estimated_order(ep, e, prev.h, h))
                    .collect(),
            };
            rows.push(ConvergenceRow {
                level,
                h,
                errors,
                orders,
            });
        }
        self.rows = rows;
        self
    }

    fn column(&self, ell: usize) -> Option<usize> {
        self.ells.iter().position(|&l| l == ell)
    }

    /// Order estimated from the last two rows.
    pub fn final_order(&self, ell: usize) -> Option<f64> {
        let c = self.column(ell)?;
        self.rows.last()?.orders[c]
    }

    pub fn errors(&self, ell: usize) -> Option<Vec<f64>> {
        let c = self.column(ell)?;
        Some(self.rows.iter().map(|r| r.errors[c]).collect())
    }

    /// Restrict to a single `ℓ` column.
    pub fn select(&self, ell: usize) -> Option<Self> {
        let c = self.column(ell)?;
        let mut t = self.clone();
        t.ells = vec![ell];
        for row in t.rows.iter_mut() {
            row.errors = vec![row.errors[c]];
            row.orders = vec![row.orders[c]];
        }
        Some(t)
    }

    /// CSV with columns `h, err_l<ℓ>..., eoc_l<ℓ>...`. Values are written
    /// with 17 significant digits; a missing order is an empty field. With a
    /// single row the order columns are omitted.
    pub fn to_csv(&self) -> String {
        let with_orders = self.rows.len() > 1;
        let mut out = String::from("h");
        for l in &self.ells {
            write!(out, ",err_l{l}").unwrap();
        }
        if with_orders {
            for l in &self.ells {
                write!(out, ",eoc_l{l}").unwrap();
            }
        }
        out.push('\n');
        for row in &self.rows {
            write!(out, "{:.16e}", row.h).unwrap();
            for e in &row.errors {
                write!(out, ",{e:.16e}").unwrap();
            }
            if with_orders {
                for o in &row.orders {
                    match o {
                        Some(v) => write!(out, ",{v:.16e}").unwrap(),
                        None => out.push(','),
                    }
                }
            }
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("table serializes")
    }
}

fn check_levels(cfg: &StudyConfig) -> Result<()> {
    if cfg.levels.is_empty() {
        return precondition("requires at least one refinement level");
    }
    if cfg.levels.windows(2).any(|w| w[1] <= w[0]) {
        return precondition("refinement levels must be strictly increasing");
    }
    if cfg.levels.iter().any(|&l| l > 16) {
        return precondition("refinement level above 16 is not supported");
    }
    Ok(())
}

/// Errors `‖∂^ℓ(u - Π u)‖` on a sequence of refined meshes.
pub fn convergence_study(
    u: &SmoothFunction,
    projector: ProjectorKind,
    p: usize,
    k: i32,
    q: usize,
    ells: &[usize],
    cfg: &StudyConfig,
) -> Result<ConvergenceTable> {
    check_levels(cfg)?;
    if let Some(&l) = ells.iter().find(|&&l| l > u.max_order()) {
        return precondition(format!(
            "requires l <= available derivative order (l={l}, max={})",
            u.max_order()
        ));
    }
    let raw = cfg
        .levels
        .par_iter()
        .map(|&level| {
            let xi = cfg.mesh(level)?;
            let h = xi.h();
            let space = SplineSpace::new(p, k, xi)?;
            let s = project(projector, &space, q, u)?;
            let errors = ells
                .iter()
                .map(|&l| error_norm(u, &s, l))
                .collect::<Result<Vec<_>>>()?;
            Ok((level, h, errors))
        })
        .collect::<Result<Vec<_>>>()?;
    let table = ConvergenceTable {
        study: StudyKind::Error,
        function: u.description().to_string(),
        projector: projector.name().to_string(),
        p,
        k,
        q: if projector == ProjectorKind::L2 { 0 } else { q },
        ells: ells.to_vec(),
        a: cfg.a,
        b: cfg.b,
        exact_zero_expected: false,
        rows: Vec::new(),
    };
    Ok(table.from_errors(raw))
}

/// Differences `‖∂^ℓ(R u - Q u)‖` on a sequence of refined meshes.
pub fn rq_difference_study(
    u: &SmoothFunction,
    p: usize,
    k: i32,
    q: usize,
    ells: &[usize],
    cfg: &StudyConfig,
) -> Result<ConvergenceTable> {
    check_levels(cfg)?;
    let raw = cfg
        .levels
        .par_iter()
        .map(|&level| {
            let xi = cfg.mesh(level)?;
            let h = xi.h();
            let space = SplineSpace::new(p, k, xi)?;
            let e = e_polynomial(&space, q, u)?;
            let errors = ells
                .iter()
                .map(|&l| e.clone_derivative(l).l2_norm())
                .collect();
            Ok((level, h, errors))
        })
        .collect::<Result<Vec<_>>>()?;
    let table = ConvergenceTable {
        study: StudyKind::RqDiff,
        function: u.description().to_string(),
        projector: "ritz-q".to_string(),
        p,
        k,
        q,
        ells: ells.to_vec(),
        a: cfg.a,
        b: cfg.b,
        exact_zero_expected: p + 1 >= 3 * q,
        rows: Vec::new(),
    };
    Ok(table.from_errors(raw))
}

trait DerivativeN {
    fn clone_derivative(&self, n: usize) -> Self;
}

impl DerivativeN for crate::spline::Polynomial {
    fn clone_derivative(&self, n: usize) -> Self {
        (0..n).fold(self.clone(), |p, _| p.derivative())
    }
}

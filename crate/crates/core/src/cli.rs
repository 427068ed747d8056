//! Subcommand implementations behind the `ritz-spline` binary. Each command
//! takes a typed option struct and writes its artifacts; the binary only
//! parses flags and maps errors to exit codes.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::analysis::{
    boundary_report, convergence_study, error_norm, moment_report, rq_difference_study,
    BoundaryEntry, ConvergenceTable, MeshKind, MomentEntry, StudyConfig, StudyKind,
};
use crate::bounds::{
    c_bound_simplified, c_const, d_const, diff_bound, higher_deriv_bound, q_error_bound,
    schultz_gap_table, BoundQuery,
};
use crate::eigen::{outlier_report, SpectrumReport};
use crate::error::{precondition, Error, Result};
use crate::functions::SmoothFunction;
use crate::plot::{loglog_svg, spectrum_svg, table_series};
use crate::projectors::{e_polynomial, project, ProjectorKind};
use crate::spline::{Breakpoints, SplineSpace};

/// Failures of a command, split by exit code.
#[derive(Debug)]
pub enum CliError {
    /// Invalid flags or a violated precondition (exit code 2).
    Validation(String),
    /// Anything else (exit code 1).
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Validation(_) => 2,
            Self::Internal(_) => 1,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Self::Validation(m) | Self::Internal(m) => m,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Singular(_) => Self::Internal(e.to_string()),
            _ => Self::Validation(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::Internal(e.to_string())
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            _ => Err(format!("unknown format `{s}` (expected csv or json)")),
        }
    }
}

/// How the breakpoints of a single space are given.
#[derive(Debug, Clone, PartialEq)]
pub enum MeshSpec {
    /// Full breakpoint list including both endpoints.
    List(Vec<f64>),
    /// `n` equally spaced interior breakpoints.
    Uniform(usize),
}

impl MeshSpec {
    pub fn build(&self, interval: (f64, f64)) -> Result<Breakpoints> {
        match self {
            Self::List(v) => {
                let xi = Breakpoints::new(v.clone())?;
                if xi.a() != interval.0 || xi.b() != interval.1 {
                    return precondition(format!(
                        "breakpoints must span the interval [{}, {}]",
                        interval.0, interval.1
                    ));
                }
                Ok(xi)
            }
            Self::Uniform(n) => Breakpoints::uniform(interval.0, interval.1, n + 1),
        }
    }
}

fn emit(out: Option<&Path>, content: &str) -> CliResult<()> {
    match out {
        Some(path) => {
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir)?;
            }
            fs::write(path, content)?;
        }
        None => print!("{content}"),
    }
    Ok(())
}

fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("out");
    let ext = path.extension().and_then(|s| s.to_str()).unwrap_or("csv");
    path.with_file_name(format!("{stem}_{suffix}.{ext}"))
}

// ----- project -----------------------------------------------------------

#[derive(Debug, Clone)]
pub struct ProjectOptions {
    pub function: String,
    pub p: usize,
    pub k: i32,
    pub q: usize,
    pub projector: ProjectorKind,
    pub mesh: MeshSpec,
    pub interval: (f64, f64),
    pub out: Option<PathBuf>,
    pub format: Format,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorEntry {
    pub ell: usize,
    pub error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProjectionReport {
    pub function: String,
    pub projector: String,
    pub p: usize,
    pub k: i32,
    pub q: usize,
    pub breakpoints: Vec<f64>,
    pub knots: Vec<f64>,
    pub coefficients: Vec<f64>,
    /// Monomial coefficients of `R u - Q u`, for the Ritz projector.
    pub e_polynomial: Option<Vec<f64>>,
    pub errors: Vec<ErrorEntry>,
    pub boundary: Vec<BoundaryEntry>,
    pub moments: Vec<MomentEntry>,
}

/// Projection of a function onto a single space, with diagnostics.
pub fn project_report(opts: &ProjectOptions) -> Result<ProjectionReport> {
    let u = SmoothFunction::resolve(&opts.function)?;
    let xi = opts.mesh.build(opts.interval)?;
    let space = SplineSpace::new(opts.p, opts.k, xi)?;
    let s = project(opts.projector, &space, opts.q, &u)?;
    let q = if opts.projector == ProjectorKind::L2 { 0 } else { opts.q };
    let max_ell = q.max(1).min(opts.p).min(u.max_order());
    let errors = (0..=max_ell)
        .map(|ell| Ok(ErrorEntry { ell, error: error_norm(&u, &s, ell)? }))
        .collect::<Result<Vec<_>>>()?;
    let e_poly = match opts.projector {
        ProjectorKind::Ritz => Some(e_polynomial(&space, q, &u)?.monomial_coeffs()),
        _ => None,
    };
    Ok(ProjectionReport {
        function: u.description().to_string(),
        projector: opts.projector.name().to_string(),
        p: opts.p,
        k: opts.k,
        q,
        breakpoints: space.breakpoints().points().to_vec(),
        knots: space.knots().to_vec(),
        coefficients: s.coeffs().to_vec(),
        e_polynomial: e_poly,
        errors,
        boundary: boundary_report(&u, &s, q)?,
        moments: moment_report(&u, &s, q)?,
    })
}

fn indexed_csv(header: &str, values: &[f64]) -> String {
    let mut out = format!("index,{header}\n");
    for (i, v) in values.iter().enumerate() {
        writeln!(out, "{i},{v:.16e}").unwrap();
    }
    out
}

impl ProjectionReport {
    pub fn coefficients_csv(&self) -> String {
        indexed_csv("coefficient", &self.coefficients)
    }

    pub fn knots_csv(&self) -> String {
        indexed_csv("knot", &self.knots)
    }

    pub fn errors_csv(&self) -> String {
        let mut out = String::from("l,error\n");
        for e in &self.errors {
            writeln!(out, "{},{:.16e}", e.ell, e.error).unwrap();
        }
        out
    }

    pub fn boundary_csv(&self) -> String {
        let mut out = String::from("l,endpoint,residual,scaled_residual,applicable\n");
        for e in &self.boundary {
            let side = serde_json::to_value(e.endpoint).unwrap();
            writeln!(
                out,
                "{},{},{:.16e},{:.16e},{}",
                e.ell,
                side.as_str().unwrap(),
                e.residual,
                e.scaled_residual,
                e.applicable
            )
            .unwrap();
        }
        out
    }

    pub fn moments_csv(&self) -> String {
        let mut out = String::from("kind,index,residual,applicable\n");
        for e in &self.moments {
            let kind = serde_json::to_value(e.kind).unwrap();
            writeln!(out, "{},{},{:.16e},{}", kind.as_str().unwrap(), e.index, e.residual, e.applicable)
                .unwrap();
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// `project`: with CSV output the coefficients go to `out` and the other
/// sections to `<stem>_<section>.csv` next to it. Without `out` the
/// coefficients (or the whole JSON report) go to stdout.
pub fn cmd_project(opts: &ProjectOptions) -> CliResult<ProjectionReport> {
    let report = project_report(opts)?;
    match opts.format {
        Format::Json => emit(opts.out.as_deref(), &report.to_json())?,
        Format::Csv => {
            emit(opts.out.as_deref(), &report.coefficients_csv())?;
            if let Some(path) = &opts.out {
                fs::write(sibling(path, "knots"), report.knots_csv())?;
                fs::write(sibling(path, "errors"), report.errors_csv())?;
                fs::write(sibling(path, "boundary"), report.boundary_csv())?;
                fs::write(sibling(path, "moments"), report.moments_csv())?;
                if let Some(e) = &report.e_polynomial {
                    fs::write(sibling(path, "e"), indexed_csv("monomial", e))?;
                }
            }
        }
    }
    Ok(report)
}

// ----- converge ----------------------------------------------------------

/// Smoothness for each degree of a study.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SmoothnessRule {
    /// `k = p - 1`.
    Max,
    Fixed(i32),
}

impl SmoothnessRule {
    pub fn smoothness(self, p: usize) -> i32 {
        match self {
            Self::Max => p as i32 - 1,
            Self::Fixed(k) => k,
        }
    }
}

impl std::str::FromStr for SmoothnessRule {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        if s == "max" {
            return Ok(Self::Max);
        }
        s.strip_prefix("fixed:")
            .and_then(|k| k.parse().ok())
            .map(Self::Fixed)
            .ok_or_else(|| format!("invalid smoothness rule `{s}` (expected max or fixed:K)"))
    }
}

#[derive(Debug, Clone)]
pub struct ConvergeOptions {
    pub function: String,
    pub p_list: Vec<usize>,
    pub k_rule: SmoothnessRule,
    pub q: usize,
    pub l_list: Vec<usize>,
    pub levels: u32,
    pub study: StudyKind,
    pub projector: ProjectorKind,
    pub interval: (f64, f64),
    pub grading: Option<f64>,
    pub out_dir: PathBuf,
    pub format: Format,
}

/// Reference slope drawn next to each curve.
fn expected_slope(study: StudyKind, p: usize, q: usize, ell: usize) -> f64 {
    match study {
        StudyKind::RqDiff => 2.0 * (p as f64 - q as f64 + 1.0),
        StudyKind::Error if p + ell + 1 >= 2 * q => (p + 1 - ell) as f64,
        StudyKind::Error => (p - ell) as f64,
    }
}

/// `converge`: one table file per `(p, ℓ)` and one SVG per study.
pub fn cmd_converge(opts: &ConvergeOptions) -> CliResult<Vec<ConvergenceTable>> {
    if opts.p_list.is_empty() || opts.l_list.is_empty() {
        return Err(CliError::Validation("requires nonempty --p-list and --l-list".into()));
    }
    if opts.study == StudyKind::Error {
        if let Some(ell) = opts.l_list.iter().find(|&&l| l > opts.q.max(1)) {
            return Err(CliError::Validation(format!(
                "requires l <= q (l={ell}, q={})",
                opts.q
            )));
        }
    }
    if opts.levels == 0 {
        return Err(CliError::Validation("requires --levels >= 1".into()));
    }
    let u = SmoothFunction::resolve(&opts.function)?;
    let cfg = StudyConfig {
        a: opts.interval.0,
        b: opts.interval.1,
        levels: (1..=opts.levels).collect(),
        mesh: match opts.grading {
            Some(exponent) => MeshKind::Graded { exponent },
            None => MeshKind::Uniform,
        },
    };
    fs::create_dir_all(&opts.out_dir)?;
    let tag = match opts.study {
        StudyKind::Error => format!("error_{}", opts.projector.name()),
        StudyKind::RqDiff => "rq-diff".to_string(),
    };
    let mut tables = Vec::new();
    let mut series = Vec::new();
    for &p in &opts.p_list {
        let k = opts.k_rule.smoothness(p);
        let table = match opts.study {
            StudyKind::Error => convergence_study(&u, opts.projector, p, k, opts.q, &opts.l_list, &cfg)?,
            StudyKind::RqDiff => rq_difference_study(&u, p, k, opts.q, &opts.l_list, &cfg)?,
        };
        for &ell in &opts.l_list {
            let one = table.select(ell).expect("column exists");
            let (ext, body) = match opts.format {
                Format::Csv => ("csv", one.to_csv()),
                Format::Json => ("json", one.to_json()),
            };
            fs::write(opts.out_dir.join(format!("{tag}_p{p}_l{ell}.{ext}")), body)?;
        }
        let slopes: Vec<Option<f64>> = opts
            .l_list
            .iter()
            .map(|&l| Some(expected_slope(opts.study, p, opts.q, l)))
            .collect();
        series.extend(table_series(&table, &slopes));
        tables.push(table);
    }
    let title = match opts.study {
        StudyKind::Error => format!("{} error, q={}, {}", opts.projector.name(), opts.q, u.description()),
        StudyKind::RqDiff => format!("R - Q difference, q={}, {}", opts.q, u.description()),
    };
    fs::write(opts.out_dir.join(format!("{tag}.svg")), loglog_svg(&title, "error", &series))?;
    Ok(tables)
}

// ----- constants ---------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstantTable {
    C,
    D,
    SchultzGap,
    Bounds,
}

impl std::str::FromStr for ConstantTable {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "c" => Ok(Self::C),
            "d" => Ok(Self::D),
            "schultz-gap" => Ok(Self::SchultzGap),
            "bounds" => Ok(Self::Bounds),
            _ => Err(format!("unknown table `{s}` (expected c, d, schultz-gap or bounds)")),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ConstantsOptions {
    pub table: ConstantTable,
    pub p: Option<i64>,
    pub k: Option<i64>,
    pub r: Option<i64>,
    pub q: Option<i64>,
    pub ell: Option<i64>,
    pub h: Option<f64>,
    /// Sweep limit for `c` and `d` when `p` is not fixed.
    pub p_max: i64,
    pub q_max: i64,
    pub out: Option<PathBuf>,
}

fn require<T>(v: Option<T>, name: &str) -> CliResult<T> {
    v.ok_or_else(|| CliError::Validation(format!("table requires --{name}")))
}

fn fmt_opt(v: Result<f64>) -> String {
    v.map(|x| format!("{x:.16e}")).unwrap_or_default()
}

/// CSV text for the requested constants table.
pub fn constants_csv(opts: &ConstantsOptions) -> CliResult<String> {
    let mut out = String::new();
    match opts.table {
        ConstantTable::C => {
            out.push_str("p,k,r,c,c_simplified\n");
            let rows: Vec<(i64, i64, i64)> = match (opts.p, opts.k, opts.r) {
                (Some(p), Some(k), Some(r)) => vec![(p, k, r)],
                _ => {
                    let ps: Vec<i64> = opts.p.map_or_else(|| (0..=opts.p_max).collect(), |p| vec![p]);
                    ps.into_iter()
                        .flat_map(|p| {
                            let ks: Vec<i64> = opts.k.map_or_else(|| (-1..p).collect(), |k| vec![k]);
                            let rs: Vec<i64> = opts.r.map_or_else(|| (1..=p + 1).collect(), |r| vec![r]);
                            ks.into_iter().flat_map(move |k| rs.clone().into_iter().map(move |r| (p, k, r)))
                        })
                        .collect()
                }
            };
            for (p, k, r) in rows {
                let c = c_const(p, k, r)?;
                writeln!(out, "{p},{k},{r},{c:.16e},{}", fmt_opt(c_bound_simplified(p, k, r))).unwrap();
            }
        }
        ConstantTable::D => {
            out.push_str("p,d\n");
            let ps: Vec<i64> = opts.p.map_or_else(|| (0..=opts.p_max).collect(), |p| vec![p]);
            for p in ps {
                if p < 0 {
                    return Err(CliError::Validation(format!("requires p >= 0 (p={p})")));
                }
                writeln!(out, "{p},{:.16e}", d_const(p)).unwrap();
            }
        }
        ConstantTable::SchultzGap => {
            if opts.q_max < 1 {
                return Err(CliError::Validation(format!("requires q-max >= 1 (q-max={})", opts.q_max)));
            }
            out.push_str("q,k,gap\n");
            for e in schultz_gap_table(opts.q_max) {
                if e.gap < 0.0 {
                    return Err(CliError::Internal(format!("negative gap at q={}, k={}", e.q, e.k)));
                }
                writeln!(out, "{},{},{:.16e}", e.q, e.k, e.gap).unwrap();
            }
        }
        ConstantTable::Bounds => {
            let p = require(opts.p, "p")?;
            let query = BoundQuery::uniform(
                p,
                opts.k.unwrap_or(p - 1),
                require(opts.q, "q")?,
                require(opts.ell, "l")?,
                opts.r.unwrap_or(p + 1),
                require(opts.h, "h")?,
            );
            out.push_str("p,k,q,l,r,h,q_error,higher_deriv,diff\n");
            writeln!(
                out,
                "{},{},{},{},{},{:.16e},{},{},{}",
                query.p,
                query.k,
                query.q,
                query.ell,
                query.r,
                query.h,
                fmt_opt(q_error_bound(&query)),
                fmt_opt(higher_deriv_bound(&query)),
                fmt_opt(diff_bound(&query)),
            )
            .unwrap();
            if out.lines().nth(1).is_some_and(|l| l.ends_with(",,,")) {
                // surface the reason when no bound applies
                q_error_bound(&query)?;
            }
        }
    }
    Ok(out)
}

pub fn cmd_constants(opts: &ConstantsOptions) -> CliResult<String> {
    let csv = constants_csv(opts)?;
    emit(opts.out.as_deref(), &csv)?;
    Ok(csv)
}

// ----- eig ---------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct EigOptions {
    pub p: usize,
    pub elements: usize,
    pub threshold: f64,
    pub out: Option<PathBuf>,
    pub format: Format,
    /// SVG path; defaults to `<out stem>.svg` when `out` is set.
    pub plot: Option<PathBuf>,
}

/// `eig`: spectrum report plus an error plot with the predicted cutoff.
pub fn cmd_eig(opts: &EigOptions) -> CliResult<SpectrumReport> {
    let xi = Breakpoints::uniform(0.0, 1.0, opts.elements)?;
    let report = outlier_report(opts.p, xi, opts.threshold)?;
    let body = match opts.format {
        Format::Csv => report.to_csv(),
        Format::Json => report.to_json(),
    };
    emit(opts.out.as_deref(), &body)?;
    let plot = opts
        .plot
        .clone()
        .or_else(|| opts.out.as_ref().map(|o| o.with_extension("svg")));
    if let Some(path) = plot {
        fs::write(path, spectrum_svg(&report))?;
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smoothness_rule_parsing() {
        assert_eq!("max".parse::<SmoothnessRule>().unwrap(), SmoothnessRule::Max);
        assert_eq!("fixed:1".parse::<SmoothnessRule>().unwrap(), SmoothnessRule::Fixed(1));
        assert_eq!("fixed:-1".parse::<SmoothnessRule>().unwrap(), SmoothnessRule::Fixed(-1));
        assert!("fixed".parse::<SmoothnessRule>().is_err());
    }

    #[test]
    fn ritz_report_includes_e() {
        let opts = ProjectOptions {
            function: "x^6".into(),
            p: 2,
            k: 1,
            q: 2,
            projector: ProjectorKind::Ritz,
            mesh: MeshSpec::Uniform(0),
            interval: (0.0, 1.0),
            out: None,
            format: Format::Json,
        };
        let r = project_report(&opts).unwrap();
        let e = r.e_polynomial.unwrap();
        assert!((e[0] - 9.0 / 28.0).abs() < 1e-10);
        assert!((e[1] + 33.0 / 14.0).abs() < 1e-10);
    }

    #[test]
    fn constants_single_c() {
        let opts = ConstantsOptions {
            table: ConstantTable::C,
            p: Some(3),
            k: Some(2),
            r: Some(2),
            q: None,
            ell: None,
            h: None,
            p_max: 5,
            q_max: 8,
            out: None,
        };
        let csv = constants_csv(&opts).unwrap();
        let c: f64 = csv.lines().nth(1).unwrap().split(',').nth(3).unwrap().parse().unwrap();
        assert!((c - 0.1013211836).abs() < 1e-10);
    }

    #[test]
    fn validation_errors_map_to_exit_two() {
        let opts = EigOptions {
            p: 1,
            elements: 4,
            threshold: 0.1,
            out: None,
            format: Format::Csv,
            plot: None,
        };
        assert_eq!(cmd_eig(&opts).unwrap_err().exit_code(), 2);
    }
}

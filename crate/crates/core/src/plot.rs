//! Minimal self-contained SVG output: log-log convergence plots with
//! reference slope triangles, and eigenvalue error plots.

use std::fmt::Write as _;

use crate::analysis::ConvergenceTable;
use crate::eigen::SpectrumReport;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const MARGIN: f64 = 64.0;
const COLORS: &[&str] = &["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

/// A named polyline in data coordinates.
#[derive(Debug, Clone)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
    /// Slope drawn as a reference triangle next to the last segment.
    pub reference_slope: Option<f64>,
}

struct Frame {
    x: (f64, f64),
    y: (f64, f64),
    log_x: bool,
}

impl Frame {
    fn px(&self, x: f64) -> f64 {
        let (lo, hi, v) = if self.log_x {
            (self.x.0.log2(), self.x.1.log2(), x.log2())
        } else {
            (self.x.0, self.x.1, x)
        };
        MARGIN + (v - lo) / (hi - lo) * (WIDTH - 2.0 * MARGIN)
    }

    fn py(&self, y: f64) -> f64 {
        let (lo, hi) = (self.y.0.log10(), self.y.1.log10());
        HEIGHT - MARGIN - (y.log10() - lo) / (hi - lo) * (HEIGHT - 2.0 * MARGIN)
    }
}

fn bounds(values: impl Iterator<Item = f64>) -> Option<(f64, f64)> {
    values
        .filter(|v| v.is_finite() && *v > 0.0)
        .fold(None, |acc, v| match acc {
            None => Some((v, v)),
            Some((lo, hi)) => Some((lo.min(v), hi.max(v))),
        })
}

fn widen((lo, hi): (f64, f64), factor: f64) -> (f64, f64) {
    if hi > lo {
        (lo / factor, hi * factor)
    } else {
        (lo / 2.0, hi * 2.0)
    }
}

fn header(out: &mut String, title: &str) {
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    )
    .unwrap();
    writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();
    writeln!(
        out,
        r#"<text x="{}" y="24" text-anchor="middle" font-size="14">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    )
    .unwrap();
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn axes(out: &mut String, frame: &Frame, x_label: &str, y_label: &str) {
    let (x0, y0) = (MARGIN, HEIGHT - MARGIN);
    writeln!(
        out,
        r#"<rect x="{MARGIN}" y="{MARGIN}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        WIDTH - 2.0 * MARGIN,
        HEIGHT - 2.0 * MARGIN
    )
    .unwrap();
    if frame.log_x {
        let (lo, hi) = (frame.x.0.log2().ceil() as i32, frame.x.1.log2().floor() as i32);
        for e in lo..=hi {
            let x = frame.px(2f64.powi(e));
            writeln!(out, r#"<line x1="{x:.2}" y1="{y0}" x2="{x:.2}" y2="{}" stroke="black"/>"#, y0 + 5.0).unwrap();
            writeln!(out, r#"<text x="{x:.2}" y="{}" text-anchor="middle">2^{e}</text>"#, y0 + 18.0).unwrap();
        }
    } else {
        let step = ((frame.x.1 - frame.x.0) / 8.0).max(1.0).ceil();
        let mut t = frame.x.0.ceil();
        while t <= frame.x.1 {
            let x = frame.px(t);
            writeln!(out, r#"<line x1="{x:.2}" y1="{y0}" x2="{x:.2}" y2="{}" stroke="black"/>"#, y0 + 5.0).unwrap();
            writeln!(out, r#"<text x="{x:.2}" y="{}" text-anchor="middle">{t}</text>"#, y0 + 18.0).unwrap();
            t += step;
        }
    }
    let (lo, hi) = (frame.y.0.log10().ceil() as i32, frame.y.1.log10().floor() as i32);
    let stride = ((hi - lo) / 10 + 1).max(1);
    for e in (lo..=hi).step_by(stride as usize) {
        let y = frame.py(10f64.powi(e));
        writeln!(out, r#"<line x1="{}" y1="{y:.2}" x2="{x0}" y2="{y:.2}" stroke="black"/>"#, x0 - 5.0).unwrap();
        writeln!(out, r#"<text x="{}" y="{:.2}" text-anchor="end">1e{e}</text>"#, x0 - 8.0, y + 4.0).unwrap();
    }
    writeln!(
        out,
        r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
        WIDTH / 2.0,
        HEIGHT - 20.0,
        escape(x_label)
    )
    .unwrap();
    writeln!(
        out,
        r#"<text x="16" y="{}" text-anchor="middle" transform="rotate(-90 16 {})">{}</text>"#,
        HEIGHT / 2.0,
        HEIGHT / 2.0,
        escape(y_label)
    )
    .unwrap();
}

fn polyline(out: &mut String, frame: &Frame, pts: &[(f64, f64)], color: &str) {
    let path: Vec<String> = pts
        .iter()
        .filter(|(_, y)| y.is_finite() && *y > 0.0)
        .map(|&(x, y)| format!("{:.2},{:.2}", frame.px(x), frame.py(y)))
        .collect();
    writeln!(
        out,
        r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#,
        path.join(" ")
    )
    .unwrap();
    for p in &path {
        let (x, y) = p.split_once(',').unwrap();
        writeln!(out, r#"<circle cx="{x}" cy="{y}" r="3" fill="{color}"/>"#).unwrap();
    }
}

fn triangle(out: &mut String, frame: &Frame, pts: &[(f64, f64)], slope: f64) {
    let valid: Vec<_> = pts.iter().filter(|(_, y)| *y > 0.0 && y.is_finite()).collect();
    let (Some(&&(x1, y1)), Some(&&(x0, _))) = (valid.last(), valid.iter().rev().nth(1)) else {
        return;
    };
    // place below the last segment, spanning one halving of h
    let (xa, xb) = (x1, x0.min(2.0 * x1));
    let ya = y1 / 3.0;
    let yb = ya * (xb / xa).powf(slope);
    if !(yb > frame.y.0 && yb < frame.y.1 && ya > frame.y.0) {
        return;
    }
    writeln!(
        out,
        r#"<polygon points="{:.2},{:.2} {:.2},{:.2} {:.2},{:.2}" fill="none" stroke="black"/>"#,
        frame.px(xa),
        frame.py(ya),
        frame.px(xb),
        frame.py(ya),
        frame.px(xb),
        frame.py(yb)
    )
    .unwrap();
    writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}">{slope}</text>"#,
        frame.px(xb) + 4.0,
        0.5 * (frame.py(ya) + frame.py(yb)) + 4.0
    )
    .unwrap();
}

fn legend(out: &mut String, labels: &[(&str, &str)]) {
    for (i, (label, color)) in labels.iter().enumerate() {
        let y = MARGIN + 16.0 + 16.0 * i as f64;
        let x = WIDTH - MARGIN - 150.0;
        writeln!(out, r#"<line x1="{x}" y1="{}" x2="{}" y2="{}" stroke="{color}" stroke-width="2"/>"#, y - 4.0, x + 20.0, y - 4.0).unwrap();
        writeln!(out, r#"<text x="{}" y="{y}">{}</text>"#, x + 26.0, escape(label)).unwrap();
    }
}

/// Log-log plot of error against `h`, with `h` on a base-2 axis.
pub fn loglog_svg(title: &str, y_label: &str, series: &[Series]) -> String {
    let mut out = String::new();
    header(&mut out, title);
    let xs = bounds(series.iter().flat_map(|s| s.points.iter().map(|p| p.0)));
    let ys = bounds(series.iter().flat_map(|s| s.points.iter().map(|p| p.1)));
    let (Some(x), Some(y)) = (xs, ys) else {
        out.push_str("</svg>\n");
        return out;
    };
    let frame = Frame {
        x: widen(x, 1.2),
        y: widen(y, 10.0),
        log_x: true,
    };
    axes(&mut out, &frame, "h", y_label);
    let mut labels = Vec::new();
    for (i, s) in series.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        polyline(&mut out, &frame, &s.points, color);
        if let Some(slope) = s.reference_slope {
            triangle(&mut out, &frame, &s.points, slope);
        }
        labels.push((s.label.as_str(), color));
    }
    legend(&mut out, &labels);
    out.push_str("</svg>\n");
    out
}

/// Series for each `ℓ` column of a table, labelled with the expected slope.
pub fn table_series(table: &ConvergenceTable, slopes: &[Option<f64>]) -> Vec<Series> {
    table
        .ells
        .iter()
        .enumerate()
        .map(|(c, ell)| Series {
            label: format!("p={}, l={ell}", table.p),
            points: table.rows.iter().map(|r| (r.h, r.errors[c])).collect(),
            reference_slope: slopes.get(c).copied().flatten(),
        })
        .collect()
}

/// Relative eigenvalue error against mode index, with the predicted
/// non-outlier cutoff and the threshold marked.
pub fn spectrum_svg(report: &SpectrumReport) -> String {
    let mut out = String::new();
    header(
        &mut out,
        &format!("relative eigenvalue error, p={}, {} elements", report.p, report.elements),
    );
    let pts: Vec<(f64, f64)> = report
        .rel_err
        .iter()
        .enumerate()
        .map(|(i, &e)| ((i + 1) as f64, e.max(1e-16)))
        .collect();
    let y = bounds(pts.iter().map(|p| p.1).chain([report.threshold])).unwrap_or((1e-16, 1.0));
    let frame = Frame {
        x: (0.0, report.n as f64 + 1.0),
        y: widen(y, 10.0),
        log_x: false,
    };
    axes(&mut out, &frame, "mode index", "relative error");
    polyline(&mut out, &frame, &pts, COLORS[0]);
    let ty = frame.py(report.threshold);
    writeln!(
        out,
        r#"<line x1="{MARGIN}" y1="{ty:.2}" x2="{}" y2="{ty:.2}" stroke="gray" stroke-dasharray="4 3"/>"#,
        WIDTH - MARGIN
    )
    .unwrap();
    let cx = frame.px(report.predicted_non_outliers as f64 + 0.5);
    writeln!(
        out,
        r#"<line x1="{cx:.2}" y1="{MARGIN}" x2="{cx:.2}" y2="{}" stroke="{}" stroke-dasharray="6 3"/>"#,
        HEIGHT - MARGIN,
        COLORS[1]
    )
    .unwrap();
    legend(
        &mut out,
        &[("rel. error", COLORS[0]), ("predicted cutoff", COLORS[1]), ("threshold", "gray")],
    );
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn svg_is_well_formed_and_deterministic() {
        let s = vec![Series {
            label: "a<b".into(),
            points: vec![(0.5, 1e-1), (0.25, 1e-2), (0.125, 1e-3)],
            reference_slope: Some(3.0),
        }];
        let a = loglog_svg("t", "err", &s);
        assert!(a.starts_with("<svg") && a.trim_end().ends_with("</svg>"));
        assert!(a.contains("a&lt;b") && a.contains("<polygon"));
        assert_eq!(a, loglog_svg("t", "err", &s));
    }

    #[test]
    fn empty_plot() {
        let a = loglog_svg("t", "err", &[]);
        assert!(a.trim_end().ends_with("</svg>"));
    }
}

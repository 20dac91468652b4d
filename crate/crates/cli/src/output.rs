//! Tables for the terminal, CSV files and self-contained SVG plots.

use std::fmt::Write as _;
use std::path::Path;

use iae_core::problem::IaeProblem;
use iae_core::solution::{ErrorReport, GalerkinSolution};
use iae_core::Method;

use crate::commands::{CliError, CliResult};

fn open_csv(path: &Path) -> CliResult<csv::Writer<std::fs::File>> {
    csv::Writer::from_path(path).map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
}

/// CSV numbers carry 17 significant digits.
fn num(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn coefficient_table(sol: &GalerkinSolution) -> String {
    let mut s = format!("{:>4}  {:>24}  {:>24}\n", "i", "x_i", "y_i");
    for (i, (x, y)) in sol.coeff_x.iter().zip(&sol.coeff_y).enumerate() {
        let _ = writeln!(s, "{i:>4}  {x:>24.16e}  {y:>24.16e}");
    }
    s.pop();
    s
}

fn row_table(header: &str, ns: &[usize], rows: &[(&str, Vec<f64>)]) -> String {
    let width = rows.iter().map(|r| r.0.len()).max().unwrap_or(0).max(header.len());
    let mut s = format!("{header:<width$}");
    for n in ns {
        let _ = write!(s, " | {n:>8}");
    }
    s.push('\n');
    for (label, values) in rows {
        let _ = write!(s, "{label:<width$}");
        for v in values {
            let _ = write!(s, " | {v:>8.1e}");
        }
        s.push('\n');
    }
    s
}

/// Rows `|x_n - x|` and `|y_n - y|`, one column per basis size.
pub fn error_table(reports: &[ErrorReport]) -> String {
    let ns: Vec<usize> = reports.iter().map(|r| r.n).collect();
    row_table(
        "n",
        &ns,
        &[
            ("|x_n - x|", reports.iter().map(|r| r.err_x).collect()),
            ("|y_n - y|", reports.iter().map(|r| r.err_y).collect()),
        ],
    )
}

pub fn best_table(ns: &[usize], errors: &[f64]) -> String {
    row_table("n", ns, &[("|P_n f - f|", errors.to_vec())])
}

pub fn write_solution_csv(
    path: &Path,
    p: &IaeProblem,
    solutions: &[GalerkinSolution],
    grid: usize,
) -> CliResult<()> {
    let exact = match (&p.exact_x, &p.exact_y) {
        (Some(x), Some(y)) => Some((x, y)),
        _ => None,
    };
    let mut w = open_csv(path)?;
    let mut header = vec!["method", "t", "x_n", "y_n"];
    if exact.is_some() {
        header.extend(["x_exact", "y_exact", "err_x", "err_y"]);
    }
    w.write_record(&header)?;
    let step = p.horizon / (grid - 1) as f64;
    for sol in solutions {
        for k in 0..grid {
            let t = if k + 1 == grid { p.horizon } else { k as f64 * step };
            let (x, y) = sol.evaluate(t)?;
            let mut record = vec![sol.method.to_string(), num(t), num(x), num(y)];
            if let Some((ex, ey)) = exact {
                let (xe, ye) = (ex.eval(t)?, ey.eval(t)?);
                record.extend([num(xe), num(ye), num((x - xe).abs()), num((y - ye).abs())]);
            }
            w.write_record(&record)?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn write_study_csv(path: &Path, reports: &[ErrorReport]) -> CliResult<()> {
    let mut w = open_csv(path)?;
    w.write_record(["method", "n", "err_x", "err_y"])?;
    for r in reports {
        w.write_record([r.method.to_string(), r.n.to_string(), num(r.err_x), num(r.err_y)])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_best_csv(path: &Path, ns: &[usize], errors: &[f64]) -> CliResult<()> {
    let mut w = open_csv(path)?;
    w.write_record(["n", "error"])?;
    for (n, e) in ns.iter().zip(errors) {
        w.write_record([n.to_string(), num(*e)])?;
    }
    w.flush()?;
    Ok(())
}

pub struct Series {
    pub label: String,
    pub points: Vec<(usize, f64)>,
}

/// One series per (method, unknown), in method order with x before y.
pub fn study_series(reports: &[ErrorReport], methods: &[Method]) -> Vec<Series> {
    let mut out = Vec::new();
    for &m in methods {
        let rows: Vec<&ErrorReport> = reports.iter().filter(|r| r.method == m).collect();
        out.push(Series {
            label: format!("{m}: |x_n - x|"),
            points: rows.iter().map(|r| (r.n, r.err_x)).collect(),
        });
        out.push(Series {
            label: format!("{m}: |y_n - y|"),
            points: rows.iter().map(|r| (r.n, r.err_y)).collect(),
        });
    }
    out
}

const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"];
// Zero errors are drawn at this floor instead of -inf.
const LOG_FLOOR: f64 = -17.0;

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

fn log10_clamped(v: f64) -> f64 {
    if v > 0.0 {
        v.log10().max(LOG_FLOOR)
    } else {
        LOG_FLOOR
    }
}

/// Plot of `log10(err)` against `n`.
pub fn render_svg(title: &str, series: &[Series]) -> String {
    let (w, h) = (720.0, 480.0);
    let (left, right, top, bottom) = (70.0, 230.0, 40.0, 50.0);
    let pw = w - left - right;
    let ph = h - top - bottom;

    let ns = series.iter().flat_map(|s| s.points.iter().map(|p| p.0 as f64));
    let (nmin, nmax) = ns.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), n| (a.min(n), b.max(n)));
    let ys = series.iter().flat_map(|s| s.points.iter().map(|p| log10_clamped(p.1)));
    let (ymin, ymax) = ys.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), y| (a.min(y), b.max(y)));
    let (nmin, nmax) = if nmin < nmax { (nmin, nmax) } else { (nmin - 1.0, nmin + 1.0) };
    let (ymin, ymax) = if ymin.is_finite() {
        (ymin.floor(), if ymax.ceil() > ymin.floor() { ymax.ceil() } else { ymin.floor() + 1.0 })
    } else {
        (-1.0, 0.0)
    };
    let px = |n: f64| left + (n - nmin) / (nmax - nmin) * pw;
    let py = |y: f64| top + (ymax - y) / (ymax - ymin) * ph;

    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{}" y="22" text-anchor="middle" font-size="14">{}</text>"#, left + pw / 2.0, escape(title));
    let _ = writeln!(
        s,
        r#"<rect x="{left}" y="{top}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#
    );

    let ystep = ((ymax - ymin) / 10.0).ceil().max(1.0);
    let mut y = ymin;
    while y <= ymax + 1e-9 {
        let yy = py(y);
        let _ = writeln!(
            s,
            r##"<line x1="{left}" y1="{yy:.2}" x2="{:.2}" y2="{yy:.2}" stroke="#dddddd"/><text x="{:.2}" y="{:.2}" text-anchor="end">{y}</text>"##,
            left + pw,
            left - 6.0,
            yy + 4.0
        );
        y += ystep;
    }
    let mut ticks: Vec<usize> = series.iter().flat_map(|s| s.points.iter().map(|p| p.0)).collect();
    ticks.sort_unstable();
    ticks.dedup();
    for n in ticks {
        let xx = px(n as f64);
        let _ = writeln!(
            s,
            r#"<line x1="{xx:.2}" y1="{:.2}" x2="{xx:.2}" y2="{:.2}" stroke="black"/><text x="{xx:.2}" y="{:.2}" text-anchor="middle">{n}</text>"#,
            top + ph,
            top + ph + 5.0,
            top + ph + 18.0
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">n</text>"#,
        left + pw / 2.0,
        h - 12.0
    );
    let _ = writeln!(
        s,
        r#"<text x="18" y="{:.2}" text-anchor="middle" transform="rotate(-90 18 {:.2})">log10(error)</text>"#,
        top + ph / 2.0,
        top + ph / 2.0
    );

    for (k, ser) in series.iter().enumerate() {
        let color = COLORS[k % COLORS.len()];
        let pts: Vec<String> = ser
            .points
            .iter()
            .map(|&(n, e)| format!("{:.2},{:.2}", px(n as f64), py(log10_clamped(e))))
            .collect();
        let _ = writeln!(
            s,
            r#"<polyline fill="none" stroke="{color}" stroke-width="2" points="{}"><title>{}</title></polyline>"#,
            pts.join(" "),
            escape(&ser.label)
        );
        let ly = top + 10.0 + 20.0 * k as f64;
        let lx = left + pw + 15.0;
        let _ = writeln!(
            s,
            r#"<line x1="{lx:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{color}" stroke-width="2"/><text x="{:.2}" y="{:.2}">{}</text>"#,
            lx + 25.0,
            lx + 32.0,
            ly + 4.0,
            escape(&ser.label)
        );
    }
    s.push_str("</svg>\n");
    s
}

pub fn write_svg(path: &Path, title: &str, series: &[Series]) -> CliResult<()> {
    std::fs::write(path, render_svg(title, series))
        .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))?;
    Ok(())
}

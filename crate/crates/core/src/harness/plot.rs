use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use super::{Metric, RunRecord, SummaryRow};
use crate::error::Result;
use crate::metrics::ReferenceFront;
use crate::model::ObjectivePoint;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const MARGIN: f64 = 60.0;

const PALETTE: [&str; 12] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
    "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#393b79", "#637939",
];

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

fn header(out: &mut String, title: &str) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(out, r##"<rect width="100%" height="100%" fill="#ffffff"/>"##);
    let _ = writeln!(
        out,
        r#"<text x="{}" y="24" text-anchor="middle" font-family="sans-serif" font-size="16">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    );
}

struct Axis {
    lo: f64,
    hi: f64,
}

impl Axis {
    fn fit(values: impl Iterator<Item = f64>) -> Axis {
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for v in values {
            lo = lo.min(v);
            hi = hi.max(v);
        }
        if !lo.is_finite() {
            return Axis { lo: 0.0, hi: 1.0 };
        }
        let pad = if hi > lo { 0.05 * (hi - lo) } else { 0.5f64.max(lo.abs() * 0.05) };
        Axis { lo: lo - pad, hi: hi + pad }
    }

    fn map(&self, v: f64, from: f64, to: f64) -> f64 {
        from + (v - self.lo) / (self.hi - self.lo) * (to - from)
    }
}

/// Objective-space scatter: each labelled archive in its own colour, the
/// reference front as a black step line.
pub fn render_archive_svg(title: &str, front: &ReferenceFront, archives: &[(String, Vec<ObjectivePoint>)]) -> String {
    let all = || front.points().iter().chain(archives.iter().flat_map(|(_, pts)| pts.iter()));
    let x = Axis::fit(all().map(|p| p.energy));
    let y = Axis::fit(all().map(|p| p.makespan));
    let px = |v: f64| x.map(v, MARGIN, WIDTH - MARGIN);
    let py = |v: f64| y.map(v, HEIGHT - MARGIN, MARGIN);

    let mut out = String::new();
    header(&mut out, title);
    axes(&mut out, "energy", "makespan", &x, &y);

    for (k, (label, pts)) in archives.iter().enumerate() {
        let colour = PALETTE[k % PALETTE.len()];
        for p in pts {
            let _ = writeln!(
                out,
                r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="{colour}" fill-opacity="0.6"/>"#,
                px(p.energy),
                py(p.makespan)
            );
        }
        let ly = MARGIN + 14.0 * k as f64;
        let _ = writeln!(
            out,
            r#"<circle cx="{:.2}" cy="{:.2}" r="4" fill="{colour}"/><text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="11">{}</text>"#,
            WIDTH - MARGIN - 90.0,
            ly - 4.0,
            WIDTH - MARGIN - 82.0,
            ly,
            escape(label)
        );
    }

    let mut path = String::new();
    for (i, p) in front.points().iter().enumerate() {
        let cmd = if i == 0 { 'M' } else { 'L' };
        let _ = write!(path, "{cmd}{:.2},{:.2} ", px(p.energy), py(p.makespan));
    }
    let _ = writeln!(out, r##"<path d="{}" fill="none" stroke="#000000" stroke-width="1.5"/>"##, path.trim_end());
    out.push_str("</svg>\n");
    out
}

/// One bar per (n_sol, algorithm) row, height = Avg of `metric`.
pub fn render_metric_bars_svg(title: &str, rows: &[SummaryRow], metric: Metric) -> String {
    let y = Axis { lo: 0.0, hi: rows.iter().map(|r| r.stat(metric).avg).fold(0.0, f64::max).max(f64::MIN_POSITIVE) * 1.05 };
    let x = Axis { lo: 0.0, hi: 1.0 };
    let mut out = String::new();
    header(&mut out, title);
    axes(&mut out, "algorithm", &format!("Avg({})", metric.label()), &x, &y);

    let slot = (WIDTH - 2.0 * MARGIN) / rows.len().max(1) as f64;
    for (k, r) in rows.iter().enumerate() {
        let v = r.stat(metric).avg;
        let top = y.map(v, HEIGHT - MARGIN, MARGIN);
        let left = MARGIN + slot * k as f64 + slot * 0.1;
        let colour = PALETTE[usize::from(r.algorithm) % PALETTE.len()];
        let _ = writeln!(
            out,
            r#"<rect x="{left:.2}" y="{top:.2}" width="{:.2}" height="{:.2}" fill="{colour}"/>"#,
            slot * 0.8,
            HEIGHT - MARGIN - top
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle" font-family="sans-serif" font-size="10">{}/{}</text>"#,
            left + slot * 0.4,
            HEIGHT - MARGIN + 14.0,
            r.algorithm,
            r.n_sol
        );
    }
    out.push_str("</svg>\n");
    out
}

fn axes(out: &mut String, x_label: &str, y_label: &str, x: &Axis, y: &Axis) {
    let (l, r, t, b) = (MARGIN, WIDTH - MARGIN, MARGIN, HEIGHT - MARGIN);
    let _ = writeln!(
        out,
        r##"<path d="M{l},{t} L{l},{b} L{r},{b}" fill="none" stroke="#333333"/>"##
    );
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" text-anchor="middle" font-family="sans-serif" font-size="12">{}</text>"#,
        WIDTH / 2.0,
        HEIGHT - 20.0,
        escape(x_label)
    );
    let _ = writeln!(
        out,
        r#"<text x="16" y="{}" text-anchor="middle" font-family="sans-serif" font-size="12" transform="rotate(-90 16 {})">{}</text>"#,
        HEIGHT / 2.0,
        HEIGHT / 2.0,
        escape(y_label)
    );
    for (v, anchor_x, anchor_y, anchor) in [
        (y.lo, l - 4.0, b, "end"),
        (y.hi, l - 4.0, t + 4.0, "end"),
    ] {
        let _ = writeln!(
            out,
            r#"<text x="{anchor_x}" y="{anchor_y}" text-anchor="{anchor}" font-family="sans-serif" font-size="10">{}</text>"#,
            short(v)
        );
    }
    if x_label != "algorithm" {
        for (v, ax) in [(x.lo, l), (x.hi, r)] {
            let _ = writeln!(
                out,
                r#"<text x="{ax}" y="{}" text-anchor="middle" font-family="sans-serif" font-size="10">{}</text>"#,
                b + 14.0,
                short(v)
            );
        }
    }
}

fn short(v: f64) -> String {
    if v != 0.0 && (v.abs() >= 1e5 || v.abs() < 1e-2) {
        format!("{v:.2e}")
    } else {
        format!("{v:.2}")
    }
}

fn safe_name(s: &str) -> String {
    s.chars().map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' }).collect()
}

/// Writes GD and SP bar charts per instance and, when records and fronts
/// are supplied, one archive scatter per (instance, n_sol). Returns the
/// files written.
pub fn write_plots(
    out_dir: &Path,
    rows: &[SummaryRow],
    records: &[RunRecord],
    fronts: &BTreeMap<String, ReferenceFront>,
) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(out_dir)?;
    let mut written = Vec::new();
    let mut instances: Vec<&str> = Vec::new();
    for r in rows {
        if !instances.contains(&r.instance.as_str()) {
            instances.push(&r.instance);
        }
    }
    for name in &instances {
        let group: Vec<SummaryRow> = rows.iter().filter(|r| r.instance == *name).cloned().collect();
        for metric in [Metric::Gd, Metric::Sp] {
            let path = out_dir.join(format!("{}__{}.svg", safe_name(name), metric.label().to_lowercase()));
            let title = format!("{name}: Avg({})", metric.label());
            fs::write(&path, render_metric_bars_svg(&title, &group, metric))?;
            written.push(path);
        }
    }

    for (name, front) in fronts {
        let mut sizes: Vec<usize> = records.iter().filter(|r| &r.instance == name).map(|r| r.n_sol).collect();
        sizes.sort_unstable();
        sizes.dedup();
        for n_sol in sizes {
            // First run of each algorithm keeps the scatter readable.
            let mut archives: Vec<(String, Vec<ObjectivePoint>)> = Vec::new();
            let mut seen: Vec<u8> = Vec::new();
            for r in records.iter().filter(|r| &r.instance == name && r.n_sol == n_sol) {
                if !seen.contains(&r.algorithm) {
                    seen.push(r.algorithm);
                    archives.push((format!("alg {}", r.algorithm), r.archive.iter().map(|e| e.point).collect()));
                }
            }
            let path = out_dir.join(format!("{}__nsol{n_sol}__scatter.svg", safe_name(name)));
            let title = format!("{name}, N_sol = {n_sol}");
            fs::write(&path, render_archive_svg(&title, front, &archives))?;
            written.push(path);
        }
    }
    Ok(written)
}

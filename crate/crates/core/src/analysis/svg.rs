use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::AnalysisError;

/// One labeled bar series of a grouped chart.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    pub values: Vec<f64>,
}

impl Series {
    pub fn new(label: impl Into<String>, values: Vec<f64>) -> Self {
        Self { label: label.into(), values }
    }
}

const PALETTE: [&str; 6] = ["#d62728", "#1f77b4", "#17becf", "#2ca02c", "#9467bd", "#ff7f0e"];

/// Grouped bar chart: one group per index, one bar per series.
pub fn histogram_svg(title: &str, series: &[Series]) -> Result<String, AnalysisError> {
    let first = series.first().ok_or_else(|| AnalysisError::EmptyPlot("no series".into()))?;
    let groups = first.values.len();
    if groups == 0 {
        return Err(AnalysisError::EmptyPlot(format!("series `{}` is empty", first.label)));
    }
    if let Some(s) = series.iter().find(|s| s.values.len() != groups) {
        return Err(AnalysisError::LengthMismatch(groups, s.values.len()));
    }
    let (left, top, plot_w, plot_h) = (60.0, 40.0, 40.0 * groups as f64 + 20.0, 240.0);
    let width = left + plot_w + 20.0;
    let height = top + plot_h + 60.0;
    let ymax = series
        .iter()
        .flat_map(|s| s.values.iter().copied())
        .fold(0.0_f64, f64::max)
        .max(1e-12)
        * 1.1;
    let group_w = plot_w / groups as f64;
    let bar_w = group_w * 0.8 / series.len() as f64;

    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    )
    .unwrap();
    writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();
    writeln!(out, r#"<text x="{}" y="20" font-family="sans-serif" font-size="14" text-anchor="middle">{}</text>"#, width / 2.0, escape(title)).unwrap();
    writeln!(
        out,
        r#"<line x1="{left}" y1="{}" x2="{}" y2="{}" stroke="black"/>"#,
        top + plot_h,
        left + plot_w,
        top + plot_h
    )
    .unwrap();
    writeln!(out, r#"<line x1="{left}" y1="{top}" x2="{left}" y2="{}" stroke="black"/>"#, top + plot_h).unwrap();
    for tick in 0..=4 {
        let v = ymax * tick as f64 / 4.0;
        let y = top + plot_h - plot_h * tick as f64 / 4.0;
        writeln!(out, r#"<text x="{}" y="{:.2}" font-family="sans-serif" font-size="10" text-anchor="end">{v:.3}</text>"#, left - 4.0, y + 3.0).unwrap();
    }
    for (si, s) in series.iter().enumerate() {
        let color = PALETTE[si % PALETTE.len()];
        for (gi, v) in s.values.iter().enumerate() {
            let h = plot_h * v / ymax;
            let x = left + gi as f64 * group_w + group_w * 0.1 + si as f64 * bar_w;
            writeln!(
                out,
                r#"<rect x="{x:.2}" y="{:.2}" width="{bar_w:.2}" height="{h:.2}" fill="{color}"><title>{} node {gi}: {v}</title></rect>"#,
                top + plot_h - h,
                escape(&s.label)
            )
            .unwrap();
        }
        let ly = top + plot_h + 40.0;
        let lx = left + si as f64 * 110.0;
        writeln!(out, r#"<rect x="{lx}" y="{}" width="10" height="10" fill="{color}"/>"#, ly - 9.0).unwrap();
        writeln!(out, r#"<text x="{}" y="{ly}" font-family="sans-serif" font-size="11">{}</text>"#, lx + 14.0, escape(&s.label)).unwrap();
    }
    for gi in 0..groups {
        let x = left + (gi as f64 + 0.5) * group_w;
        writeln!(out, r#"<text x="{x:.2}" y="{}" font-family="sans-serif" font-size="10" text-anchor="middle">{gi}</text>"#, top + plot_h + 14.0).unwrap();
    }
    out.push_str("</svg>\n");
    Ok(out)
}

pub fn emit_histogram_svg(title: &str, series: &[Series], path: impl AsRef<Path>) -> Result<(), AnalysisError> {
    fs::write(path, histogram_svg(title, series)?)?;
    Ok(())
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

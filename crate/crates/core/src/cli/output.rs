//! CSV and SVG writers.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::Result;

/// Shortest decimal that parses back to the same `f64`.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:?}")
}

/// A CSV file with a fixed header, written in one go.
pub fn write_csv<I, R>(path: &Path, header: &[&str], rows: I) -> Result<()>
where
    I: IntoIterator<Item = R>,
    R: IntoIterator<Item = String>,
{
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(header)?;
    for row in rows {
        w.write_record(row)?;
    }
    w.flush()?;
    Ok(())
}

/// `key,value` rows.
pub fn write_summary(path: &Path, rows: &[(&str, String)]) -> Result<()> {
    write_csv(
        path,
        &["key", "value"],
        rows.iter().map(|(k, v)| vec![k.to_string(), v.clone()]),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Style {
    Line,
    Dots,
}

#[derive(Debug, Clone)]
pub struct Series {
    pub label: String,
    pub color: &'static str,
    pub style: Style,
    pub points: Vec<(f64, f64)>,
}

impl Series {
    pub fn line(label: impl Into<String>, color: &'static str, points: Vec<(f64, f64)>) -> Self {
        Self {
            label: label.into(),
            color,
            style: Style::Line,
            points,
        }
    }

    pub fn dots(label: impl Into<String>, color: &'static str, points: Vec<(f64, f64)>) -> Self {
        Self {
            label: label.into(),
            color,
            style: Style::Dots,
            points,
        }
    }
}

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 600.0;
const MARGIN: f64 = 50.0;

/// Self-contained 800×600 SVG with one polyline or dot set per series.
pub fn write_svg(path: &Path, title: &str, series: &[Series]) -> Result<()> {
    let finite = series
        .iter()
        .flat_map(|s| s.points.iter())
        .filter(|p| p.0.is_finite() && p.1.is_finite());
    let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for &(x, y) in finite {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if x0 > x1 {
        (x0, x1, y0, y1) = (0.0, 1.0, 0.0, 1.0);
    }
    if x1 - x0 < 1e-12 {
        x1 = x0 + 1.0;
    }
    if y1 - y0 < 1e-12 {
        y0 -= 0.5;
        y1 += 0.5;
    }
    let pad = 0.05 * (y1 - y0);
    let (y0, y1) = (y0 - pad, y1 + pad);
    let sx = |x: f64| MARGIN + (x - x0) / (x1 - x0) * (WIDTH - 2.0 * MARGIN);
    let sy = |y: f64| HEIGHT - MARGIN - (y - y0) / (y1 - y0) * (HEIGHT - 2.0 * MARGIN);

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="800" height="600" viewBox="0 0 800 600">"#
    );
    let _ = writeln!(svg, r#"<rect width="800" height="600" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<rect x="{m}" y="{m}" width="{w}" height="{h}" fill="none" stroke="gray"/>"#,
        m = MARGIN,
        w = WIDTH - 2.0 * MARGIN,
        h = HEIGHT - 2.0 * MARGIN
    );
    let _ = writeln!(
        svg,
        r#"<text x="400" y="30" text-anchor="middle" font-family="sans-serif" font-size="16">{}</text>"#,
        escape(title)
    );
    for (label, x, y, anchor) in [
        (format!("{x0:.3}"), MARGIN, HEIGHT - MARGIN + 18.0, "start"),
        (
            format!("{x1:.3}"),
            WIDTH - MARGIN,
            HEIGHT - MARGIN + 18.0,
            "end",
        ),
        (format!("{y0:.3}"), MARGIN - 4.0, HEIGHT - MARGIN, "end"),
        (format!("{y1:.3}"), MARGIN - 4.0, MARGIN + 10.0, "end"),
    ] {
        let _ = writeln!(
            svg,
            r#"<text x="{x}" y="{y}" text-anchor="{anchor}" font-family="sans-serif" font-size="11">{label}</text>"#
        );
    }
    for (i, s) in series.iter().enumerate() {
        let pts = s
            .points
            .iter()
            .filter(|p| p.0.is_finite() && p.1.is_finite());
        match s.style {
            Style::Line => {
                let coords: Vec<String> = pts
                    .map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
                    .collect();
                let _ = writeln!(
                    svg,
                    r#"<polyline fill="none" stroke="{}" stroke-width="1.2" points="{}"/>"#,
                    s.color,
                    coords.join(" ")
                );
            }
            Style::Dots => {
                let _ = writeln!(svg, r#"<g fill="{}">"#, s.color);
                for &(x, y) in pts {
                    let _ = writeln!(
                        svg,
                        r#"<circle cx="{:.2}" cy="{:.2}" r="1"/>"#,
                        sx(x),
                        sy(y)
                    );
                }
                let _ = writeln!(svg, "</g>");
            }
        }
        let ly = MARGIN + 16.0 + 16.0 * i as f64;
        let _ = writeln!(
            svg,
            r#"<line x1="{}" y1="{ly}" x2="{}" y2="{ly}" stroke="{}" stroke-width="2"/>"#,
            WIDTH - MARGIN - 150.0,
            WIDTH - MARGIN - 130.0,
            s.color
        );
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{}" font-family="sans-serif" font-size="12">{}</text>"#,
            WIDTH - MARGIN - 125.0,
            ly + 4.0,
            escape(&s.label)
        );
    }
    svg.push_str("</svg>\n");
    fs::write(path, svg)?;
    Ok(())
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

//! Minimal static SVG line-chart writer for plot-ready exports.

use std::io::Write;
use std::path::Path;

use crate::{Error, Result};

pub struct Series {
    pub name: String,
    pub points: Vec<(f64, f64)>,
}

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 480.0;
const MARGIN: f64 = 60.0;
const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

/// Write a line chart. With `log_y` the y values are plotted on a log10 axis
/// (nonpositive values are dropped).
pub fn write_line_chart(
    path: &Path,
    title: &str,
    x_label: &str,
    y_label: &str,
    series: &[Series],
    log_y: bool,
) -> Result<()> {
    let mut pts: Vec<Vec<(f64, f64)>> = Vec::new();
    for s in series {
        let p: Vec<(f64, f64)> = s
            .points
            .iter()
            .filter(|&&(_, y)| !log_y || y > 0.0)
            .map(|&(x, y)| (x, if log_y { y.log10() } else { y }))
            .collect();
        pts.push(p);
    }
    let all: Vec<(f64, f64)> = pts.iter().flatten().copied().collect();
    if all.is_empty() {
        return Err(Error::InvalidInput("no plottable points".into()));
    }
    let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for &(x, y) in &all {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if x1 == x0 {
        x1 = x0 + 1.0;
    }
    if y1 == y0 {
        y1 = y0 + 1.0;
    }
    let sx = |x: f64| MARGIN + (x - x0) / (x1 - x0) * (WIDTH - 2.0 * MARGIN);
    let sy = |y: f64| HEIGHT - MARGIN - (y - y0) / (y1 - y0) * (HEIGHT - 2.0 * MARGIN);

    let mut w = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(
        w,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    )?;
    writeln!(w, r#"<rect width="100%" height="100%" fill="white"/>"#)?;
    writeln!(
        w,
        r#"<text x="{}" y="24" text-anchor="middle" font-size="16">{}</text>"#,
        WIDTH / 2.0,
        title
    )?;
    // axes
    writeln!(
        w,
        r#"<line x1="{m}" y1="{b}" x2="{r}" y2="{b}" stroke="black"/>"#,
        m = MARGIN,
        b = HEIGHT - MARGIN,
        r = WIDTH - MARGIN
    )?;
    writeln!(
        w,
        r#"<line x1="{m}" y1="{t}" x2="{m}" y2="{b}" stroke="black"/>"#,
        m = MARGIN,
        t = MARGIN,
        b = HEIGHT - MARGIN
    )?;
    writeln!(
        w,
        r#"<text x="{}" y="{}" text-anchor="middle" font-size="12">{}</text>"#,
        WIDTH / 2.0,
        HEIGHT - 16.0,
        x_label
    )?;
    writeln!(
        w,
        r#"<text x="16" y="{}" text-anchor="middle" font-size="12" transform="rotate(-90 16 {})">{}{}</text>"#,
        HEIGHT / 2.0,
        HEIGHT / 2.0,
        if log_y { "log10 " } else { "" },
        y_label
    )?;
    // axis extremes
    for (x, y, txt) in [
        (MARGIN, HEIGHT - MARGIN + 16.0, format!("{x0:.3}")),
        (WIDTH - MARGIN, HEIGHT - MARGIN + 16.0, format!("{x1:.3}")),
    ] {
        writeln!(
            w,
            r#"<text x="{x}" y="{y}" text-anchor="middle" font-size="10">{txt}</text>"#
        )?;
    }
    for (y, txt) in [(HEIGHT - MARGIN, format!("{y0:.3}")), (MARGIN, format!("{y1:.3}"))] {
        writeln!(
            w,
            r#"<text x="{}" y="{}" text-anchor="end" font-size="10">{}</text>"#,
            MARGIN - 6.0,
            y + 4.0,
            txt
        )?;
    }
    for (si, p) in pts.iter().enumerate() {
        if p.is_empty() {
            continue;
        }
        let color = COLORS[si % COLORS.len()];
        let d: Vec<String> = p.iter().map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y))).collect();
        writeln!(
            w,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
            d.join(" ")
        )?;
        writeln!(
            w,
            r#"<text x="{}" y="{}" font-size="12" fill="{color}">{}</text>"#,
            WIDTH - MARGIN + 4.0,
            MARGIN + 16.0 * si as f64,
            series[si].name
        )?;
    }
    writeln!(w, "</svg>")?;
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn writes_valid_svg() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("chart.svg");
        let s = Series {
            name: "decay".into(),
            points: (0..50).map(|i| (1.0 + i as f64, 1.0 / (1.0 + i as f64))).collect(),
        };
        write_line_chart(&p, "test", "t", "norm", &[s], true).unwrap();
        let text = std::fs::read_to_string(&p).unwrap();
        assert!(text.starts_with("<svg"));
        assert!(text.contains("polyline"));
        assert!(text.trim_end().ends_with("</svg>"));
    }

    #[test]
    fn rejects_empty() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("chart.svg");
        assert!(write_line_chart(&p, "t", "x", "y", &[], false).is_err());
    }
}

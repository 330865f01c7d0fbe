//! Minimal self-contained SVG charts. Optional output: the CSV files are
//! the contract, these are for quick visual checks.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::CliResult;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 560.0;
const MARGIN: f64 = 60.0;

const PALETTE: &[&str] = &["#1f77b4", "#d62728", "#ff7f0e", "#9467bd", "#2ca02c"];

fn map_range(v: f64, lo: f64, hi: f64, out_lo: f64, out_hi: f64) -> f64 {
    if hi <= lo {
        return (out_lo + out_hi) / 2.0;
    }
    out_lo + (v - lo) / (hi - lo) * (out_hi - out_lo)
}

fn svg_header(title: &str) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">"
    );
    let _ = writeln!(
        s,
        "<rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>"
    );
    let _ = writeln!(
        s,
        "<text x=\"{}\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">{title}</text>",
        WIDTH / 2.0
    );
    s
}

fn axes(s: &mut String, x_lo: f64, x_hi: f64, y_lo: f64, y_hi: f64, log_y: bool) {
    let _ = writeln!(
        s,
        "<rect x=\"{MARGIN}\" y=\"{MARGIN}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"#444\"/>",
        WIDTH - 2.0 * MARGIN,
        HEIGHT - 2.0 * MARGIN
    );
    let fmt = |v: f64| {
        if log_y {
            format!("1e{v:.1}")
        } else {
            format!("{v:.3}")
        }
    };
    let _ = writeln!(
        s,
        "<text x=\"{MARGIN}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"11\">{:.3}</text>",
        HEIGHT - MARGIN + 16.0,
        x_lo
    );
    let _ = writeln!(
        s,
        "<text x=\"{}\" y=\"{}\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">{:.3}</text>",
        WIDTH - MARGIN,
        HEIGHT - MARGIN + 16.0,
        x_hi
    );
    let _ = writeln!(
        s,
        "<text x=\"{}\" y=\"{}\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">{}</text>",
        MARGIN - 4.0,
        HEIGHT - MARGIN,
        fmt(y_lo)
    );
    let _ = writeln!(
        s,
        "<text x=\"{}\" y=\"{}\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">{}</text>",
        MARGIN - 4.0,
        MARGIN + 10.0,
        fmt(y_hi)
    );
}

/// Line chart of one or more named series; with `log_y`, positive values
/// are drawn on a log10 scale and non-positive points are skipped.
pub fn line_chart(
    path: &Path,
    title: &str,
    series: &[(&str, Vec<(f64, f64)>)],
    log_y: bool,
) -> CliResult<()> {
    let mut pts: Vec<Vec<(f64, f64)>> = Vec::new();
    for (_, data) in series {
        let transformed: Vec<(f64, f64)> = data
            .iter()
            .filter_map(|(x, y)| {
                if log_y {
                    (*y > 0.0).then(|| (*x, y.log10()))
                } else {
                    Some((*x, *y))
                }
            })
            .collect();
        pts.push(transformed);
    }
    let all: Vec<(f64, f64)> = pts.iter().flatten().copied().collect();
    if all.is_empty() {
        return Ok(());
    }
    let x_lo = all.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
    let x_hi = all.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
    let y_lo = all.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
    let y_hi = all.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);

    let mut s = svg_header(title);
    axes(&mut s, x_lo, x_hi, y_lo, y_hi, log_y);
    for (idx, ((name, _), data)) in series.iter().zip(&pts).enumerate() {
        let color = PALETTE[idx % PALETTE.len()];
        let mut poly = String::new();
        for (x, y) in data {
            let px = map_range(*x, x_lo, x_hi, MARGIN, WIDTH - MARGIN);
            let py = map_range(*y, y_lo, y_hi, HEIGHT - MARGIN, MARGIN);
            let _ = write!(poly, "{px:.2},{py:.2} ");
        }
        let _ = writeln!(
            s,
            "<polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"/>",
            poly.trim_end()
        );
        let _ = writeln!(
            s,
            "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\" fill=\"{color}\">{name}</text>",
            WIDTH - MARGIN - 150.0,
            MARGIN + 16.0 * (idx as f64 + 1.0)
        );
    }
    s.push_str("</svg>\n");
    std::fs::write(path, s)?;
    Ok(())
}

/// Scatter of complex points against the unit circle, with optional
/// reference markers.
pub fn spectrum_chart(
    path: &Path,
    title: &str,
    points: &[(f64, f64)],
    reference: &[(f64, f64)],
) -> CliResult<()> {
    let mut s = svg_header(title);
    let cx = WIDTH / 2.0;
    let cy = (HEIGHT + 20.0) / 2.0;
    let radius = (HEIGHT - 2.0 * MARGIN) / 2.0 / 1.15;
    let _ = writeln!(
        s,
        "<circle cx=\"{cx}\" cy=\"{cy}\" r=\"{radius:.2}\" fill=\"none\" stroke=\"#000\"/>"
    );
    for (re, im) in reference {
        let _ = writeln!(
            s,
            "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"5\" fill=\"none\" stroke=\"#d62728\"/>",
            cx + re * radius,
            cy - im * radius
        );
    }
    for (re, im) in points {
        let _ = writeln!(
            s,
            "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"2.5\" fill=\"#1f77b4\"/>",
            cx + re * radius,
            cy - im * radius
        );
    }
    s.push_str("</svg>\n");
    std::fs::write(path, s)?;
    Ok(())
}

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use petal::{Error, Result};

/// Writes `contents` to `dir/name` through a temporary file and a rename.
pub fn write_atomic(dir: &Path, name: &str, contents: &str) -> Result<PathBuf> {
    let io = |e: std::io::Error| Error::InvalidInput(format!("cannot write {}: {e}", dir.join(name).display()));
    fs::create_dir_all(dir).map_err(io)?;
    let target = dir.join(name);
    let tmp = dir.join(format!(".{name}.tmp-{}", std::process::id()));
    let mut file = fs::File::create(&tmp).map_err(io)?;
    file.write_all(contents.as_bytes()).map_err(io)?;
    file.sync_all().map_err(io)?;
    fs::rename(&tmp, &target).map_err(io)?;
    Ok(target)
}

pub fn to_json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("artifact types serialize");
    s.push('\n');
    s
}

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const MARGIN: f64 = 60.0;

/// A single SVG 1.1 polyline through `points` with labelled axis ranges.
pub fn svg_polyline(points: &[(f64, f64)], x_label: &str, y_label: &str, title: &str) -> String {
    let finite: Vec<(f64, f64)> = points.iter().copied().filter(|(x, y)| x.is_finite() && y.is_finite()).collect();
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in &finite {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if finite.is_empty() {
        (x0, x1, y0, y1) = (0.0, 1.0, 0.0, 1.0);
    }
    let pad = |lo: f64, hi: f64| if hi - lo > 0.0 { (lo, hi) } else { (lo - 0.5, hi + 0.5) };
    let (x0, x1) = pad(x0, x1);
    let (y0, y1) = pad(y0, y1);
    let sx = |x: f64| MARGIN + (x - x0) / (x1 - x0) * (WIDTH - 2.0 * MARGIN);
    let sy = |y: f64| HEIGHT - MARGIN - (y - y0) / (y1 - y0) * (HEIGHT - 2.0 * MARGIN);
    let coords: Vec<String> = finite.iter().map(|&(x, y)| format!("{:.3},{:.3}", sx(x), sy(y))).collect();
    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n"
    ));
    out.push_str(&format!("<title>{}</title>\n", escape(title)));
    out.push_str(&format!(
        "<rect x=\"{MARGIN}\" y=\"{MARGIN}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"#888\"/>\n",
        WIDTH - 2.0 * MARGIN,
        HEIGHT - 2.0 * MARGIN
    ));
    out.push_str(&format!(
        "<polyline fill=\"none\" stroke=\"#1f4e9c\" stroke-width=\"1.5\" points=\"{}\"/>\n",
        coords.join(" ")
    ));
    let label = |x: f64, y: f64, anchor: &str, text: String| {
        format!("<text x=\"{x:.1}\" y=\"{y:.1}\" font-size=\"12\" text-anchor=\"{anchor}\">{}</text>\n", escape(&text))
    };
    out.push_str(&label(MARGIN, HEIGHT - MARGIN + 16.0, "start", format!("{x0:.6}")));
    out.push_str(&label(WIDTH - MARGIN, HEIGHT - MARGIN + 16.0, "end", format!("{x1:.6}")));
    out.push_str(&label(WIDTH / 2.0, HEIGHT - 16.0, "middle", x_label.to_string()));
    out.push_str(&label(MARGIN - 6.0, HEIGHT - MARGIN, "end", format!("{y0:.6}")));
    out.push_str(&label(MARGIN - 6.0, MARGIN + 4.0, "end", format!("{y1:.6}")));
    out.push_str(&label(16.0, HEIGHT / 2.0, "start", y_label.to_string()));
    out.push_str(&label(WIDTH / 2.0, 24.0, "middle", title.to_string()));
    out.push_str("</svg>\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Plots a complex curve in the plane, or against `t` when it is real.
pub fn curve_svg(samples: &[(f64, num_complex::Complex64)], title: &str) -> String {
    let scale = samples.iter().map(|(_, z)| z.norm()).fold(0.0, f64::max).max(1.0);
    let flat = samples.iter().all(|(_, z)| z.im.abs() <= 1e-9 * scale);
    if flat {
        let pts: Vec<(f64, f64)> = samples.iter().map(|(t, z)| (*t, z.re)).collect();
        svg_polyline(&pts, "t", "Re", title)
    } else {
        let pts: Vec<(f64, f64)> = samples.iter().map(|(_, z)| (z.re, z.im)).collect();
        svg_polyline(&pts, "Re", "Im", title)
    }
}

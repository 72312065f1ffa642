//! Static SVG polylines of curve families in chart coordinates.

use std::fmt::Write as _;

use geocurve::DiscreteCurve;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 600.0;
const MARGIN: f64 = 40.0;
const LEGEND: f64 = 120.0;

/// Blue at `s = 0` through purple to red at `s = 1`.
fn color(s: f64) -> String {
    let s = s.clamp(0.0, 1.0);
    let r = (40.0 + 200.0 * s).round() as u8;
    let g = 60;
    let b = (240.0 - 200.0 * s).round() as u8;
    format!("#{r:02x}{g:02x}{b:02x}")
}

/// Draws `curves[i]` in the colour of `s = i / (len − 1)`, with `y` pointing up.
pub fn render(curves: &[DiscreteCurve], title: &str) -> String {
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for p in curves.iter().flat_map(|c| c.points()) {
        x0 = x0.min(p.x());
        x1 = x1.max(p.x());
        y0 = y0.min(p.y());
        y1 = y1.max(p.y());
    }
    if !x0.is_finite() {
        (x0, x1, y0, y1) = (0.0, 1.0, 0.0, 1.0);
    }
    let span = (x1 - x0).max(y1 - y0).max(1e-12);
    let plot_w = WIDTH - 2.0 * MARGIN - LEGEND;
    let plot_h = HEIGHT - 2.0 * MARGIN;
    let scale = (plot_w / span).min(plot_h / span);
    let sx = |x: f64| MARGIN + (x - x0) * scale;
    let sy = |y: f64| HEIGHT - MARGIN - (y - y0) * scale;

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(out, r#"<text x="{MARGIN}" y="24" font-family="sans-serif" font-size="14">{}</text>"#, escape(title));
    let last = curves.len().saturating_sub(1).max(1) as f64;
    for (i, c) in curves.iter().enumerate() {
        let pts: Vec<String> = c.points().iter().map(|p| format!("{:.3},{:.3}", sx(p.x()), sy(p.y()))).collect();
        let _ = writeln!(
            out,
            r#"<polyline fill="none" stroke="{}" stroke-width="1.5" points="{}"/>"#,
            color(i as f64 / last),
            pts.join(" ")
        );
    }
    let lx = WIDTH - LEGEND + 10.0;
    for k in 0..=4 {
        let s = k as f64 / 4.0;
        let y = MARGIN + 20.0 * k as f64;
        let _ = writeln!(out, r#"<rect x="{lx}" y="{:.1}" width="14" height="10" fill="{}"/>"#, y, color(s));
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="12">s = {s:.2}</text>"#,
            lx + 20.0,
            y + 10.0
        );
    }
    out.push_str("</svg>\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

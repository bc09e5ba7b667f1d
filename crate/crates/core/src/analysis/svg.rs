use std::fmt::Write as _;

use super::CdfSeries;

const W: f64 = 640.0;
const H: f64 = 400.0;
const PAD: f64 = 48.0;
const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

fn xy(ratio: f64, frac: f64) -> (f64, f64) {
    (PAD + ratio * (W - 2.0 * PAD), H - PAD - frac * (H - 2.0 * PAD))
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// Step-function plot of one or more CDFs on a shared [0,1] x [0,1] frame.
pub fn render_cdf_svg(title: &str, series: &[CdfSeries]) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{}" y="20" text-anchor="middle">{}</text>"#,
        W / 2.0,
        escape(title)
    );
    let (x0, y0) = xy(0.0, 0.0);
    let (x1, y1) = xy(1.0, 1.0);
    let _ = writeln!(
        s,
        r#"<path d="M{x0},{y1} L{x0},{y0} L{x1},{y0}" fill="none" stroke="black"/>"#
    );
    for i in 0..=4 {
        let t = i as f64 / 4.0;
        let (x, _) = xy(t, 0.0);
        let (_, y) = xy(0.0, t);
        let _ = writeln!(
            s,
            r#"<text x="{x}" y="{}" text-anchor="middle">{t:.2}</text>"#,
            y0 + 16.0
        );
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" text-anchor="end">{t:.2}</text>"#,
            x0 - 6.0,
            y + 4.0
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle">inlining ratio</text>"#,
        W / 2.0,
        H - 8.0
    );
    for (k, c) in series.iter().enumerate() {
        let color = COLORS[k % COLORS.len()];
        let mut points = vec![xy(0.0, 0.0)];
        let mut prev = 0.0;
        for &(r, f) in &c.points {
            points.push(xy(r, prev));
            points.push(xy(r, f));
            prev = f;
        }
        points.push(xy(1.0, prev));
        let coords: Vec<String> = points.iter().map(|(x, y)| format!("{x:.1},{y:.1}")).collect();
        let _ = writeln!(
            s,
            r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="2"/>"#,
            coords.join(" ")
        );
        let ly = PAD + 16.0 * k as f64;
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{ly}" fill="{color}">{} ({})</text>"#,
            x0 + 10.0,
            escape(&c.label),
            c.summary
        );
    }
    s.push_str("</svg>\n");
    s
}

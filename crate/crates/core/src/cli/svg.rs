//! Minimal SVG line and bar charts.

use std::fmt::Write as _;

const W: f64 = 640.0;
const H: f64 = 400.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 150.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 50.0;
const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

struct Frame {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
}

impl Frame {
    fn px(&self, x: f64) -> f64 {
        let span = (self.x1 - self.x0).max(1e-12);
        LEFT + (x - self.x0) / span * (W - LEFT - RIGHT)
    }

    fn py(&self, y: f64) -> f64 {
        let span = (self.y1 - self.y0).max(1e-12);
        H - BOTTOM - (y - self.y0) / span * (H - TOP - BOTTOM)
    }
}

fn open(out: &mut String, title: &str, xlabel: &str, ylabel: &str, f: &Frame) {
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">"#
    )
    .unwrap();
    writeln!(out, r#"<rect width="{W}" height="{H}" fill="white"/>"#).unwrap();
    writeln!(out, r#"<text x="{}" y="22" text-anchor="middle" font-size="14">{}</text>"#, W / 2.0, escape(title)).unwrap();
    let (bx, by) = (LEFT, H - BOTTOM);
    writeln!(out, r#"<line x1="{bx}" y1="{by}" x2="{}" y2="{by}" stroke="black"/>"#, W - RIGHT).unwrap();
    writeln!(out, r#"<line x1="{bx}" y1="{TOP}" x2="{bx}" y2="{by}" stroke="black"/>"#).unwrap();
    for k in 0..=4 {
        let y = f.y0 + (f.y1 - f.y0) * k as f64 / 4.0;
        let py = f.py(y);
        writeln!(out, r#"<line x1="{}" y1="{py:.1}" x2="{bx}" y2="{py:.1}" stroke="black"/>"#, bx - 4.0).unwrap();
        writeln!(out, r#"<text x="{}" y="{:.1}" text-anchor="end">{}</text>"#, bx - 6.0, py + 4.0, tick(y)).unwrap();
    }
    writeln!(
        out,
        r#"<text x="{:.1}" y="{}" text-anchor="middle">{}</text>"#,
        (LEFT + W - RIGHT) / 2.0,
        H - 12.0,
        escape(xlabel)
    )
    .unwrap();
    writeln!(
        out,
        r#"<text x="16" y="{:.1}" text-anchor="middle" transform="rotate(-90 16 {:.1})">{}</text>"#,
        H / 2.0,
        H / 2.0,
        escape(ylabel)
    )
    .unwrap();
}

fn tick(v: f64) -> String {
    if v.abs() >= 1000.0 || (v != 0.0 && v.abs() < 0.01) {
        format!("{v:.1e}")
    } else {
        format!("{v:.2}")
    }
}

fn legend(out: &mut String, k: usize, label: &str) {
    let y = TOP + 16.0 * k as f64;
    let x = W - RIGHT + 10.0;
    let c = PALETTE[k % PALETTE.len()];
    writeln!(out, r#"<rect x="{x}" y="{}" width="10" height="10" fill="{c}"/>"#, y - 9.0).unwrap();
    writeln!(out, r#"<text x="{}" y="{y}">{}</text>"#, x + 14.0, escape(label)).unwrap();
}

/// Step-free polylines, one per series of `(x, y)` points.
pub fn line_chart(title: &str, xlabel: &str, ylabel: &str, series: &[(String, Vec<(f64, f64)>)]) -> String {
    let pts = series.iter().flat_map(|s| s.1.iter());
    let (mut x1, mut y1) = (0.0f64, 0.0f64);
    for &(x, y) in pts {
        x1 = x1.max(x);
        y1 = y1.max(y);
    }
    let f = Frame {
        x0: 0.0,
        x1: if x1 > 0.0 { x1 } else { 1.0 },
        y0: 0.0,
        y1: if y1 > 0.0 { y1 } else { 1.0 },
    };
    let mut out = String::new();
    open(&mut out, title, xlabel, ylabel, &f);
    writeln!(out, r#"<text x="{}" y="{}" text-anchor="end">{}</text>"#, W - RIGHT, H - BOTTOM + 16.0, tick(f.x1)).unwrap();
    for (k, (label, points)) in series.iter().enumerate() {
        let c = PALETTE[k % PALETTE.len()];
        let coords: Vec<String> = points.iter().map(|&(x, y)| format!("{:.1},{:.1}", f.px(x), f.py(y))).collect();
        writeln!(out, r#"<polyline fill="none" stroke="{c}" stroke-width="2" points="{}"/>"#, coords.join(" ")).unwrap();
        legend(&mut out, k, label);
    }
    out.push_str("</svg>\n");
    out
}

/// Grouped bars: one group per category, one bar per series.
pub fn bar_chart(title: &str, xlabel: &str, ylabel: &str, categories: &[String], series: &[(String, Vec<f64>)]) -> String {
    let ymax = series.iter().flat_map(|s| s.1.iter().copied()).fold(0.0, f64::max);
    let f = Frame {
        x0: 0.0,
        x1: categories.len().max(1) as f64,
        y0: 0.0,
        y1: if ymax > 0.0 { ymax } else { 1.0 },
    };
    let mut out = String::new();
    open(&mut out, title, xlabel, ylabel, &f);
    let group = (W - LEFT - RIGHT) / categories.len().max(1) as f64;
    let bar = group * 0.8 / series.len().max(1) as f64;
    for (g, cat) in categories.iter().enumerate() {
        let cx = f.px(g as f64 + 0.5);
        writeln!(out, r#"<text x="{cx:.1}" y="{}" text-anchor="middle">{}</text>"#, H - BOTTOM + 16.0, escape(cat)).unwrap();
        for (k, (_, values)) in series.iter().enumerate() {
            let v = values.get(g).copied().unwrap_or(0.0);
            let x = f.px(g as f64) + group * 0.1 + bar * k as f64;
            let y = f.py(v);
            let c = PALETTE[k % PALETTE.len()];
            writeln!(
                out,
                r#"<rect x="{x:.1}" y="{y:.1}" width="{bar:.1}" height="{:.1}" fill="{c}"/>"#,
                (H - BOTTOM - y).max(0.0)
            )
            .unwrap();
        }
    }
    for (k, (label, _)) in series.iter().enumerate() {
        legend(&mut out, k, label);
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn charts_are_well_formed() {
        let l = line_chart("g", "t", "gap", &[("a<b".into(), vec![(0.0, 10.0), (1.0, 0.0)])]);
        assert!(l.starts_with("<svg") && l.ends_with("</svg>\n"));
        assert!(l.contains("a&lt;b") && l.contains("<polyline"));
        let b = bar_chart("t", "gamma", "s", &["0".into(), "2".into()], &[("core".into(), vec![1.0, 2.0])]);
        assert_eq!(b.matches("<rect").count(), 1 + 2 + 1);
    }

    #[test]
    fn empty_series_do_not_panic() {
        assert!(line_chart("e", "x", "y", &[]).contains("</svg>"));
        assert!(bar_chart("e", "x", "y", &[], &[]).contains("</svg>"));
    }
}

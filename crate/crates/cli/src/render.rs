//! Static SVG pictures of a curve in its affine chart.

use std::fmt::Write as _;

use curvelab::{AffineChart, Curve, FeatureSet, InfinityProfile, ProjectiveLine, Vec3};

const WIDTH: f64 = 800.0;
const SAMPLES: usize = 2400;

#[derive(Debug, Clone, Copy)]
struct Window {
    x0: f64,
    y0: f64,
    x1: f64,
    y1: f64,
}

impl Window {
    fn scale(&self) -> f64 {
        WIDTH / (self.x1 - self.x0)
    }

    fn height(&self) -> f64 {
        (self.y1 - self.y0) * self.scale()
    }

    fn screen(&self, p: (f64, f64)) -> (f64, f64) {
        let s = self.scale();
        ((p.0 - self.x0) * s, (self.y1 - p.1) * s)
    }

    fn contains(&self, p: (f64, f64)) -> bool {
        p.0 >= self.x0 && p.0 <= self.x1 && p.1 >= self.y0 && p.1 <= self.y1
    }

    /// Liang–Barsky clip of the affine line `a x + b y + c = 0`.
    fn clip_line(&self, a: f64, b: f64, c: f64) -> Option<((f64, f64), (f64, f64))> {
        let n = a.hypot(b);
        if n == 0.0 {
            return None;
        }
        let (cx, cy) = ((self.x0 + self.x1) / 2.0, (self.y0 + self.y1) / 2.0);
        // Foot of the perpendicular from the window centre.
        let d = (a * cx + b * cy + c) / (n * n);
        let base = (cx - a * d, cy - b * d);
        let dir = (-b / n, a / n);
        let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
        for (p, q) in [
            (-dir.0, base.0 - self.x0),
            (dir.0, self.x1 - base.0),
            (-dir.1, base.1 - self.y0),
            (dir.1, self.y1 - base.1),
        ] {
            if p == 0.0 {
                if q < 0.0 {
                    return None;
                }
            } else if p < 0.0 {
                lo = lo.max(q / p);
            } else {
                hi = hi.min(q / p);
            }
        }
        (lo < hi).then(|| {
            let at = |s: f64| (base.0 + s * dir.0, base.1 + s * dir.1);
            (at(lo), at(hi))
        })
    }
}

fn chart_point(chart: &AffineChart, p: &Vec3) -> Option<(f64, f64)> {
    chart.map_vec(p, 1e-9).ok().map(|q| (q.x, q.y))
}

fn chart_line(chart: &AffineChart, l: &ProjectiveLine) -> (f64, f64, f64) {
    let [e1, e2, e3] = chart.frame();
    let v = l.vec();
    (v.dot(&e1), v.dot(&e2), v.dot(&e3))
}

/// Sampled affine polylines, split wherever the curve passes through L∞.
fn polylines(curve: &Curve, chart: &AffineChart) -> Vec<Vec<(f64, f64)>> {
    let mut out = Vec::new();
    for c in curve.components() {
        let mut current: Vec<(f64, f64)> = Vec::new();
        let mut last_w = 0.0;
        for k in 0..=SAMPLES {
            let t = c.period() * k as f64 / SAMPLES as f64;
            let p = c.point(t);
            let w = chart.weight(&p) / p.norm();
            if w * last_w < 0.0 && !current.is_empty() {
                out.push(std::mem::take(&mut current));
            }
            last_w = w;
            if let Some(q) = chart_point(chart, &p) {
                current.push(q);
            }
        }
        if current.len() > 1 {
            out.push(current);
        }
    }
    out
}

fn window(lines: &[Vec<(f64, f64)>], extra: &[(f64, f64)]) -> Window {
    let mut radii: Vec<f64> = lines.iter().flatten().map(|p| p.0.hypot(p.1)).collect();
    radii.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let median = radii.get(radii.len() / 2).copied().unwrap_or(1.0).max(1e-6);
    let keep = 4.0 * median;
    let (mut x0, mut y0, mut x1, mut y1) = (
        f64::INFINITY,
        f64::INFINITY,
        f64::NEG_INFINITY,
        f64::NEG_INFINITY,
    );
    for p in lines.iter().flatten().chain(extra) {
        if p.0.hypot(p.1) <= keep {
            x0 = x0.min(p.0);
            y0 = y0.min(p.1);
            x1 = x1.max(p.0);
            y1 = y1.max(p.1);
        }
    }
    if !x0.is_finite() {
        return Window {
            x0: -1.0,
            y0: -1.0,
            x1: 1.0,
            y1: 1.0,
        };
    }
    let pad = 0.1 * (x1 - x0).max(y1 - y0).max(1e-3);
    Window {
        x0: x0 - pad,
        y0: y0 - pad,
        x1: x1 + pad,
        y1: y1 + pad,
    }
}

/// Curve polylines, bitangents (`+` solid, `-` dashed), flexes, nodes and the
/// tangents at points of `C ∩ L∞` labelled with `|C∩T|`.
pub fn render_svg(
    curve: &Curve,
    features: &FeatureSet,
    profile: &InfinityProfile,
    chart: &AffineChart,
) -> String {
    let lines = polylines(curve, chart);
    let marks: Vec<(f64, f64)> = features
        .flexes
        .iter()
        .map(|f| f.point.vec())
        .chain(features.nodes.iter().map(|n| n.point.vec()))
        .filter_map(|p| chart_point(chart, &p))
        .collect();
    let win = window(&lines, &marks);
    let mut s = String::new();
    let h = win.height();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH:.0}" height="{h:.0}" viewBox="0 0 {WIDTH:.0} {h:.0}">"#
    )
    .unwrap();
    writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();
    writeln!(
        s,
        r#"<clipPath id="view"><rect x="0" y="0" width="{WIDTH:.0}" height="{h:.0}"/></clipPath>"#
    )
    .unwrap();
    writeln!(s, r#"<g clip-path="url(#view)">"#).unwrap();
    for line in &lines {
        let pts: Vec<String> = line
            .iter()
            .map(|&p| {
                let (x, y) = win.screen(p);
                format!("{x:.2},{y:.2}")
            })
            .collect();
        writeln!(
            s,
            r##"<polyline class="curve" fill="none" stroke="#1f4e9c" stroke-width="1.5" points="{}"/>"##,
            pts.join(" ")
        )
        .unwrap();
    }
    for b in &features.bitangents {
        let (a, bb, c) = chart_line(chart, &b.line);
        let Some((p, q)) = win.clip_line(a, bb, c) else {
            continue;
        };
        let ((x1, y1), (x2, y2)) = (win.screen(p), win.screen(q));
        let style = if b.sign > 0 {
            r##"class="bitangent plus" stroke="#2e8b57""##
        } else {
            r##"class="bitangent minus" stroke="#c0392b" stroke-dasharray="8 5""##
        };
        writeln!(s, r#"<line {style} stroke-width="1" x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}"/>"#).unwrap();
    }
    for e in &profile.entries {
        let (a, b, c) = chart_line(chart, &e.tangent);
        let Some((p, q)) = win.clip_line(a, b, c) else {
            continue;
        };
        let ((x1, y1), (x2, y2)) = (win.screen(p), win.screen(q));
        writeln!(
            s,
            r##"<line class="asymptote" stroke="#777777" stroke-dasharray="2 4" stroke-width="1" x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}"/>"##
        )
        .unwrap();
        // Label near the end of the visible segment, nudged inside the frame.
        let (lx, ly) = (0.9 * x2 + 0.1 * x1, 0.9 * y2 + 0.1 * y1);
        writeln!(
            s,
            r##"<text class="asymptote-label" x="{:.2}" y="{:.2}" font-size="13" fill="#444444">|C∩T|={}</text>"##,
            lx.clamp(4.0, WIDTH - 70.0),
            ly.clamp(14.0, h - 4.0),
            e.count
        )
        .unwrap();
    }
    for f in &features.flexes {
        if let Some(p) = chart_point(chart, &f.point.vec()).filter(|&p| win.contains(p)) {
            let (x, y) = win.screen(p);
            writeln!(
                s,
                r##"<circle class="flex" cx="{x:.2}" cy="{y:.2}" r="4" fill="#e67e22"/>"##
            )
            .unwrap();
        }
    }
    for n in &features.nodes {
        if let Some(p) = chart_point(chart, &n.point.vec()).filter(|&p| win.contains(p)) {
            let (x, y) = win.screen(p);
            writeln!(
                s,
                r##"<rect class="node" x="{:.2}" y="{:.2}" width="8" height="8" fill="#8e44ad"/>"##,
                x - 4.0,
                y - 4.0
            )
            .unwrap();
        }
    }
    writeln!(s, "</g>").unwrap();
    let sc = features.signed_count();
    writeln!(
        s,
        r##"<text class="legend" x="8" y="18" font-size="13" fill="#222222">t={} s={} σ={} n={} i={} a={}</text>"##,
        sc.t,
        sc.s,
        sc.sigma,
        features.n(),
        features.i(),
        profile.a
    )
    .unwrap();
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clip_horizontal_line() {
        let w = Window {
            x0: -1.0,
            y0: -1.0,
            x1: 1.0,
            y1: 1.0,
        };
        let (p, q) = w.clip_line(0.0, 1.0, -0.5).unwrap();
        assert!((p.1 - 0.5).abs() < 1e-12 && (q.1 - 0.5).abs() < 1e-12);
        assert!(((p.0 - q.0).abs() - 2.0).abs() < 1e-12);
        assert!(w.clip_line(0.0, 1.0, -3.0).is_none());
    }
}

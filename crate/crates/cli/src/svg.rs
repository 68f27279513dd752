//! Minimal monochrome SVG rendering for 2-D exponent-region slices.
//! Series are distinguished by dash patterns, not color.

use std::fmt::Write;

pub struct SliceSeries {
    pub name: String,
    /// Vertex positions in data coordinates with their exact-label texts.
    pub points: Vec<(f64, f64, String)>,
    pub dash: &'static str,
}

const W: f64 = 560.0;
const H: f64 = 560.0;
const ML: f64 = 70.0;
const MR: f64 = 30.0;
const MT: f64 = 40.0;
const MB: f64 = 60.0;

struct Mapper {
    lo: f64,
    hi: f64,
}

impl Mapper {
    fn x(&self, v: f64) -> f64 {
        ML + (v - self.lo) / (self.hi - self.lo) * (W - ML - MR)
    }

    fn y(&self, v: f64) -> f64 {
        H - MB - (v - self.lo) / (self.hi - self.lo) * (H - MT - MB)
    }
}

fn fmt_c(v: f64) -> String {
    format!("{:.2}", (v * 1e6).round() / 1e6)
}

/// Order the vertices of a convex set counterclockwise around the centroid.
fn hull_order(points: &[(f64, f64, String)]) -> Vec<usize> {
    if points.len() <= 2 {
        return (0..points.len()).collect();
    }
    let cx = points.iter().map(|p| p.0).sum::<f64>() / points.len() as f64;
    let cy = points.iter().map(|p| p.1).sum::<f64>() / points.len() as f64;
    let mut idx: Vec<usize> = (0..points.len()).collect();
    idx.sort_by(|&a, &b| {
        let ta = (points[a].1 - cy).atan2(points[a].0 - cx);
        let tb = (points[b].1 - cy).atan2(points[b].0 - cx);
        ta.partial_cmp(&tb).unwrap_or(std::cmp::Ordering::Equal)
    });
    idx
}

pub fn render_slice(
    title: &str,
    axis_x: &str,
    axis_y: &str,
    series: &[SliceSeries],
) -> String {
    let mut lo = 0.0f64;
    let mut hi = 0.5f64;
    for s in series {
        for &(x, y, _) in &s.points {
            lo = lo.min(x.min(y));
            hi = hi.max(x.max(y));
        }
    }
    let pad = 0.1 * (hi - lo).max(0.2);
    let map = Mapper { lo: lo - pad, hi: hi + pad };

    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" \
         viewBox=\"0 0 {W} {H}\" font-family=\"monospace\" font-size=\"12\">"
    );
    let _ = writeln!(out, "<rect width=\"{W}\" height=\"{H}\" fill=\"white\"/>");
    let _ = writeln!(
        out,
        "<text x=\"{}\" y=\"24\" text-anchor=\"middle\">{}</text>",
        W / 2.0,
        xml_escape(title)
    );

    // Axes with four ticks each.
    let x0 = map.x(map.lo);
    let x1 = map.x(map.hi);
    let y0 = map.y(map.lo);
    let y1 = map.y(map.hi);
    let _ = writeln!(
        out,
        "<line x1=\"{x0}\" y1=\"{y0}\" x2=\"{x1}\" y2=\"{y0}\" stroke=\"black\"/>"
    );
    let _ = writeln!(
        out,
        "<line x1=\"{x0}\" y1=\"{y0}\" x2=\"{x0}\" y2=\"{y1}\" stroke=\"black\"/>"
    );
    for i in 0..=4 {
        let v = map.lo + (map.hi - map.lo) * i as f64 / 4.0;
        let px = map.x(v);
        let py = map.y(v);
        let _ = writeln!(
            out,
            "<line x1=\"{px}\" y1=\"{y0}\" x2=\"{px}\" y2=\"{}\" stroke=\"black\"/>",
            y0 + 5.0
        );
        let _ = writeln!(
            out,
            "<text x=\"{px}\" y=\"{}\" text-anchor=\"middle\">{}</text>",
            y0 + 20.0,
            fmt_c(v)
        );
        let _ = writeln!(
            out,
            "<line x1=\"{}\" y1=\"{py}\" x2=\"{x0}\" y2=\"{py}\" stroke=\"black\"/>",
            x0 - 5.0
        );
        let _ = writeln!(
            out,
            "<text x=\"{}\" y=\"{}\" text-anchor=\"end\">{}</text>",
            x0 - 8.0,
            py + 4.0,
            fmt_c(v)
        );
    }
    let _ = writeln!(
        out,
        "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>",
        (x0 + x1) / 2.0,
        H - 16.0,
        xml_escape(axis_x)
    );
    let _ = writeln!(
        out,
        "<text x=\"18\" y=\"{}\" text-anchor=\"middle\" transform=\"rotate(-90 18 {})\">{}</text>",
        (y0 + y1) / 2.0,
        (y0 + y1) / 2.0,
        xml_escape(axis_y)
    );

    if series.iter().all(|s| s.points.is_empty()) {
        let _ = writeln!(
            out,
            "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">infeasible</text>",
            (x0 + x1) / 2.0,
            (y0 + y1) / 2.0
        );
        out.push_str("</svg>\n");
        return out;
    }

    for (si, s) in series.iter().enumerate() {
        let dash = if s.dash.is_empty() {
            String::new()
        } else {
            format!(" stroke-dasharray=\"{}\"", s.dash)
        };
        let order = hull_order(&s.points);
        if order.len() >= 2 {
            let mut path = String::new();
            for (k, &i) in order.iter().enumerate() {
                let cmd = if k == 0 { 'M' } else { 'L' };
                let _ = write!(path, "{cmd}{} {} ", map.x(s.points[i].0), map.y(s.points[i].1));
            }
            if order.len() > 2 {
                path.push('Z');
            }
            let _ = writeln!(
                out,
                "<path d=\"{path}\" fill=\"none\" stroke=\"black\" stroke-width=\"1.5\"{dash}/>"
            );
        }
        for &(x, y, ref label) in &s.points {
            let px = map.x(x);
            let py = map.y(y);
            let _ = writeln!(
                out,
                "<circle cx=\"{px}\" cy=\"{py}\" r=\"3\" fill=\"black\"/>"
            );
            let _ = writeln!(
                out,
                "<text x=\"{}\" y=\"{}\">{}</text>",
                px + 6.0,
                py - 6.0,
                xml_escape(label)
            );
        }
        // Legend entry: a dash sample plus the series name.
        let ly = MT + 16.0 * si as f64;
        let _ = writeln!(
            out,
            "<line x1=\"{}\" y1=\"{ly}\" x2=\"{}\" y2=\"{ly}\" stroke=\"black\" stroke-width=\"1.5\"{dash}/>",
            W - MR - 140.0,
            W - MR - 110.0
        );
        let _ = writeln!(
            out,
            "<text x=\"{}\" y=\"{}\">{}</text>",
            W - MR - 104.0,
            ly + 4.0,
            xml_escape(&s.name)
        );
    }
    out.push_str("</svg>\n");
    out
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

//! Minimal SVG 1.1 writer for curves and frame glyphs.

use std::fmt::Write;

use crate::num::g9;

/// Arrow glyphs at one base point.
pub struct Glyph {
    pub base: [f64; 2],
    /// `(class, vector)`, for example `("t", [1.0, 0.5])`.
    pub arrows: Vec<(&'static str, [f64; 2])>,
}

pub struct Plot {
    /// Runs of consecutive drawable points; each becomes one polyline.
    pub runs: Vec<Vec<[f64; 2]>>,
    pub glyphs: Vec<Glyph>,
    pub title: String,
}

const WIDTH: f64 = 800.0;
const MARGIN: f64 = 0.05;
/// Longest arrow as a fraction of the view diagonal.
const ARROW_FRACTION: f64 = 0.1;

fn color(class: &str) -> &'static str {
    match class {
        "e1" => "#d62728",
        "e2" => "#1f77b4",
        "t" => "#2ca02c",
        _ => "#9467bd",
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

impl Plot {
    pub fn render(&self) -> String {
        let pts = self.runs.iter().flatten();
        let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
        for p in pts {
            x0 = x0.min(p[0]);
            x1 = x1.max(p[0]);
            y0 = y0.min(p[1]);
            y1 = y1.max(p[1]);
        }
        let span = (x1 - x0).max(y1 - y0).max(1e-12);
        let diag = ((x1 - x0).powi(2) + (y1 - y0).powi(2)).sqrt().max(span);
        let longest = self
            .glyphs
            .iter()
            .flat_map(|g| g.arrows.iter())
            .map(|(_, v)| v[0].hypot(v[1]))
            .fold(0.0, f64::max);
        let scale = if longest > 0.0 { ARROW_FRACTION * diag / longest } else { 0.0 };
        // include arrow tips in the view
        for g in &self.glyphs {
            for (_, v) in &g.arrows {
                let tip = [g.base[0] + scale * v[0], g.base[1] + scale * v[1]];
                x0 = x0.min(tip[0]);
                x1 = x1.max(tip[0]);
                y0 = y0.min(tip[1]);
                y1 = y1.max(tip[1]);
            }
        }
        let (w, h) = ((x1 - x0).max(1e-12), (y1 - y0).max(1e-12));
        let (mx, my) = (MARGIN * w, MARGIN * h);
        // y grows downwards in SVG; plot (x, -y)
        let vb = [x0 - mx, -y1 - my, w + 2.0 * mx, h + 2.0 * my];
        let height = WIDTH * vb[3] / vb[2];
        let stroke = 0.002 * vb[2].max(vb[3]);

        let mut out = String::new();
        out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
        let _ = writeln!(
            out,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{}\" height=\"{}\" viewBox=\"{} {} {} {}\">",
            g9(WIDTH),
            g9(height),
            g9(vb[0]),
            g9(vb[1]),
            g9(vb[2]),
            g9(vb[3])
        );
        let _ = writeln!(out, "<title>{}</title>", escape(&self.title));
        let border = [
            [vb[0], vb[1]],
            [vb[0] + vb[2], vb[1]],
            [vb[0] + vb[2], vb[1] + vb[3]],
            [vb[0], vb[1] + vb[3]],
            [vb[0], vb[1]],
        ];
        let _ = writeln!(
            out,
            "<polyline class=\"border\" fill=\"none\" stroke=\"#cccccc\" stroke-width=\"{}\" points=\"{}\"/>",
            g9(stroke),
            points(border.iter().map(|p| [p[0], -p[1]]))
        );
        for run in &self.runs {
            let _ = writeln!(
                out,
                "<polyline class=\"curve\" fill=\"none\" stroke=\"#000000\" stroke-width=\"{}\" points=\"{}\"/>",
                g9(stroke),
                points(run.iter().copied())
            );
        }
        for g in &self.glyphs {
            out.push_str("<g class=\"frame\">\n");
            for (class, v) in &g.arrows {
                let (bx, by) = (g.base[0], -g.base[1]);
                let (tx, ty) = (bx + scale * v[0], by - scale * v[1]);
                let (dx, dy) = (tx - bx, ty - by);
                let len = dx.hypot(dy);
                if len == 0.0 {
                    continue;
                }
                let head = 0.25 * len;
                let (ux, uy) = (dx / len, dy / len);
                let left = [tx - head * (ux - 0.4 * uy), ty - head * (uy + 0.4 * ux)];
                let right = [tx - head * (ux + 0.4 * uy), ty - head * (uy - 0.4 * ux)];
                let c = color(class);
                let _ = writeln!(
                    out,
                    "<g class=\"arrow {class}\"><line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{c}\" stroke-width=\"{}\"/><polygon fill=\"{c}\" points=\"{} {},{} {},{} {}\"/></g>",
                    g9(bx),
                    g9(by),
                    g9(tx),
                    g9(ty),
                    g9(stroke),
                    g9(tx),
                    g9(ty),
                    g9(left[0]),
                    g9(left[1]),
                    g9(right[0]),
                    g9(right[1])
                );
            }
            out.push_str("</g>\n");
        }
        out.push_str("</svg>\n");
        out
    }
}

fn points(it: impl Iterator<Item = [f64; 2]>) -> String {
    it.map(|p| format!("{},{}", g9(p[0]), g9(-p[1])))
        .collect::<Vec<_>>()
        .join(" ")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn structure() {
        let plot = Plot {
            runs: vec![vec![[0.0, 0.0], [1.0, 1.0], [2.0, 4.0]]],
            glyphs: vec![Glyph {
                base: [1.0, 1.0],
                arrows: vec![("t", [1.0, 2.0]), ("n", [0.0, 1.0])],
            }],
            title: "a < b".into(),
        };
        let svg = plot.render();
        assert!(svg.starts_with("<?xml"));
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert_eq!(svg.matches("class=\"arrow").count(), 2);
        assert!(svg.contains("a &lt; b"));
        assert!(svg.trim_end().ends_with("</svg>"));
    }
}

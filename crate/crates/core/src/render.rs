//! SVG drawing of Σ(p,q): upper vertices on a top row, lower vertices on a
//! bottom row, one band per ribbon, and highlighted curves drawn as closed
//! polylines offset to the side of each ribbon they run along.

use std::fmt::Write;

use crate::curves::CurveWalk;
use crate::surface::{RibbonGraph, Side, Vertex};

/// All cosmetic constants of the drawing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Layout {
    pub margin: f64,
    pub vertex_spacing: f64,
    pub row_gap: f64,
    pub vertex_radius: f64,
    pub band_width: f64,
    pub curve_offset: f64,
    pub curve_stroke: f64,
}

pub const LAYOUT: Layout = Layout {
    margin: 40.0,
    vertex_spacing: 80.0,
    row_gap: 240.0,
    vertex_radius: 14.0,
    band_width: 12.0,
    curve_offset: 3.5,
    curve_stroke: 1.6,
};

const BAND_FILL: &str = "#c9d7ea";
const BAND_STROKE: &str = "#5b7aa6";
const VERTEX_FILL: &str = "#f4f4f4";
const PALETTE: [&str; 6] = ["#d1495b", "#edae49", "#00798c", "#30638e", "#6a4c93", "#3a7d44"];

struct Frame {
    p: usize,
    q: usize,
    width: f64,
    layout: Layout,
}

impl Frame {
    fn x(&self, i: usize, count: usize) -> f64 {
        let row = (count.max(1) - 1) as f64 * self.layout.vertex_spacing;
        self.width / 2.0 - row / 2.0 + i as f64 * self.layout.vertex_spacing
    }

    fn upper(&self, u: usize) -> (f64, f64) {
        (self.x(u, self.p), self.layout.margin + self.layout.vertex_radius)
    }

    fn lower(&self, l: usize) -> (f64, f64) {
        let (_, y) = self.upper(0);
        (self.x(l, self.q), y + self.layout.row_gap)
    }

    fn at(&self, v: Vertex) -> (f64, f64) {
        match v {
            Vertex::Upper(u) => self.upper(u),
            Vertex::Lower(l) => self.lower(l),
        }
    }
}

/// Unit normal of the segment a → b, pointing to its right in screen space.
fn normal(a: (f64, f64), b: (f64, f64)) -> (f64, f64) {
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let len = dx.hypot(dy).max(f64::EPSILON);
    (-dy / len, dx / len)
}

fn fmt_pt(s: &mut String, (x, y): (f64, f64)) {
    // -0.00 and 0.00 must print the same
    let clean = |v: f64| if v.abs() < 0.005 { 0.0 } else { v };
    let _ = write!(s, "{:.2},{:.2} ", clean(x), clean(y));
}

pub fn render_svg(g: &RibbonGraph, highlights: &[CurveWalk]) -> String {
    render_svg_with(g, highlights, LAYOUT)
}

pub fn render_svg_with(g: &RibbonGraph, highlights: &[CurveWalk], layout: Layout) -> String {
    let (p, q) = (g.p(), g.q());
    let width = 2.0 * layout.margin + (p.max(q) - 1) as f64 * layout.vertex_spacing + 2.0 * layout.vertex_radius;
    let height = 2.0 * layout.margin + layout.row_gap + 2.0 * layout.vertex_radius;
    let frame = Frame { p, q, width, layout };
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}">"#
    );
    let _ = writeln!(s, "<title>Σ({p},{q})</title>");
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);

    let _ = writeln!(s, r#"<g id="bands" fill="{BAND_FILL}" fill-opacity="0.55" stroke="{BAND_STROKE}" stroke-width="0.6">"#);
    for e in g.edges() {
        let a = frame.upper(e.upper as usize);
        let b = frame.lower(e.lower as usize);
        let n = normal(a, b);
        let h = layout.band_width / 2.0;
        let mut pts = String::new();
        for (base, sign) in [(a, 1.0), (b, 1.0), (b, -1.0), (a, -1.0)] {
            fmt_pt(&mut pts, (base.0 + sign * h * n.0, base.1 + sign * h * n.1));
        }
        let _ = writeln!(
            s,
            r#"<polygon data-ribbon="{},{}" points="{}"/>"#,
            e.upper,
            e.lower,
            pts.trim_end()
        );
    }
    let _ = writeln!(s, "</g>");

    let _ = writeln!(s, r#"<g id="vertices" fill="{VERTEX_FILL}" stroke="black" stroke-width="1">"#);
    for u in 0..p {
        let (x, y) = frame.upper(u);
        let _ = writeln!(s, r#"<circle cx="{x:.2}" cy="{y:.2}" r="{:.2}"/>"#, layout.vertex_radius);
    }
    for l in 0..q {
        let (x, y) = frame.lower(l);
        let _ = writeln!(s, r#"<circle cx="{x:.2}" cy="{y:.2}" r="{:.2}"/>"#, layout.vertex_radius);
    }
    let _ = writeln!(s, "</g>");

    let _ = writeln!(s, r#"<g id="labels" font-family="monospace" font-size="11" text-anchor="middle">"#);
    for u in 0..p {
        let (x, y) = frame.upper(u);
        let _ = writeln!(s, r#"<text x="{x:.2}" y="{:.2}">u{u}</text>"#, y + 4.0);
    }
    for l in 0..q {
        let (x, y) = frame.lower(l);
        let _ = writeln!(s, r#"<text x="{x:.2}" y="{:.2}">l{l}</text>"#, y + 4.0);
    }
    let _ = writeln!(s, "</g>");

    if !highlights.is_empty() {
        let _ = writeln!(s, r#"<g id="curves" fill="none" stroke-width="{:.2}" stroke-linejoin="round">"#, layout.curve_stroke);
        for (i, c) in highlights.iter().enumerate() {
            let mut pts = String::new();
            for step in &c.walk.steps {
                let a = frame.upper(step.edge.upper as usize);
                let b = frame.lower(step.edge.lower as usize);
                let n = normal(a, b);
                let sign = match step.side {
                    Side::Left => -1.0,
                    Side::Right => 1.0,
                };
                let off = (sign * layout.curve_offset * n.0, sign * layout.curve_offset * n.1);
                for v in [step.tail(), step.head()] {
                    let (x, y) = frame.at(v);
                    fmt_pt(&mut pts, (x + off.0, y + off.1));
                }
            }
            let _ = writeln!(
                s,
                r#"<polygon data-curve="{}" stroke="{}" points="{}"/>"#,
                c.id,
                PALETTE[i % PALETTE.len()],
                pts.trim_end()
            );
        }
        let _ = writeln!(s, "</g>");
    }
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::{realize_curve, CurveId};
    use crate::surface::build_surface;

    #[test]
    fn band_count() {
        let svg = render_svg(&build_surface(3, 4).unwrap(), &[]);
        assert_eq!(svg.matches("data-ribbon=").count(), 12);
        assert_eq!(svg.matches("<circle").count(), 7);
        assert!(!svg.contains("data-curve"));
        let one = render_svg(&build_surface(1, 1).unwrap(), &[]);
        assert_eq!(one.matches("data-ribbon=").count(), 1);
    }

    #[test]
    fn highlighted_curve_is_closed_loop() {
        let g = build_surface(3, 6).unwrap();
        let w = realize_curve(&g, &CurveId::new(0, &[0, 1, 2]).unwrap()).unwrap();
        let svg = render_svg(&g, &[w]);
        assert_eq!(svg.matches("data-curve=").count(), 1);
        assert!(svg.contains(r#"data-curve="(u=0, {0,1,2})""#));
    }

    #[test]
    fn deterministic() {
        let g = build_surface(4, 6).unwrap();
        assert_eq!(render_svg(&g, &[]), render_svg(&g, &[]));
    }
}

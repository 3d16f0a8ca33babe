//! Static SVG rendering of a divide, its doubled curves, the push-off
//! copy, and the resolved diagram with over/under gaps.
//!
//! All topology is decided upstream in exact arithmetic; floats appear
//! only here, at emission time.

use crate::diagram::build_diagram;
use crate::doubling::{double, layout, offset, winding_events, GeometryError, OffsetSide};
use crate::geom::{Pt, Q};
use crate::tangle::Validated;
use num::ToPrimitive;
use std::fmt::Write;

const SCALE: f64 = 64.0;
const PAD: f64 = 40.0;

#[derive(Clone, Copy, Debug)]
pub struct RenderOptions {
    pub show_divide: bool,
    pub show_doubled: bool,
    pub show_offset: bool,
    pub show_diagram_gaps: bool,
    pub offset_side: OffsetSide,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions {
            show_divide: true,
            show_doubled: true,
            show_offset: true,
            show_diagram_gaps: true,
            offset_side: OffsetSide::Left,
        }
    }
}

struct Mapper {
    min_x: f64,
    max_y: f64,
}

impl Mapper {
    fn map(&self, p: &Pt) -> (f64, f64) {
        let x = p.x.to_f64().unwrap_or(0.0);
        let y = p.y.to_f64().unwrap_or(0.0);
        ((x - self.min_x) * SCALE + PAD, (self.max_y - y) * SCALE + PAD)
    }
}

fn qf(q: Q) -> f64 {
    q.to_f64().unwrap_or(0.0)
}

fn path_of(points: &[Pt], m: &Mapper, close: bool) -> String {
    let mut s = String::new();
    for (i, p) in points.iter().enumerate() {
        let (x, y) = m.map(p);
        let _ = write!(s, "{}{x:.2},{y:.2} ", if i == 0 { "M" } else { "L" });
    }
    if close {
        s.push('Z');
    }
    s
}

const CURVE_COLORS: [&str; 6] = ["#c0392b", "#2980b9", "#27ae60", "#8e44ad", "#d35400", "#16a085"];

/// Render the requested layers of one divide as a standalone SVG.
pub fn render_svg(v: &Validated, opts: &RenderOptions) -> Result<String, GeometryError> {
    let sketch = layout(v);
    let d = double(v)?;
    let off = if opts.show_offset {
        Some(offset(&d, opts.offset_side)?)
    } else {
        None
    };

    // Extent over everything drawn.
    let mut min_x = f64::MAX;
    let mut max_x = f64::MIN;
    let mut min_y = f64::MAX;
    let mut max_y = f64::MIN;
    let mut extend = |p: &Pt| {
        let x = qf(p.x);
        let y = qf(p.y);
        min_x = min_x.min(x);
        max_x = max_x.max(x);
        min_y = min_y.min(y);
        max_y = max_y.max(y);
    };
    for s in &sketch.strands {
        for p in s {
            extend(p);
        }
    }
    for c in &d.curves {
        for p in &c.pts {
            extend(p);
        }
    }
    if let Some(o) = &off {
        for c in &o.curves {
            for p in &c.pts {
                extend(p);
            }
        }
    }
    let m = Mapper { min_x, max_y };
    let width = (max_x - min_x) * SCALE + 2.0 * PAD;
    let height = (max_y - min_y) * SCALE + 2.0 * PAD;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);

    if opts.show_divide {
        let _ = writeln!(svg, r##"<g id="divide" stroke="#999" stroke-width="7" fill="none" stroke-linecap="round" stroke-linejoin="round">"##);
        for s in &sketch.strands {
            let _ = writeln!(svg, r#"<path d="{}"/>"#, path_of(s, &m, false));
        }
        let _ = writeln!(svg, "</g>");
        let _ = writeln!(svg, r#"<g id="divide-marks">"#);
        for p in &sketch.vertices {
            let (x, y) = m.map(p);
            let _ = writeln!(svg, r##"<circle cx="{x:.2}" cy="{y:.2}" r="5" fill="#555"/>"##);
        }
        for p in &sketch.double_points {
            let (x, y) = m.map(p);
            let _ = writeln!(
                svg,
                r##"<circle cx="{x:.2}" cy="{y:.2}" r="4" fill="none" stroke="#555" stroke-width="1.5"/>"##
            );
        }
        let _ = writeln!(svg, "</g>");
    }

    if let Some(o) = &off {
        let _ = writeln!(svg, r##"<g id="offset" stroke="#7f8c8d" stroke-width="1" fill="none" stroke-dasharray="4 3">"##);
        for c in &o.curves {
            let _ = writeln!(svg, r#"<path d="{}"/>"#, path_of(&c.pts, &m, true));
        }
        let _ = writeln!(svg, "</g>");
    }

    if opts.show_doubled {
        if opts.show_diagram_gaps {
            render_with_gaps(&mut svg, &d.curves, &m)?;
        } else {
            let _ = writeln!(svg, r#"<g id="doubled" fill="none" stroke-width="2">"#);
            for (i, c) in d.curves.iter().enumerate() {
                let color = CURVE_COLORS[i % CURVE_COLORS.len()];
                let _ = writeln!(
                    svg,
                    r#"<path d="{}" stroke="{color}"/>"#,
                    path_of(&c.pts, &m, true)
                );
            }
            let _ = writeln!(svg, "</g>");
        }
        // Orientation arrowheads and winding-event ticks.
        let _ = writeln!(svg, r#"<g id="marks">"#);
        for (i, c) in d.curves.iter().enumerate() {
            let color = CURVE_COLORS[i % CURVE_COLORS.len()];
            // Arrow at the midpoint of the longest segment.
            let mut best = 0usize;
            let mut best_len = -1.0f64;
            for s in c.segments() {
                let (a, b) = c.seg(s);
                let dx = qf(b.x - a.x);
                let dy = qf(b.y - a.y);
                let l = dx * dx + dy * dy;
                if l > best_len {
                    best_len = l;
                    best = s;
                }
            }
            let (a, b) = c.seg(best);
            let (ax, ay) = m.map(a);
            let (bx, by) = m.map(b);
            let (mx, my) = ((ax + bx) / 2.0, (ay + by) / 2.0);
            let (ux, uy) = {
                let (dx, dy) = (bx - ax, by - ay);
                let l = (dx * dx + dy * dy).sqrt().max(1e-9);
                (dx / l, dy / l)
            };
            let (nx, ny) = (-uy, ux);
            let s = 6.0;
            let _ = writeln!(
                svg,
                r#"<path d="M{:.2},{:.2} L{:.2},{:.2} L{:.2},{:.2} Z" fill="{color}"/>"#,
                mx + ux * s,
                my + uy * s,
                mx - ux * s + nx * s * 0.7,
                my - uy * s + ny * s * 0.7,
                mx - ux * s - nx * s * 0.7,
                my - uy * s - ny * s * 0.7
            );
            for (p, orient) in winding_events(c) {
                let (x, y) = m.map(&p);
                let glyph = if orient > 0 { "+" } else { "-" };
                let _ = writeln!(
                    svg,
                    r##"<circle cx="{x:.2}" cy="{y:.2}" r="3.5" fill="white" stroke="{color}" stroke-width="1"/><text x="{x:.2}" y="{:.2}" font-size="8" text-anchor="middle" fill="{color}">{glyph}</text>"##,
                    y + 2.8
                );
            }
        }
        let _ = writeln!(svg, "</g>");
    }

    let _ = writeln!(svg, "</svg>");
    Ok(svg)
}

/// Draw the doubled curves with the under-strand broken at each
/// crossing, per the resolved diagram.
fn render_with_gaps(
    svg: &mut String,
    curves: &[crate::geom::PlCurve],
    m: &Mapper,
) -> Result<(), GeometryError> {
    let diag = build_diagram(curves)?;
    let gap = 0.09;
    let _ = writeln!(svg, r#"<g id="diagram" fill="none" stroke-width="2">"#);
    for (ci, c) in curves.iter().enumerate() {
        let color = CURVE_COLORS[ci % CURVE_COLORS.len()];
        let mut dcmd = String::new();
        for s in c.segments() {
            let (a, b) = c.seg(s);
            // Under-points on this segment.
            let mut cuts: Vec<f64> = Vec::new();
            let (ax, ay) = (qf(a.x), qf(a.y));
            let (bx, by) = (qf(b.x), qf(b.y));
            let len = ((bx - ax).powi(2) + (by - ay).powi(2)).sqrt().max(1e-9);
            for x in &diag.crossings {
                if x.under_curve == ci {
                    let (px, py) = (qf(x.point.x), qf(x.point.y));
                    // Is the point on this segment? Parameter in [0,1].
                    let t = ((px - ax) * (bx - ax) + (py - ay) * (by - ay)) / (len * len);
                    let qx = ax + t * (bx - ax);
                    let qy = ay + t * (by - ay);
                    if (qx - px).abs() < 1e-9 && (qy - py).abs() < 1e-9 && (0.0..=1.0).contains(&t)
                    {
                        cuts.push(t);
                    }
                }
            }
            cuts.sort_by(|x, y| x.partial_cmp(y).unwrap());
            let g = gap / len;
            let mut t0 = 0.0;
            let at = |t: f64| Pt::new(
                a.x + (b.x - a.x) * Q::new((t * 10000.0) as i128, 10000),
                a.y + (b.y - a.y) * Q::new((t * 10000.0) as i128, 10000),
            );
            for &t in &cuts {
                let t1 = (t - g).max(t0);
                if t1 > t0 {
                    let p0 = at(t0);
                    let p1 = at(t1);
                    let (x0, y0) = m.map(&p0);
                    let (x1, y1) = m.map(&p1);
                    let _ = write!(dcmd, "M{x0:.2},{y0:.2} L{x1:.2},{y1:.2} ");
                }
                t0 = (t + g).min(1.0);
            }
            let p0 = at(t0);
            let (x0, y0) = m.map(&p0);
            let (x1, y1) = m.map(b);
            let _ = write!(dcmd, "M{x0:.2},{y0:.2} L{x1:.2},{y1:.2} ");
        }
        let _ = writeln!(svg, r#"<path d="{dcmd}" stroke="{color}"/>"#);
    }
    let _ = writeln!(svg, "</g>");
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse;

    #[test]
    fn svg_renders_and_is_deterministic() {
        let v = parse("( | X | >+ >+").unwrap();
        let a = render_svg(&v, &RenderOptions::default()).unwrap();
        let b = render_svg(&v, &RenderOptions::default()).unwrap();
        assert_eq!(a, b);
        assert!(a.starts_with("<svg"));
        assert!(a.contains("divide"));
        assert!(a.trim_end().ends_with("</svg>"));
    }
}

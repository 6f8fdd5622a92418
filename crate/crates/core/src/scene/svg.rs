//! SVG snapshot of a scene: one shape per element, in z order.

use std::fmt::Write;

use crate::elements::{Element, ElementKind};
use crate::geometry::{Point, Rect, SegmentPiece};

use super::Scene;

fn esc(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

fn pt(p: Point) -> String {
    format!("{} {}", p.x, p.y)
}

fn arc_cmd(out: &mut String, center: Point, r: f64, start: f64, sweep: f64) {
    // SVG arcs cannot draw a full turn in one command; split into halves.
    let parts = if sweep.abs() > std::f64::consts::PI { 2 } else { 1 };
    let step = sweep / parts as f64;
    for k in 1..=parts {
        let end = Point::polar(center, r, start + step * k as f64);
        let large = u8::from(step.abs() > std::f64::consts::PI);
        let flag = u8::from(step > 0.0);
        let _ = write!(out, " A {r} {r} 0 {large} {flag} {}", pt(end));
    }
}

fn contour_d(out: &mut String, pieces: &[SegmentPiece]) {
    let _ = write!(out, "M {}", pt(pieces[0].start()));
    for p in pieces {
        match *p {
            SegmentPiece::Line { b, .. } => {
                let _ = write!(out, " L {}", pt(b));
            }
            SegmentPiece::Arc { center, radius, start_angle, sweep } => {
                arc_cmd(out, center, radius, start_angle, sweep)
            }
        }
    }
    out.push_str(" Z");
}

fn element_svg(e: &Element) -> String {
    let id = e.id.0;
    match &e.kind {
        ElementKind::Polygon(p) => {
            let mut d = String::new();
            contour_d(&mut d, &p.geom.outer.pieces);
            for h in &p.geom.holes {
                d.push(' ');
                contour_d(&mut d, &h.pieces);
            }
            format!(r#"<path data-id="{id}" fill-rule="evenodd" d="{d}"/>"#)
        }
        ElementKind::Circle(c) => {
            format!(r#"<circle data-id="{id}" cx="{}" cy="{}" r="{}"/>"#, c.center.x, c.center.y, c.r)
        }
        ElementKind::Pie(p) => {
            let mut d = String::new();
            for i in 0..p.shares.len() {
                let a0 = p.divider_angle(i);
                let sweep = p.shares[i].to_radians();
                if p.inner_r > 0.0 {
                    let _ = write!(d, "M {}", pt(Point::polar(p.center, p.inner_r, a0)));
                    let _ = write!(d, " L {}", pt(Point::polar(p.center, p.outer_r, a0)));
                    arc_cmd(&mut d, p.center, p.outer_r, a0, sweep);
                    let _ = write!(d, " L {}", pt(Point::polar(p.center, p.inner_r, a0 + sweep)));
                    arc_cmd(&mut d, p.center, p.inner_r, a0 + sweep, -sweep);
                } else {
                    let _ = write!(d, "M {}", pt(p.center));
                    let _ = write!(d, " L {}", pt(Point::polar(p.center, p.outer_r, a0)));
                    arc_cmd(&mut d, p.center, p.outer_r, a0, sweep);
                }
                d.push_str(" Z ");
            }
            format!(r#"<path data-id="{id}" d="{}"/>"#, d.trim_end())
        }
        ElementKind::Control(c) => rect_svg(id, &c.rect, &format!(r#" data-tag="{}""#, esc(&c.tag))),
        ElementKind::PlotArea(a) => rect_svg(id, &a.rect, ""),
        ElementKind::Scale(s) => rect_svg(id, &s.rect, ""),
        ElementKind::Comment(c) => format!(
            r#"<text data-id="{id}" x="{}" y="{}" transform="rotate({} {} {})">{}</text>"#,
            c.anchor.x,
            c.anchor.y + crate::elements::COMMENT_HEIGHT * 0.75,
            c.angle.to_degrees(),
            c.anchor.x,
            c.anchor.y,
            esc(&c.text)
        ),
        ElementKind::Spot(s) => {
            format!(r#"<circle data-id="{id}" cx="{}" cy="{}" r="{}"/>"#, s.center.x, s.center.y, s.r)
        }
        ElementKind::Labyrinth(l) => {
            let d: Vec<String> = l.walls.iter().map(|w| format!("M {} L {}", pt(w.a), pt(w.b))).collect();
            format!(r#"<path data-id="{id}" fill="none" stroke-width="{}" d="{}"/>"#, l.thickness, d.join(" "))
        }
        ElementKind::Path(p) => {
            let d: Vec<String> = p.pts.iter().enumerate().map(|(i, &q)| {
                format!("{} {}", if i == 0 { "M" } else { "L" }, pt(q))
            }).collect();
            format!(r#"<path data-id="{id}" fill="none" d="{}"/>"#, d.join(" "))
        }
    }
}

fn rect_svg(id: u32, r: &Rect, extra: &str) -> String {
    format!(
        r#"<rect data-id="{id}"{extra} x="{}" y="{}" width="{}" height="{}"/>"#,
        r.min.x,
        r.min.y,
        r.width(),
        r.height()
    )
}

/// Renders the scene as an SVG document, elements in z order.
pub fn to_svg(scene: &Scene) -> String {
    let view = scene
        .elements()
        .iter()
        .map(|e| e.bbox())
        .reduce(|a, b| a.union(&b))
        .map(|r| r.expand(10.0))
        .unwrap_or(Rect::from_coords(0.0, 0.0, 100.0, 100.0));
    let mut out = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{} {} {} {}\">\n",
        view.min.x,
        view.min.y,
        view.width(),
        view.height()
    );
    for e in scene.elements() {
        out.push_str("  ");
        out.push_str(&element_svg(e));
        out.push('\n');
    }
    out.push_str("</svg>\n");
    out
}

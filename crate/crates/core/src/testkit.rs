//! Seeded generators and brute-force oracles.
//!
//! The oracles deliberately share no code with the geometry they check:
//! containment is decided by casting a ray against the exact line and arc
//! pieces (no flattening), distances are computed from scratch, and the hit
//! oracle evaluates every cover node on its own.

use std::f64::consts::TAU;

use rand::Rng;

use crate::apps::analyser::{add_comment, add_plot, FunctionDef};
use crate::apps::labyrinth::{add_maze, add_path_spot, spot_is_clear};
use crate::cover::{build_cover, Cover, NodeShape};
use crate::elements::{
    CircleEl, CommentEl, ControlEl, Element, ElementId, ElementKind, LabyrinthEl, PieEl, PolygonEl, SpotEl,
    SpotMode, Wall, WorldRect,
};
use crate::engine::{Button, PointerEvent};
use crate::geometry::{Contour, Point, Rect, SegmentPiece, ShapeGeom};
use crate::scene::Scene;

/// Width of the band around node boundaries inside which flattened and exact
/// shapes may legitimately disagree.
pub const BOUNDARY_BAND: f64 = 0.25;

pub mod oracle {
    use super::*;

    fn on_arc(start: f64, sweep: f64, phi: f64) -> bool {
        if sweep.abs() >= TAU {
            return true;
        }
        let t = if sweep > 0.0 { (phi - start).rem_euclid(TAU) } else { (start - phi).rem_euclid(TAU) };
        t <= sweep.abs()
    }

    /// Crossings of the ray `p + s*(1,0)`, `s > 0`, with one piece. Line
    /// segments use the half-open rule on y so shared vertices count once.
    fn crossings(piece: &SegmentPiece, p: Point) -> usize {
        match *piece {
            SegmentPiece::Line { a, b } => {
                if (a.y > p.y) != (b.y > p.y) {
                    let x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
                    usize::from(x > p.x)
                } else {
                    0
                }
            }
            SegmentPiece::Arc { center, radius, start_angle, sweep } => {
                let dy = p.y - center.y;
                if dy.abs() >= radius {
                    return 0;
                }
                let dx = (radius * radius - dy * dy).sqrt();
                [center.x + dx, center.x - dx]
                    .into_iter()
                    .filter(|&x| x > p.x && on_arc(start_angle, sweep, dy.atan2(x - center.x)))
                    .count()
            }
        }
    }

    pub fn contour_contains(pieces: &[SegmentPiece], p: Point) -> bool {
        pieces.iter().map(|q| crossings(q, p)).sum::<usize>() % 2 == 1
    }

    pub fn shape_contains(shape: &ShapeGeom, p: Point) -> bool {
        contour_contains(&shape.outer.pieces, p) && !shape.holes.iter().any(|h| contour_contains(&h.pieces, p))
    }

    /// Classic even-odd ray cast over a vertex ring.
    pub fn polygon_contains(pts: &[Point], p: Point) -> bool {
        let mut inside = false;
        let n = pts.len();
        let mut j = n - 1;
        for i in 0..n {
            let (a, b) = (pts[i], pts[j]);
            if (a.y > p.y) != (b.y > p.y) && p.x < (b.x - a.x) * (p.y - a.y) / (b.y - a.y) + a.x {
                inside = !inside;
            }
            j = i;
        }
        inside
    }

    pub fn segment_distance(p: Point, a: Point, b: Point) -> f64 {
        let (abx, aby) = (b.x - a.x, b.y - a.y);
        let len2 = abx * abx + aby * aby;
        let t = if len2 == 0.0 { 0.0 } else { (((p.x - a.x) * abx + (p.y - a.y) * aby) / len2).clamp(0.0, 1.0) };
        let (qx, qy) = (a.x + t * abx, a.y + t * aby);
        ((p.x - qx).powi(2) + (p.y - qy).powi(2)).sqrt()
    }

    pub fn piece_distance(piece: &SegmentPiece, p: Point) -> f64 {
        match *piece {
            SegmentPiece::Line { a, b } => segment_distance(p, a, b),
            SegmentPiece::Arc { center, radius, start_angle, sweep } => {
                let (dx, dy) = (p.x - center.x, p.y - center.y);
                let d = (dx * dx + dy * dy).sqrt();
                if d > 0.0 && on_arc(start_angle, sweep, dy.atan2(dx)) {
                    (d - radius).abs()
                } else {
                    let end = |t: f64| Point::new(center.x + radius * t.cos(), center.y + radius * t.sin());
                    let (e0, e1) = (end(start_angle), end(start_angle + sweep));
                    let d0 = ((p.x - e0.x).powi(2) + (p.y - e0.y).powi(2)).sqrt();
                    let d1 = ((p.x - e1.x).powi(2) + (p.y - e1.y).powi(2)).sqrt();
                    d0.min(d1)
                }
            }
        }
    }

    pub fn shape_border_distance(shape: &ShapeGeom, p: Point) -> f64 {
        std::iter::once(&shape.outer)
            .chain(&shape.holes)
            .flat_map(|c| &c.pieces)
            .map(|q| piece_distance(q, p))
            .fold(f64::INFINITY, f64::min)
    }

    /// The region an element's interior node is meant to cover, described
    /// directly from the element's fields.
    #[derive(Debug, Clone)]
    pub enum Interior {
        Shape(ShapeGeom),
        Disk { center: Point, r: f64 },
        Annulus { center: Point, outer: f64, inner: f64 },
        Quad([Point; 4]),
    }

    impl Interior {
        pub fn of(el: &Element) -> Option<Interior> {
            Some(match &el.kind {
                ElementKind::Polygon(p) => Interior::Shape(p.geom.clone()),
                ElementKind::Circle(c) => Interior::Disk { center: c.center, r: c.r },
                ElementKind::Pie(p) if p.inner_r > 0.0 => {
                    Interior::Annulus { center: p.center, outer: p.outer_r, inner: p.inner_r }
                }
                ElementKind::Pie(p) => Interior::Disk { center: p.center, r: p.outer_r },
                ElementKind::Comment(c) => Interior::Quad(c.corners()),
                ElementKind::PlotArea(a) => Interior::Quad(a.rect.corners()),
                ElementKind::Scale(s) => Interior::Quad(s.rect.corners()),
                _ => return None,
            })
        }

        /// A box certainly containing the region, from control points only.
        pub fn coarse_bounds(&self) -> Rect {
            match self {
                Interior::Shape(s) => {
                    let mut r = Rect::around(s.outer.pieces[0].start());
                    for piece in &s.outer.pieces {
                        match *piece {
                            SegmentPiece::Line { a, b } => {
                                r.include(a);
                                r.include(b);
                            }
                            SegmentPiece::Arc { center, radius, .. } => {
                                r = r.union(&Rect::around(center).expand(radius));
                            }
                        }
                    }
                    r
                }
                Interior::Disk { center, r } => Rect::around(*center).expand(*r),
                Interior::Annulus { center, outer, .. } => Rect::around(*center).expand(*outer),
                Interior::Quad(q) => {
                    let mut r = Rect::around(q[0]);
                    q.iter().for_each(|&c| r.include(c));
                    r
                }
            }
        }

        /// Containment and distance to the region's boundary.
        pub fn probe(&self, p: Point) -> (bool, f64) {
            match self {
                Interior::Shape(s) => (shape_contains(s, p), shape_border_distance(s, p)),
                Interior::Disk { center, r } => {
                    let d = p.dist(*center);
                    (d < *r, (d - r).abs())
                }
                Interior::Annulus { center, outer, inner } => {
                    let d = p.dist(*center);
                    (d < *outer && d > *inner, (d - outer).abs().min((d - inner).abs()))
                }
                Interior::Quad(q) => {
                    let border = (0..4).map(|i| segment_distance(p, q[i], q[(i + 1) % 4])).fold(f64::INFINITY, f64::min);
                    (polygon_contains(q, p), border)
                }
            }
        }
    }

    fn probe_node(shape: &NodeShape, interior: Option<&Interior>, p: Point) -> (bool, f64) {
        match shape {
            NodeShape::Circle { center, r } => {
                let d = p.dist(*center);
                (d <= *r, (d - r).abs())
            }
            NodeShape::Strip { a, b, halfwidth } => {
                let d = segment_distance(p, *a, *b);
                (d <= *halfwidth, (d - halfwidth).abs())
            }
            NodeShape::Polygon { .. } => interior.map_or((false, f64::INFINITY), |i| i.probe(p)),
        }
    }

    fn coarse_node_bounds(shape: &NodeShape, interior: Option<&Interior>) -> Option<Rect> {
        match shape {
            NodeShape::Circle { center, r } => Some(Rect::around(*center).expand(*r)),
            NodeShape::Strip { a, b, halfwidth } => {
                let mut r = Rect::around(*a);
                r.include(*b);
                Some(r.expand(*halfwidth))
            }
            NodeShape::Polygon { .. } => interior.map(Interior::coarse_bounds),
        }
    }

    /// An element's nodes with the exact region each one stands for, ready
    /// for repeated queries.
    pub struct ElementOracle<'a> {
        cover: &'a Cover,
        interior: Option<Interior>,
        bounds: Option<Rect>,
    }

    impl<'a> ElementOracle<'a> {
        pub fn new(cover: &'a Cover, el: &Element) -> Self {
            let interior = Interior::of(el);
            let bounds = cover
                .nodes
                .iter()
                .filter_map(|n| coarse_node_bounds(&n.shape, interior.as_ref()))
                .reduce(|a, b| a.union(&b))
                .map(|r| r.expand(BOUNDARY_BAND));
            ElementOracle { cover, interior, bounds }
        }

        pub fn hit(&self, p: Point) -> HitVerdict {
            match self.bounds {
                Some(b) if b.contains(p) => {}
                _ => return HitVerdict { node: None, ambiguous: false },
            }
            let mut ambiguous = false;
            for (k, node) in self.cover.nodes.iter().enumerate() {
                let (inside, border) = probe_node(&node.shape, self.interior.as_ref(), p);
                ambiguous |= border < BOUNDARY_BAND;
                if inside {
                    return HitVerdict { node: Some(k), ambiguous };
                }
            }
            HitVerdict { node: None, ambiguous }
        }
    }

    /// Verdict of the exhaustive hit oracle for one element.
    #[derive(Debug, Clone, Copy, PartialEq, Eq)]
    pub struct HitVerdict {
        pub node: Option<usize>,
        /// Some node up to the decisive one lies within [`BOUNDARY_BAND`] of
        /// `p`, so a flattened-geometry answer may legitimately differ.
        pub ambiguous: bool,
    }

    /// Tests every node independently against exact geometry and takes the
    /// first that contains `p`.
    pub fn hit(cover: &Cover, el: &Element, p: Point) -> HitVerdict {
        let interior = Interior::of(el);
        let mut ambiguous = false;
        for (k, node) in cover.nodes.iter().enumerate() {
            let (inside, border) = probe_node(&node.shape, interior.as_ref(), p);
            ambiguous |= border < BOUNDARY_BAND;
            if inside {
                return HitVerdict { node: Some(k), ambiguous };
            }
        }
        HitVerdict { node: None, ambiguous }
    }

    /// Nearest point on a polyline by dense sampling of every segment.
    pub fn dense_projection(p: Point, pts: &[Point], samples_per_segment: usize) -> Point {
        let mut best = pts[0];
        let mut best_d = f64::INFINITY;
        for w in pts.windows(2) {
            for i in 0..=samples_per_segment {
                let q = w[0].lerp(w[1], i as f64 / samples_per_segment as f64);
                let d = p.dist2(q);
                if d < best_d {
                    best_d = d;
                    best = q;
                }
            }
        }
        best
    }

    pub fn polyline_distance(p: Point, pts: &[Point]) -> f64 {
        if pts.len() == 1 {
            return p.dist(pts[0]);
        }
        pts.windows(2).map(|w| segment_distance(p, w[0], w[1])).fold(f64::INFINITY, f64::min)
    }

    /// Bounding box of `samples` points spread evenly along a piece.
    pub fn sampled_bbox(piece: &SegmentPiece, samples: usize) -> Rect {
        let at = |t: f64| match *piece {
            SegmentPiece::Line { a, b } => a.lerp(b, t),
            SegmentPiece::Arc { center, radius, start_angle, sweep } => {
                Point::polar(center, radius, start_angle + sweep * t)
            }
        };
        let mut r = Rect::around(at(0.0));
        for i in 1..=samples {
            r.include(at(i as f64 / samples as f64));
        }
        r
    }
}

pub fn random_point<R: Rng>(rng: &mut R, r: &Rect) -> Point {
    Point::new(rng.gen_range(r.min.x..r.max.x), rng.gen_range(r.min.y..r.max.y))
}

/// A star-shaped simple polygon around `center`: vertices at sorted random
/// angles, radii in `[0.5, 1] * radius`.
pub fn random_star<R: Rng>(rng: &mut R, center: Point, radius: f64, n: usize) -> Vec<Point> {
    let mut angles: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..TAU)).collect();
    angles.sort_by(f64::total_cmp);
    angles.dedup();
    angles.into_iter().map(|a| Point::polar(center, rng.gen_range(0.5..=1.0) * radius, a)).collect()
}

/// A random valid polygon shape, sometimes with an arc edge or a hole.
pub fn random_shape<R: Rng>(rng: &mut R, center: Point, radius: f64) -> ShapeGeom {
    loop {
        let n = rng.gen_range(3..9);
        let pts = random_star(rng, center, radius, n);
        let Ok(mut shape) = ShapeGeom::polygon(&pts) else { continue };
        if rng.gen_bool(0.25) {
            // Swap one edge for an outward bulge through its endpoints.
            let k = rng.gen_range(0..shape.outer.pieces.len());
            let (a, b) = (shape.outer.pieces[k].start(), shape.outer.pieces[k].end());
            let mid = a.lerp(b, 0.5);
            let half = a.dist(b) * 0.5;
            if half > 1.0 {
                let r = half * rng.gen_range(1.05..3.0);
                let h = (r * r - half * half).sqrt();
                let u = (b - a) * (1.0 / (2.0 * half));
                let normal = Point::new(-u.y, u.x);
                let ring = shape.outer.flatten(0.25);
                let ccw = crate::geometry::ring_area(&ring) > 0.0;
                // Centre on the inner side so the minor arc bulges outward.
                let c = if ccw { mid + normal * h } else { mid - normal * h };
                let a0 = a.angle_from(c);
                let sweep = crate::geometry::wrap_angle(b.angle_from(c) - a0);
                shape.outer.pieces[k] = SegmentPiece::arc(c, r, a0, sweep);
            }
        }
        if rng.gen_bool(0.2) {
            let hole = Contour::circle(center, radius * 0.2).expect("positive radius");
            shape.holes.push(hole);
        }
        if shape.check().is_ok() {
            return shape;
        }
    }
}

fn random_shares<R: Rng>(rng: &mut R) -> Vec<f64> {
    let n = rng.gen_range(1..7);
    let weights: Vec<f64> = (0..n).map(|_| rng.gen_range(1.0..10.0)).collect();
    let total: f64 = weights.iter().sum();
    let mut shares: Vec<f64> = weights.iter().map(|w| (w / total * 360.0).max(1.0)).collect();
    let rest: f64 = shares[1..].iter().sum();
    shares[0] = 360.0 - rest;
    shares
}

/// One self-contained element kind (no references to other elements).
pub fn random_kind<R: Rng>(rng: &mut R, at: Point) -> ElementKind {
    match rng.gen_range(0..5) {
        0 => {
            let radius = rng.gen_range(15.0..80.0);
            ElementKind::Polygon(PolygonEl { geom: random_shape(rng, at, radius) })
        }
        1 => ElementKind::Circle(CircleEl { center: at, r: rng.gen_range(5.0..60.0) }),
        2 => {
            let outer_r = rng.gen_range(15.0..80.0);
            let inner_r = if rng.gen_bool(0.4) { rng.gen_range(0.0..outer_r - 1.0) } else { 0.0 };
            ElementKind::Pie(PieEl { center: at, outer_r, inner_r, start_angle: rng.gen_range(-3.0..3.0), shares: random_shares(rng) })
        }
        3 => {
            let (w, h) = (rng.gen_range(10.0..120.0), rng.gen_range(10.0..60.0));
            ElementKind::Control(ControlEl { rect: Rect::from_coords(at.x, at.y, at.x + w, at.y + h), tag: format!("b{}", rng.gen_range(0..100)) })
        }
        _ => ElementKind::Comment(CommentEl {
            anchor: at,
            angle: rng.gen_range(-3.0..3.0),
            text: "note".repeat(rng.gen_range(1..4)),
            attached_to: None,
        }),
    }
}

pub fn random_walls<R: Rng>(rng: &mut R, n: usize, area: &Rect) -> Vec<Wall> {
    (0..n)
        .map(|_| {
            let a = random_point(rng, area);
            let len = rng.gen_range(20.0..150.0);
            let b = Point::polar(a, len, if rng.gen_bool(0.5) { 0.0 } else { std::f64::consts::FRAC_PI_2 });
            Wall { a, b }
        })
        .collect()
}

/// Places a maze spot on a clear spot of the labyrinth.
pub fn clear_spot_position<R: Rng>(rng: &mut R, lab: &LabyrinthEl, r: f64, area: &Rect) -> Point {
    loop {
        let p = random_point(rng, area);
        if spot_is_clear(lab, p, r) {
            return p;
        }
    }
}

/// Parameters of [`random_scene`].
#[derive(Debug, Clone)]
pub struct SceneGen {
    pub elements: usize,
    pub extent: Rect,
    /// Also add plot areas, mazes and path spots.
    pub composites: bool,
    pub groups: usize,
}

impl Default for SceneGen {
    fn default() -> Self {
        SceneGen { elements: 20, extent: Rect::from_coords(0.0, 0.0, 1000.0, 800.0), composites: true, groups: 2 }
    }
}

pub fn random_scene<R: Rng>(rng: &mut R, g: &SceneGen) -> Scene {
    let mut scene = Scene::default();
    let inner = g.extent.expand(-60.0);
    while scene.len() < g.elements {
        let at = random_point(rng, &inner);
        let roll = if g.composites { rng.gen_range(0..10) } else { 0 };
        match roll {
            7 => {
                let rect = Rect::from_coords(at.x, at.y, at.x + rng.gen_range(60.0..200.0), at.y + rng.gen_range(40.0..150.0));
                let funcs = vec![FunctionDef::explicit("sin(x)")];
                if let Ok(area) = add_plot(&mut scene, rect, WorldRect::new(-3.0, 3.0, -1.5, 1.5), funcs) {
                    let _ = add_comment(&mut scene, area, Point::new(rect.min.x + 5.0, rect.min.y + 5.0), "y = sin x");
                }
            }
            8 => {
                let area = Rect::from_coords(at.x - 60.0, at.y - 60.0, at.x + 60.0, at.y + 60.0);
                let count = rng.gen_range(1..5);
                let walls = random_walls(rng, count, &area);
                let lab = LabyrinthEl { walls: walls.clone(), thickness: rng.gen_range(1.0..6.0) };
                let r = rng.gen_range(3.0..8.0);
                let spot = clear_spot_position(rng, &lab, r, &area.expand(40.0));
                let _ = add_maze(&mut scene, walls, lab.thickness, spot, r);
            }
            9 => {
                let n = rng.gen_range(2..6);
                let pts: Vec<Point> = (0..n).map(|_| at + Point::new(rng.gen_range(-80.0..80.0), rng.gen_range(-80.0..80.0))).collect();
                let _ = add_path_spot(&mut scene, pts, at, rng.gen_range(3.0..8.0));
            }
            _ => {
                let kind = random_kind(rng, at);
                let rotatable = kind.supports_rotation() && rng.gen_bool(0.8);
                let _ = scene.add_with(kind, rotatable, serde_json::Value::Null);
            }
        }
    }
    for _ in 0..g.groups {
        let free: Vec<ElementId> = scene.elements().iter().map(|e| e.id).filter(|&id| scene.group_of(id).is_none()).collect();
        if free.len() < 2 {
            break;
        }
        let k = rng.gen_range(2..=free.len().min(4));
        let mut members = Vec::new();
        while members.len() < k {
            let id = free[rng.gen_range(0..free.len())];
            if !members.contains(&id) {
                members.push(id);
            }
        }
        let _ = scene.add_group(members, rng.gen_range(0.0..12.0));
    }
    scene
}

/// A point worth pressing on `el`: near one of its cover nodes.
pub fn interesting_point<R: Rng>(rng: &mut R, el: &Element, cover: &Cover) -> Point {
    if cover.is_empty() {
        return el.bbox().center();
    }
    let node = &cover.nodes[rng.gen_range(0..cover.len())];
    let jitter = Point::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
    match &node.shape {
        NodeShape::Circle { center, .. } => *center + jitter,
        NodeShape::Strip { a, b, .. } => a.lerp(*b, rng.gen_range(0.0..=1.0)) + jitter,
        NodeShape::Polygon { shape } => random_point(rng, &shape.bounds().expand(1.0)),
    }
}

/// A random but well-formed pointer log of exactly `m` events: press, a few
/// moves, release, repeated. Presses mostly land on element features.
pub fn random_events<R: Rng>(rng: &mut R, scene: &Scene, m: usize, extent: &Rect) -> Vec<PointerEvent> {
    let params = scene.config.cover_params;
    let mut out = Vec::with_capacity(m);
    while out.len() < m {
        let start = if !scene.is_empty() && rng.gen_bool(0.8) {
            let el = &scene.elements()[rng.gen_range(0..scene.len())];
            interesting_point(rng, el, &build_cover(el, &params))
        } else {
            random_point(rng, extent)
        };
        let button = if rng.gen_bool(0.8) { Button::Left } else { Button::Right };
        out.push(PointerEvent::Press { button, p: start });
        let mut p = start;
        for _ in 0..rng.gen_range(0..8) {
            p = p + Point::new(rng.gen_range(-40.0..40.0), rng.gen_range(-40.0..40.0));
            out.push(PointerEvent::Move { p });
        }
        out.push(PointerEvent::Release);
    }
    out.truncate(m);
    out
}

/// A spot bound to the path; `None` for other elements.
pub fn path_spot(scene: &Scene, el: &Element) -> Option<(SpotEl, Vec<Point>)> {
    let ElementKind::Spot(s) = &el.kind else { return None };
    let SpotMode::Path(p) = s.mode else { return None };
    match &scene.element(p)?.kind {
        ElementKind::Path(path) => Some((s.clone(), path.pts.clone())),
        _ => None,
    }
}

//! Points, border pieces, contours and the predicates the rest of the engine
//! builds on.
//!
//! Coordinates are screen pixels with the y axis pointing down. Angles follow
//! the usual `(cos a, sin a)` parametrisation in those coordinates, which makes
//! positive angles turn clockwise on screen.

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Maximum sagitta when an arc is replaced by chords for containment and
/// border strips.
pub const ARC_FLATTEN_TOLERANCE: f64 = 0.25;

/// Allowed gap between consecutive pieces of a closed contour.
pub const CLOSURE_TOLERANCE: f64 = 1e-6;

/// Distance under which a point counts as lying on a border.
const ON_BORDER_EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

/// Displacements share the representation of points.
pub type Vector = Point;

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn dot(self, o: Point) -> f64 {
        self.x * o.x + self.y * o.y
    }

    pub fn cross(self, o: Point) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn norm2(self) -> f64 {
        self.dot(self)
    }

    pub fn dist(self, o: Point) -> f64 {
        (self - o).norm()
    }

    pub fn dist2(self, o: Point) -> f64 {
        (self - o).norm2()
    }

    pub fn lerp(self, o: Point, t: f64) -> Point {
        Point::new(self.x + (o.x - self.x) * t, self.y + (o.y - self.y) * t)
    }

    /// Polar angle of `self` seen from `origin`.
    pub fn angle_from(self, origin: Point) -> f64 {
        (self.y - origin.y).atan2(self.x - origin.x)
    }

    pub fn polar(center: Point, r: f64, angle: f64) -> Point {
        Point::new(center.x + r * angle.cos(), center.y + r * angle.sin())
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

impl Neg for Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point::new(-self.x, -self.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, k: f64) -> Point {
        Point::new(self.x * k, self.y * k)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub min: Point,
    pub max: Point,
}

impl Rect {
    pub const fn new(min: Point, max: Point) -> Self {
        Self { min, max }
    }

    pub fn from_coords(x0: f64, y0: f64, x1: f64, y1: f64) -> Self {
        Self::new(Point::new(x0, y0), Point::new(x1, y1))
    }

    pub fn is_valid(&self) -> bool {
        self.min.is_finite() && self.max.is_finite() && self.min.x <= self.max.x && self.min.y <= self.max.y
    }

    pub fn width(&self) -> f64 {
        self.max.x - self.min.x
    }

    pub fn height(&self) -> f64 {
        self.max.y - self.min.y
    }

    pub fn center(&self) -> Point {
        Point::new((self.min.x + self.max.x) * 0.5, (self.min.y + self.max.y) * 0.5)
    }

    pub fn contains(&self, p: Point) -> bool {
        p.x >= self.min.x && p.x <= self.max.x && p.y >= self.min.y && p.y <= self.max.y
    }

    pub fn union(&self, o: &Rect) -> Rect {
        Rect::from_coords(
            self.min.x.min(o.min.x),
            self.min.y.min(o.min.y),
            self.max.x.max(o.max.x),
            self.max.y.max(o.max.y),
        )
    }

    pub fn expand(&self, m: f64) -> Rect {
        Rect::from_coords(self.min.x - m, self.min.y - m, self.max.x + m, self.max.y + m)
    }

    pub fn translate(&self, d: Vector) -> Rect {
        Rect::new(self.min + d, self.max + d)
    }

    pub fn include(&mut self, p: Point) {
        self.min.x = self.min.x.min(p.x);
        self.min.y = self.min.y.min(p.y);
        self.max.x = self.max.x.max(p.x);
        self.max.y = self.max.y.max(p.y);
    }

    pub fn around(p: Point) -> Rect {
        Rect::new(p, p)
    }

    /// Corners in contour order: top-left, top-right, bottom-right, bottom-left.
    pub fn corners(&self) -> [Point; 4] {
        [
            self.min,
            Point::new(self.max.x, self.min.y),
            self.max,
            Point::new(self.min.x, self.max.y),
        ]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SegmentPiece {
    Line {
        a: Point,
        b: Point,
    },
    Arc {
        center: Point,
        radius: f64,
        start_angle: f64,
        sweep: f64,
    },
}

impl SegmentPiece {
    pub fn line(a: Point, b: Point) -> Self {
        SegmentPiece::Line { a, b }
    }

    pub fn arc(center: Point, radius: f64, start_angle: f64, sweep: f64) -> Self {
        SegmentPiece::Arc { center, radius, start_angle, sweep }
    }

    pub fn full_circle(center: Point, radius: f64) -> Self {
        Self::arc(center, radius, 0.0, TAU)
    }

    pub fn is_valid(&self) -> bool {
        match *self {
            SegmentPiece::Line { a, b } => a.is_finite() && b.is_finite() && a != b,
            SegmentPiece::Arc { center, radius, start_angle, sweep } => {
                center.is_finite()
                    && radius.is_finite()
                    && radius > 0.0
                    && start_angle.is_finite()
                    && sweep.is_finite()
                    && sweep != 0.0
                    && sweep.abs() <= TAU
            }
        }
    }

    pub fn start(&self) -> Point {
        match *self {
            SegmentPiece::Line { a, .. } => a,
            SegmentPiece::Arc { center, radius, start_angle, .. } => {
                Point::polar(center, radius, start_angle)
            }
        }
    }

    pub fn end(&self) -> Point {
        match *self {
            SegmentPiece::Line { b, .. } => b,
            SegmentPiece::Arc { center, radius, start_angle, sweep } => {
                Point::polar(center, radius, start_angle + sweep)
            }
        }
    }

    /// Point halfway along the piece.
    pub fn midpoint(&self) -> Point {
        match *self {
            SegmentPiece::Line { a, b } => a.lerp(b, 0.5),
            SegmentPiece::Arc { center, radius, start_angle, sweep } => {
                Point::polar(center, radius, start_angle + sweep * 0.5)
            }
        }
    }

    pub fn translate(&self, d: Vector) -> Self {
        match *self {
            SegmentPiece::Line { a, b } => SegmentPiece::Line { a: a + d, b: b + d },
            SegmentPiece::Arc { center, radius, start_angle, sweep } => SegmentPiece::Arc {
                center: center + d,
                radius,
                start_angle,
                sweep,
            },
        }
    }

    pub fn rotate(&self, pivot: Point, theta: f64) -> Self {
        match *self {
            SegmentPiece::Line { a, b } => SegmentPiece::Line {
                a: rotate_about(a, pivot, theta),
                b: rotate_about(b, pivot, theta),
            },
            SegmentPiece::Arc { center, radius, start_angle, sweep } => SegmentPiece::Arc {
                center: rotate_about(center, pivot, theta),
                radius,
                start_angle: start_angle + theta,
                sweep,
            },
        }
    }

    /// Points along the piece, start included and end excluded, so that
    /// consecutive chords deviate from the piece by at most `tolerance`.
    pub fn flatten_into(&self, tolerance: f64, out: &mut Vec<Point>) {
        match *self {
            SegmentPiece::Line { a, .. } => out.push(a),
            SegmentPiece::Arc { center, radius, start_angle, sweep } => {
                let n = arc_chord_count(radius, sweep, tolerance);
                for k in 0..n {
                    let a = start_angle + sweep * (k as f64 / n as f64);
                    out.push(Point::polar(center, radius, a));
                }
            }
        }
    }

    /// The piece as an open polyline including both ends.
    pub fn flatten_open(&self, tolerance: f64) -> Vec<Point> {
        let mut pts = Vec::new();
        self.flatten_into(tolerance, &mut pts);
        pts.push(self.end());
        pts
    }
}

/// Number of chords needed so an arc's sagitta stays within `tolerance`.
/// Never more than a quarter turn per chord.
pub fn arc_chord_count(radius: f64, sweep: f64, tolerance: f64) -> usize {
    let step = if tolerance < radius {
        (2.0 * (1.0 - tolerance / radius).acos()).min(FRAC_PI_2)
    } else {
        FRAC_PI_2
    };
    ((sweep.abs() / step).ceil() as usize).max(1)
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("contour has no pieces")]
    EmptyContour,
    #[error("piece {0} is degenerate or non-finite")]
    DegeneratePiece(usize),
    #[error("contour is not closed after piece {0}")]
    NotClosed(usize),
    #[error("outer contour intersects itself")]
    SelfIntersecting,
    #[error("hole {0} is not strictly inside the outer contour")]
    HoleOutside(usize),
    #[error("holes {0} and {1} overlap")]
    HolesOverlap(usize, usize),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Contour {
    pub pieces: Vec<SegmentPiece>,
}

impl Contour {
    pub fn new(pieces: Vec<SegmentPiece>) -> Result<Self, GeometryError> {
        let c = Contour { pieces };
        c.check()?;
        Ok(c)
    }

    pub fn polygon(pts: &[Point]) -> Result<Self, GeometryError> {
        let n = pts.len();
        Self::new((0..n).map(|i| SegmentPiece::line(pts[i], pts[(i + 1) % n])).collect())
    }

    pub fn circle(center: Point, radius: f64) -> Result<Self, GeometryError> {
        Self::new(vec![SegmentPiece::full_circle(center, radius)])
    }

    pub fn rect(r: &Rect) -> Result<Self, GeometryError> {
        Self::polygon(&r.corners())
    }

    pub fn check(&self) -> Result<(), GeometryError> {
        if self.pieces.is_empty() {
            return Err(GeometryError::EmptyContour);
        }
        for (i, p) in self.pieces.iter().enumerate() {
            if !p.is_valid() {
                return Err(GeometryError::DegeneratePiece(i));
            }
        }
        let n = self.pieces.len();
        for i in 0..n {
            let end = self.pieces[i].end();
            let next = self.pieces[(i + 1) % n].start();
            if end.dist(next) > CLOSURE_TOLERANCE {
                return Err(GeometryError::NotClosed(i));
            }
        }
        Ok(())
    }

    /// True when every piece is a straight line.
    pub fn is_polygonal(&self) -> bool {
        self.pieces.iter().all(|p| matches!(p, SegmentPiece::Line { .. }))
    }

    /// Vertex list of a polygonal contour (the start of every piece).
    pub fn vertices(&self) -> Vec<Point> {
        self.pieces.iter().map(|p| p.start()).collect()
    }

    pub fn flatten(&self, tolerance: f64) -> Vec<Point> {
        let mut out = Vec::new();
        for p in &self.pieces {
            p.flatten_into(tolerance, &mut out);
        }
        out
    }

    pub fn translate(&self, d: Vector) -> Contour {
        Contour { pieces: self.pieces.iter().map(|p| p.translate(d)).collect() }
    }

    pub fn rotate(&self, pivot: Point, theta: f64) -> Contour {
        Contour { pieces: self.pieces.iter().map(|p| p.rotate(pivot, theta)).collect() }
    }

    pub fn dist_to_border(&self, p: Point) -> f64 {
        self.pieces.iter().map(|s| dist_to_piece(p, s)).fold(f64::INFINITY, f64::min)
    }

    pub fn bbox(&self) -> Rect {
        let mut r = bbox_piece(&self.pieces[0]);
        for p in &self.pieces[1..] {
            r = r.union(&bbox_piece(p));
        }
        r
    }

    /// Whether the flattened contour is a simple closed curve.
    pub fn is_simple(&self) -> bool {
        ring_is_simple(&self.flatten(ARC_FLATTEN_TOLERANCE))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShapeGeom {
    pub outer: Contour,
    #[serde(default)]
    pub holes: Vec<Contour>,
}

impl ShapeGeom {
    pub fn new(outer: Contour, holes: Vec<Contour>) -> Result<Self, GeometryError> {
        let s = ShapeGeom { outer, holes };
        s.check()?;
        Ok(s)
    }

    pub fn polygon(pts: &[Point]) -> Result<Self, GeometryError> {
        Self::new(Contour::polygon(pts)?, Vec::new())
    }

    pub fn rect(r: &Rect) -> Result<Self, GeometryError> {
        Self::new(Contour::rect(r)?, Vec::new())
    }

    pub fn circle(center: Point, radius: f64) -> Result<Self, GeometryError> {
        Self::new(Contour::circle(center, radius)?, Vec::new())
    }

    pub fn ring(center: Point, outer_r: f64, inner_r: f64) -> Result<Self, GeometryError> {
        Self::new(Contour::circle(center, outer_r)?, vec![Contour::circle(center, inner_r)?])
    }

    /// Validates closure, simplicity of the outer contour, and that holes sit
    /// strictly inside it without touching each other.
    pub fn check(&self) -> Result<(), GeometryError> {
        self.outer.check()?;
        for h in &self.holes {
            h.check()?;
        }
        let outer = self.outer.flatten(ARC_FLATTEN_TOLERANCE);
        if !ring_is_simple(&outer) {
            return Err(GeometryError::SelfIntersecting);
        }
        let holes: Vec<Vec<Point>> =
            self.holes.iter().map(|h| h.flatten(ARC_FLATTEN_TOLERANCE)).collect();
        for (i, h) in holes.iter().enumerate() {
            if !ring_is_simple(h)
                || rings_cross(h, &outer)
                || h.iter().any(|&p| ring_classify(&outer, p) != RingSide::Inside)
            {
                return Err(GeometryError::HoleOutside(i));
            }
        }
        for i in 0..holes.len() {
            for j in i + 1..holes.len() {
                let (a, b) = (&holes[i], &holes[j]);
                if rings_cross(a, b)
                    || ring_classify(a, b[0]) != RingSide::Outside
                    || ring_classify(b, a[0]) != RingSide::Outside
                {
                    return Err(GeometryError::HolesOverlap(i, j));
                }
            }
        }
        Ok(())
    }

    pub fn translate(&self, d: Vector) -> ShapeGeom {
        ShapeGeom {
            outer: self.outer.translate(d),
            holes: self.holes.iter().map(|h| h.translate(d)).collect(),
        }
    }

    pub fn rotate(&self, pivot: Point, theta: f64) -> ShapeGeom {
        ShapeGeom {
            outer: self.outer.rotate(pivot, theta),
            holes: self.holes.iter().map(|h| h.rotate(pivot, theta)).collect(),
        }
    }

    pub fn contains(&self, p: Point) -> bool {
        contains(self, p)
    }

    pub fn flat(&self) -> FlatShape {
        FlatShape::new(self)
    }
}

/// A shape with its contours pre-flattened, for repeated containment queries.
#[derive(Debug, Clone, PartialEq)]
pub struct FlatShape {
    outer_pieces: Vec<SegmentPiece>,
    hole_pieces: Vec<Vec<SegmentPiece>>,
    outer: Vec<Point>,
    holes: Vec<Vec<Point>>,
    bounds: Rect,
}

impl FlatShape {
    pub fn new(shape: &ShapeGeom) -> Self {
        FlatShape {
            outer_pieces: shape.outer.pieces.clone(),
            hole_pieces: shape.holes.iter().map(|h| h.pieces.clone()).collect(),
            outer: shape.outer.flatten(ARC_FLATTEN_TOLERANCE),
            holes: shape.holes.iter().map(|h| h.flatten(ARC_FLATTEN_TOLERANCE)).collect(),
            bounds: shape.outer.bbox(),
        }
    }

    pub fn bounds(&self) -> Rect {
        self.bounds
    }

    pub fn contains(&self, p: Point) -> bool {
        if !self.bounds.contains(p) {
            return false;
        }
        let on = |pieces: &[SegmentPiece]| pieces.iter().any(|s| dist_to_piece(p, s) <= ON_BORDER_EPS);
        if on(&self.outer_pieces) {
            return true;
        }
        if ring_classify(&self.outer, p) == RingSide::Outside {
            return false;
        }
        for (ring, pieces) in self.holes.iter().zip(&self.hole_pieces) {
            if on(pieces) {
                return true;
            }
            if ring_classify(ring, p) == RingSide::Inside {
                return false;
            }
        }
        true
    }
}

/// Inside the outer contour and outside every hole; points on any border
/// count as inside. Arcs are flattened to chords for the crossing test.
pub fn contains(shape: &ShapeGeom, p: Point) -> bool {
    FlatShape::new(shape).contains(p)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RingSide {
    Inside,
    Boundary,
    Outside,
}

/// Crossing-number classification of `p` against a closed ring.
pub fn ring_classify(ring: &[Point], p: Point) -> RingSide {
    let n = ring.len();
    let mut inside = false;
    for i in 0..n {
        let a = ring[i];
        let b = ring[(i + 1) % n];
        if dist_to_segment(p, a, b) <= ON_BORDER_EPS {
            return RingSide::Boundary;
        }
        if (a.y > p.y) != (b.y > p.y) {
            let x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if p.x < x {
                inside = !inside;
            }
        }
    }
    if inside {
        RingSide::Inside
    } else {
        RingSide::Outside
    }
}

fn orient(a: Point, b: Point, c: Point) -> f64 {
    (b - a).cross(c - a)
}

fn on_segment(a: Point, b: Point, p: Point) -> bool {
    p.x >= a.x.min(b.x) && p.x <= a.x.max(b.x) && p.y >= a.y.min(b.y) && p.y <= a.y.max(b.y)
}

/// Closed segments `ab` and `cd` share at least one point.
pub fn segments_intersect(a: Point, b: Point, c: Point, d: Point) -> bool {
    let d1 = orient(c, d, a);
    let d2 = orient(c, d, b);
    let d3 = orient(a, b, c);
    let d4 = orient(a, b, d);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    (d1 == 0.0 && on_segment(c, d, a))
        || (d2 == 0.0 && on_segment(c, d, b))
        || (d3 == 0.0 && on_segment(a, b, c))
        || (d4 == 0.0 && on_segment(a, b, d))
}

/// A closed ring with at least three vertices, non-zero area, and no two
/// edges meeting anywhere except at their shared vertex.
pub fn ring_is_simple(ring: &[Point]) -> bool {
    let n = ring.len();
    if n < 3 || ring.iter().any(|p| !p.is_finite()) {
        return false;
    }
    if ring_area(ring).abs() <= f64::EPSILON {
        return false;
    }
    for i in 0..n {
        let (a, b) = (ring[i], ring[(i + 1) % n]);
        if a == b {
            return false;
        }
        for j in i + 1..n {
            let (c, d) = (ring[j], ring[(j + 1) % n]);
            let adjacent = j == i + 1 || (i == 0 && j == n - 1);
            if adjacent {
                // Shared vertex is fine; folding back onto the neighbour is not.
                let (shared, other_i, other_j) = if j == i + 1 { (b, a, d) } else { (a, b, c) };
                let u = other_i - shared;
                let v = other_j - shared;
                if u.cross(v) == 0.0 && u.dot(v) > 0.0 {
                    return false;
                }
                continue;
            }
            if segments_intersect(a, b, c, d) {
                return false;
            }
        }
    }
    true
}

fn rings_cross(a: &[Point], b: &[Point]) -> bool {
    let (na, nb) = (a.len(), b.len());
    for i in 0..na {
        for j in 0..nb {
            if segments_intersect(a[i], a[(i + 1) % na], b[j], b[(j + 1) % nb]) {
                return true;
            }
        }
    }
    false
}

/// Signed shoelace area; positive for clockwise-on-screen rings.
pub fn ring_area(ring: &[Point]) -> f64 {
    let n = ring.len();
    (0..n).map(|i| ring[i].cross(ring[(i + 1) % n])).sum::<f64>() * 0.5
}

pub fn dist_to_segment(p: Point, a: Point, b: Point) -> f64 {
    let ab = b - a;
    let len2 = ab.norm2();
    if len2 == 0.0 {
        return p.dist(a);
    }
    let t = ((p - a).dot(ab) / len2).clamp(0.0, 1.0);
    p.dist(a + ab * t)
}

/// Minimum distance between closed segments `ab` and `cd`.
pub fn segment_segment_dist(a: Point, b: Point, c: Point, d: Point) -> f64 {
    if segments_intersect(a, b, c, d) {
        return 0.0;
    }
    dist_to_segment(a, c, d)
        .min(dist_to_segment(b, c, d))
        .min(dist_to_segment(c, a, b))
        .min(dist_to_segment(d, a, b))
}

/// Whether `angle` falls within the arc's angular range.
fn angle_in_sweep(angle: f64, start: f64, sweep: f64) -> bool {
    if sweep.abs() >= TAU {
        return true;
    }
    let (lo, span) = if sweep >= 0.0 { (start, sweep) } else { (start + sweep, -sweep) };
    (angle - lo).rem_euclid(TAU) <= span
}

/// Exact Euclidean distance from `p` to a line segment or circular arc.
pub fn dist_to_piece(p: Point, s: &SegmentPiece) -> f64 {
    match *s {
        SegmentPiece::Line { a, b } => dist_to_segment(p, a, b),
        SegmentPiece::Arc { center, radius, start_angle, sweep } => {
            let d = p.dist(center);
            if d == 0.0 {
                return radius;
            }
            if angle_in_sweep(p.angle_from(center), start_angle, sweep) {
                (d - radius).abs()
            } else {
                p.dist(s.start()).min(p.dist(s.end()))
            }
        }
    }
}

/// Rotates `p` about `pivot` by `theta` (clockwise on a y-down screen).
pub fn rotate_about(p: Point, pivot: Point, theta: f64) -> Point {
    if p == pivot {
        return p;
    }
    let (s, c) = theta.sin_cos();
    let d = p - pivot;
    Point::new(pivot.x + d.x * c - d.y * s, pivot.y + d.x * s + d.y * c)
}

/// Tight axis-aligned box of a single piece; arcs include every axis extreme
/// their angular range passes through.
pub fn bbox_piece(s: &SegmentPiece) -> Rect {
    match *s {
        SegmentPiece::Line { a, b } => {
            let mut r = Rect::around(a);
            r.include(b);
            r
        }
        SegmentPiece::Arc { center, radius, start_angle, sweep } => {
            let mut r = Rect::around(s.start());
            r.include(s.end());
            if sweep.abs() >= TAU {
                return Rect::new(
                    Point::new(center.x - radius, center.y - radius),
                    Point::new(center.x + radius, center.y + radius),
                );
            }
            let (lo, span) = if sweep >= 0.0 { (start_angle, sweep) } else { (start_angle + sweep, -sweep) };
            let first = (lo / FRAC_PI_2).ceil() as i64;
            let last = ((lo + span) / FRAC_PI_2).floor() as i64;
            for k in first..=last {
                let offset = match k.rem_euclid(4) {
                    0 => Point::new(radius, 0.0),
                    1 => Point::new(0.0, radius),
                    2 => Point::new(-radius, 0.0),
                    _ => Point::new(0.0, -radius),
                };
                r.include(center + offset);
            }
            r
        }
    }
}

/// Tight axis-aligned box of the outer contour.
pub fn bbox(shape: &ShapeGeom) -> Rect {
    shape.outer.bbox()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Projection {
    pub foot: Point,
    pub seg_index: usize,
    pub t: f64,
}

/// Nearest point on a polyline. Ties go to the smallest segment index, then
/// the smallest parameter along it.
pub fn project_to_polyline(p: Point, pts: &[Point]) -> Projection {
    assert!(pts.len() >= 2, "polyline needs at least two points");
    let mut best = Projection { foot: pts[0], seg_index: 0, t: 0.0 };
    let mut best_d2 = f64::INFINITY;
    for (i, w) in pts.windows(2).enumerate() {
        let (a, b) = (w[0], w[1]);
        let ab = b - a;
        let len2 = ab.norm2();
        let t = if len2 == 0.0 { 0.0 } else { ((p - a).dot(ab) / len2).clamp(0.0, 1.0) };
        let foot = if t == 0.0 {
            a
        } else if t == 1.0 {
            b
        } else {
            a + ab * t
        };
        let d2 = p.dist2(foot);
        if d2 < best_d2 {
            best_d2 = d2;
            best = Projection { foot, seg_index: i, t };
        }
    }
    best
}

/// Normalises an angle into `(-PI, PI]`.
pub fn wrap_angle(a: f64) -> f64 {
    let w = (a + PI).rem_euclid(TAU) - PI;
    if w == -PI {
        PI
    } else {
        w
    }
}

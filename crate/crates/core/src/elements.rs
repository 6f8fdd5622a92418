//! Element kinds and the geometric edits each grab action performs.
//!
//! Every edit is a pure function from an element to a new element. Edits that
//! would break an element's invariants return an [`EditError`] and the caller
//! keeps the previous geometry.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::apps::FunctionDef;
use crate::geometry::{
    self, project_to_polyline, rotate_about, wrap_angle, GeometryError, Point, Rect, SegmentPiece,
    ShapeGeom, Vector,
};

pub const MIN_RECT_SIDE: f64 = 10.0;
pub const MIN_RADIUS: f64 = 5.0;
pub const MIN_SHARE_DEG: f64 = 1.0;
pub const MIN_RING_WIDTH: f64 = 1.0;
pub const SHARE_SUM_TOLERANCE: f64 = 1e-9;

/// Text metrics used to size comment boxes.
pub const COMMENT_CHAR_WIDTH: f64 = 7.0;
pub const COMMENT_HEIGHT: f64 = 16.0;

/// Depth of a scale strip (ticks plus labels).
pub const SCALE_THICKNESS: f64 = 30.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ElementId(pub u32);

impl std::fmt::Display for ElementId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WorldRect {
    pub xmin: f64,
    pub xmax: f64,
    pub ymin: f64,
    pub ymax: f64,
}

impl WorldRect {
    pub fn new(xmin: f64, xmax: f64, ymin: f64, ymax: f64) -> Self {
        Self { xmin, xmax, ymin, ymax }
    }

    pub fn is_valid(&self) -> bool {
        [self.xmin, self.xmax, self.ymin, self.ymax].iter().all(|v| v.is_finite())
            && self.xmin < self.xmax
            && self.ymin < self.ymax
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolygonEl {
    pub geom: ShapeGeom,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CircleEl {
    pub center: Point,
    pub r: f64,
}

/// A pie, or a ring when `inner_r > 0`. Sector `i` spans
/// `start_angle + sum(shares[..i])` to `start_angle + sum(shares[..=i])`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PieEl {
    pub center: Point,
    pub outer_r: f64,
    pub inner_r: f64,
    pub start_angle: f64,
    /// Sector sizes in degrees.
    pub shares: Vec<f64>,
}

impl PieEl {
    /// Angle in radians of divider `i`, the boundary between sector `i - 1`
    /// (cyclically) and sector `i`.
    pub fn divider_angle(&self, i: usize) -> f64 {
        let before: f64 = self.shares[..i].iter().sum();
        self.start_angle + before.to_radians()
    }

    pub fn shape(&self) -> Result<ShapeGeom, GeometryError> {
        if self.inner_r > 0.0 {
            ShapeGeom::ring(self.center, self.outer_r, self.inner_r)
        } else {
            ShapeGeom::circle(self.center, self.outer_r)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ControlEl {
    pub rect: Rect,
    pub tag: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommentEl {
    /// Top-left corner of the text box before rotation; the rotation centre
    /// of the box's own angle.
    pub anchor: Point,
    pub angle: f64,
    pub text: String,
    pub attached_to: Option<ElementId>,
}

impl CommentEl {
    pub fn size(&self) -> (f64, f64) {
        let chars = self.text.chars().count().max(1) as f64;
        (chars * COMMENT_CHAR_WIDTH, COMMENT_HEIGHT)
    }

    pub fn corners(&self) -> [Point; 4] {
        let (w, h) = self.size();
        let a = self.anchor;
        [
            a,
            rotate_about(Point::new(a.x + w, a.y), a, self.angle),
            rotate_about(Point::new(a.x + w, a.y + h), a, self.angle),
            rotate_about(Point::new(a.x, a.y + h), a, self.angle),
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlotAreaEl {
    pub rect: Rect,
    pub world: WorldRect,
    #[serde(default)]
    pub functions: Vec<FunctionDef>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScaleEdge {
    Left,
    Bottom,
}

/// A scale strip bound to one edge of a plot area. `rect` is derived from the
/// area's rect, the edge and the offset; the scene keeps it current.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScaleEl {
    pub attached_to: ElementId,
    pub edge: ScaleEdge,
    pub offset: f64,
    pub rect: Rect,
}

pub fn scale_rect(area: &Rect, edge: ScaleEdge, offset: f64) -> Rect {
    match edge {
        ScaleEdge::Left => Rect::from_coords(
            area.min.x - offset - SCALE_THICKNESS,
            area.min.y,
            area.min.x - offset,
            area.max.y,
        ),
        ScaleEdge::Bottom => Rect::from_coords(
            area.min.x,
            area.max.y + offset,
            area.max.x,
            area.max.y + offset + SCALE_THICKNESS,
        ),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpotMode {
    Free,
    Path(ElementId),
    Maze(ElementId),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpotEl {
    pub center: Point,
    pub r: f64,
    pub mode: SpotMode,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Wall {
    pub a: Point,
    pub b: Point,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabyrinthEl {
    pub walls: Vec<Wall>,
    pub thickness: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathEl {
    pub pts: Vec<Point>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ElementKind {
    Polygon(PolygonEl),
    Circle(CircleEl),
    Pie(PieEl),
    Control(ControlEl),
    Comment(CommentEl),
    PlotArea(PlotAreaEl),
    Scale(ScaleEl),
    Spot(SpotEl),
    Labyrinth(LabyrinthEl),
    Path(PathEl),
}

impl ElementKind {
    pub fn name(&self) -> &'static str {
        match self {
            ElementKind::Polygon(_) => "polygon",
            ElementKind::Circle(_) => "circle",
            ElementKind::Pie(_) => "pie",
            ElementKind::Control(_) => "control",
            ElementKind::Comment(_) => "comment",
            ElementKind::PlotArea(_) => "plot_area",
            ElementKind::Scale(_) => "scale",
            ElementKind::Spot(_) => "spot",
            ElementKind::Labyrinth(_) => "labyrinth",
            ElementKind::Path(_) => "path",
        }
    }

    /// Kinds that can never rotate because their geometry is an axis-aligned
    /// rectangle.
    pub fn supports_rotation(&self) -> bool {
        !matches!(self, ElementKind::Control(_) | ElementKind::PlotArea(_) | ElementKind::Scale(_))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Element {
    pub id: ElementId,
    pub kind: ElementKind,
    pub rotatable: bool,
    /// Opaque styling carried through persistence untouched.
    pub style: serde_json::Value,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ElementError {
    #[error("non-finite coordinate")]
    NonFinite,
    #[error("invalid shape: {0}")]
    Shape(#[from] GeometryError),
    #[error("radius {0} below minimum")]
    Radius(f64),
    #[error("pie shares sum to {0} degrees, expected 360")]
    ShareSum(f64),
    #[error("pie share {index} is {value} degrees, below 1")]
    ShareTooSmall { index: usize, value: f64 },
    #[error("pie has no sectors")]
    NoSectors,
    #[error("ring inner radius {inner} leaves less than 1 px to outer radius {outer}")]
    RingTooThin { inner: f64, outer: f64 },
    #[error("rectangle is inverted or non-finite")]
    BadRect,
    #[error("{0} elements cannot rotate")]
    RotatableNotAllowed(&'static str),
    #[error("world rectangle must have xmin < xmax and ymin < ymax")]
    BadWorld,
    #[error("function {index}: {reason}")]
    BadFunction { index: usize, reason: String },
    #[error("path needs at least two distinct consecutive points")]
    BadPath,
    #[error("labyrinth wall {0} is degenerate")]
    BadWall(usize),
    #[error("thickness must be positive")]
    BadThickness,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EditError {
    #[error("element is not rotatable")]
    NotRotatable,
    #[error("border {0} does not exist on this element")]
    NoSuchBorder(usize),
    #[error("vertex {0} does not exist on this element")]
    NoSuchVertex(usize),
    #[error("divider {0} does not exist on this element")]
    NoSuchDivider(usize),
    #[error("neighbouring curved piece cannot follow the border")]
    CurvedNeighbour,
    #[error("a spot inside the labyrinth would touch a wall")]
    SpotCollision,
    #[error("edit rejected: {0}")]
    Invalid(#[from] ElementError),
}

impl Element {
    pub fn new(id: ElementId, kind: ElementKind) -> Self {
        let rotatable = kind.supports_rotation();
        Element { id, kind, rotatable, style: serde_json::Value::Null }
    }

    pub fn is_control(&self) -> bool {
        matches!(self.kind, ElementKind::Control(_))
    }

    /// Tight bounding box of everything the element draws.
    pub fn bbox(&self) -> Rect {
        match &self.kind {
            ElementKind::Polygon(p) => geometry::bbox(&p.geom),
            ElementKind::Circle(c) => square_around(c.center, c.r),
            ElementKind::Pie(p) => square_around(p.center, p.outer_r),
            ElementKind::Control(c) => c.rect,
            ElementKind::Comment(c) => rect_of(&c.corners()),
            ElementKind::PlotArea(a) => a.rect,
            ElementKind::Scale(s) => s.rect,
            ElementKind::Spot(s) => square_around(s.center, s.r),
            ElementKind::Labyrinth(l) => {
                let pts: Vec<Point> = l.walls.iter().flat_map(|w| [w.a, w.b]).collect();
                rect_of(&pts).expand(l.thickness * 0.5)
            }
            ElementKind::Path(p) => rect_of(&p.pts),
        }
    }

    /// The point a move grab is measured against.
    pub fn reference_point(&self) -> Point {
        match &self.kind {
            ElementKind::Polygon(p) => p.geom.outer.pieces[0].start(),
            ElementKind::Circle(c) => c.center,
            ElementKind::Pie(p) => p.center,
            ElementKind::Control(c) => c.rect.min,
            ElementKind::Comment(c) => c.anchor,
            ElementKind::PlotArea(a) => a.rect.min,
            ElementKind::Scale(s) => s.rect.min,
            ElementKind::Spot(s) => s.center,
            ElementKind::Labyrinth(l) => l.walls.first().map_or(Point::ORIGIN, |w| w.a),
            ElementKind::Path(p) => p.pts[0],
        }
    }

    /// Checks the element's own invariants (not references to others).
    pub fn validate(&self) -> Result<(), ElementError> {
        if self.rotatable && !self.kind.supports_rotation() {
            return Err(ElementError::RotatableNotAllowed(self.kind.name()));
        }
        match &self.kind {
            ElementKind::Polygon(p) => p.geom.check()?,
            ElementKind::Circle(c) => {
                finite(&[c.center.x, c.center.y, c.r])?;
                if c.r < MIN_RADIUS {
                    return Err(ElementError::Radius(c.r));
                }
            }
            ElementKind::Pie(p) => validate_pie(p)?,
            ElementKind::Control(c) => check_rect(&c.rect)?,
            ElementKind::Comment(c) => finite(&[c.anchor.x, c.anchor.y, c.angle])?,
            ElementKind::PlotArea(a) => {
                check_rect(&a.rect)?;
                if !a.world.is_valid() {
                    return Err(ElementError::BadWorld);
                }
                for (index, f) in a.functions.iter().enumerate() {
                    f.check().map_err(|reason| ElementError::BadFunction { index, reason })?;
                }
            }
            ElementKind::Scale(s) => {
                finite(&[s.offset])?;
                if !s.rect.is_valid() {
                    return Err(ElementError::BadRect);
                }
            }
            ElementKind::Spot(s) => {
                finite(&[s.center.x, s.center.y, s.r])?;
                if s.r <= 0.0 {
                    return Err(ElementError::Radius(s.r));
                }
            }
            ElementKind::Labyrinth(l) => {
                if !(l.thickness.is_finite() && l.thickness > 0.0) {
                    return Err(ElementError::BadThickness);
                }
                for (i, w) in l.walls.iter().enumerate() {
                    if !w.a.is_finite() || !w.b.is_finite() || w.a == w.b {
                        return Err(ElementError::BadWall(i));
                    }
                }
            }
            ElementKind::Path(p) => {
                if p.pts.len() < 2
                    || p.pts.iter().any(|q| !q.is_finite())
                    || p.pts.windows(2).any(|w| w[0] == w[1])
                {
                    return Err(ElementError::BadPath);
                }
            }
        }
        Ok(())
    }
}

fn finite(vals: &[f64]) -> Result<(), ElementError> {
    if vals.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(ElementError::NonFinite)
    }
}

fn check_rect(r: &Rect) -> Result<(), ElementError> {
    if !r.is_valid() || r.width() < MIN_RECT_SIDE || r.height() < MIN_RECT_SIDE {
        return Err(ElementError::BadRect);
    }
    Ok(())
}

fn validate_pie(p: &PieEl) -> Result<(), ElementError> {
    finite(&[p.center.x, p.center.y, p.outer_r, p.inner_r, p.start_angle])?;
    if p.shares.is_empty() {
        return Err(ElementError::NoSectors);
    }
    finite(&p.shares)?;
    if p.outer_r < MIN_RADIUS {
        return Err(ElementError::Radius(p.outer_r));
    }
    if p.inner_r < 0.0 {
        return Err(ElementError::Radius(p.inner_r));
    }
    if p.inner_r > 0.0 && p.inner_r + MIN_RING_WIDTH > p.outer_r {
        return Err(ElementError::RingTooThin { inner: p.inner_r, outer: p.outer_r });
    }
    let sum: f64 = p.shares.iter().sum();
    if (sum - 360.0).abs() > SHARE_SUM_TOLERANCE {
        return Err(ElementError::ShareSum(sum));
    }
    for (index, &value) in p.shares.iter().enumerate() {
        if value < MIN_SHARE_DEG {
            return Err(ElementError::ShareTooSmall { index, value });
        }
    }
    Ok(())
}

fn square_around(c: Point, r: f64) -> Rect {
    Rect::from_coords(c.x - r, c.y - r, c.x + r, c.y + r)
}

fn rect_of(pts: &[Point]) -> Rect {
    let mut r = Rect::around(pts[0]);
    for &p in &pts[1..] {
        r.include(p);
    }
    r
}

/// Translates every coordinate by `d`. A scale only follows the component of
/// `d` normal to its edge, which changes its offset.
pub fn move_by(el: &Element, d: Vector) -> Element {
    let mut out = el.clone();
    out.kind = match &el.kind {
        ElementKind::Polygon(p) => ElementKind::Polygon(PolygonEl { geom: p.geom.translate(d) }),
        ElementKind::Circle(c) => ElementKind::Circle(CircleEl { center: c.center + d, ..c.clone() }),
        ElementKind::Pie(p) => ElementKind::Pie(PieEl { center: p.center + d, ..p.clone() }),
        ElementKind::Control(c) => ElementKind::Control(ControlEl { rect: c.rect.translate(d), ..c.clone() }),
        ElementKind::Comment(c) => ElementKind::Comment(CommentEl { anchor: c.anchor + d, ..c.clone() }),
        ElementKind::PlotArea(a) => ElementKind::PlotArea(PlotAreaEl { rect: a.rect.translate(d), ..a.clone() }),
        ElementKind::Scale(s) => {
            let (offset, shift) = match s.edge {
                ScaleEdge::Left => (s.offset - d.x, Point::new(d.x, 0.0)),
                ScaleEdge::Bottom => (s.offset + d.y, Point::new(0.0, d.y)),
            };
            ElementKind::Scale(ScaleEl { offset, rect: s.rect.translate(shift), ..s.clone() })
        }
        ElementKind::Spot(s) => ElementKind::Spot(SpotEl { center: s.center + d, ..s.clone() }),
        ElementKind::Labyrinth(l) => ElementKind::Labyrinth(LabyrinthEl {
            walls: l.walls.iter().map(|w| Wall { a: w.a + d, b: w.b + d }).collect(),
            thickness: l.thickness,
        }),
        ElementKind::Path(p) => ElementKind::Path(PathEl { pts: p.pts.iter().map(|&q| q + d).collect() }),
    };
    out
}

/// Drags border `border_id` to follow `cursor`.
///
/// Rectangles (controls, plot areas) number their borders top, right,
/// bottom, left; the opposite edge never moves and the side is clamped to
/// [`MIN_RECT_SIDE`]. Circles and pies resize radially (pies: border 0 is the
/// outer circle, border 1 the inner one). Polygon borders are outer contour
/// piece indices; the piece shifts along its outward normal until it passes
/// through the cursor and its neighbours' endpoints follow.
pub fn resize_border(el: &Element, border_id: usize, cursor: Point) -> Result<Element, EditError> {
    let mut out = el.clone();
    match &mut out.kind {
        ElementKind::Control(ControlEl { rect, .. }) | ElementKind::PlotArea(PlotAreaEl { rect, .. }) => {
            *rect = resize_rect(rect, border_id, cursor)?;
        }
        ElementKind::Circle(c) => {
            if border_id != 0 {
                return Err(EditError::NoSuchBorder(border_id));
            }
            c.r = cursor.dist(c.center).max(MIN_RADIUS);
        }
        ElementKind::Pie(p) => {
            let d = cursor.dist(p.center);
            match border_id {
                0 => {
                    let mut r = d.max(MIN_RADIUS);
                    if p.inner_r > 0.0 {
                        r = r.max(p.inner_r + MIN_RING_WIDTH);
                    }
                    p.outer_r = r;
                }
                1 if p.inner_r > 0.0 => p.inner_r = d.clamp(0.0, max_inner_radius(p.outer_r)),
                _ => return Err(EditError::NoSuchBorder(border_id)),
            }
        }
        ElementKind::Polygon(p) => p.geom = resize_polygon_border(&p.geom, border_id, cursor)?,
        _ => return Err(EditError::NoSuchBorder(border_id)),
    }
    out.validate()?;
    Ok(out)
}

/// Largest inner radius that keeps a ring at least [`MIN_RING_WIDTH`] wide.
fn max_inner_radius(outer: f64) -> f64 {
    let mut v = outer - MIN_RING_WIDTH;
    while v > 0.0 && v + MIN_RING_WIDTH > outer {
        v = f64::from_bits(v.to_bits() - 1);
    }
    v.max(0.0)
}

fn resize_rect(r: &Rect, border_id: usize, cursor: Point) -> Result<Rect, EditError> {
    let mut out = *r;
    match border_id {
        0 => out.min.y = low_edge(cursor.y, r.max.y),
        1 => out.max.x = high_edge(cursor.x, r.min.x),
        2 => out.max.y = high_edge(cursor.y, r.min.y),
        3 => out.min.x = low_edge(cursor.x, r.max.x),
        _ => return Err(EditError::NoSuchBorder(border_id)),
    }
    Ok(out)
}

/// Position for a moving low edge opposite `fixed`, at least
/// [`MIN_RECT_SIDE`] away once the difference is rounded.
fn low_edge(wanted: f64, fixed: f64) -> f64 {
    let mut v = wanted.min(fixed - MIN_RECT_SIDE);
    while fixed - v < MIN_RECT_SIDE {
        v = v.next_down();
    }
    v
}

fn high_edge(wanted: f64, fixed: f64) -> f64 {
    let mut v = wanted.max(fixed + MIN_RECT_SIDE);
    while v - fixed < MIN_RECT_SIDE {
        v = v.next_up();
    }
    v
}

fn resize_polygon_border(geom: &ShapeGeom, k: usize, cursor: Point) -> Result<ShapeGeom, EditError> {
    let n = geom.outer.pieces.len();
    if k >= n {
        return Err(EditError::NoSuchBorder(k));
    }
    let mut pieces = geom.outer.pieces.clone();
    let orientation = geometry::ring_area(&geom.outer.flatten(geometry::ARC_FLATTEN_TOLERANCE));
    let replaced = match pieces[k] {
        SegmentPiece::Line { a, b } => {
            let u = (b - a) * (1.0 / a.dist(b));
            let normal = if orientation > 0.0 {
                Point::new(u.y, -u.x)
            } else {
                Point::new(-u.y, u.x)
            };
            let delta = (cursor - a).dot(normal);
            SegmentPiece::line(a + normal * delta, b + normal * delta)
        }
        SegmentPiece::Arc { center, start_angle, sweep, .. } => {
            let radius = cursor.dist(center).max(MIN_RADIUS);
            SegmentPiece::arc(center, radius, start_angle, sweep)
        }
    };
    pieces[k] = replaced;
    if n > 1 {
        let prev = (k + n - 1) % n;
        let next = (k + 1) % n;
        match &mut pieces[prev] {
            SegmentPiece::Line { b, .. } => *b = replaced.start(),
            SegmentPiece::Arc { .. } => return Err(EditError::CurvedNeighbour),
        }
        match &mut pieces[next] {
            SegmentPiece::Line { a, .. } => *a = replaced.end(),
            SegmentPiece::Arc { .. } => return Err(EditError::CurvedNeighbour),
        }
    }
    let geom = ShapeGeom { outer: geometry::Contour { pieces }, holes: geom.holes.clone() };
    geom.check().map_err(ElementError::from)?;
    // An edge dragged across the opposite side turns the shape inside out.
    let after = geometry::ring_area(&geom.outer.flatten(geometry::ARC_FLATTEN_TOLERANCE));
    if after * orientation <= 0.0 {
        return Err(ElementError::Shape(GeometryError::SelfIntersecting).into());
    }
    Ok(geom)
}

/// Moves one special point to `cursor`: a polygon vertex, a path point, or a
/// labyrinth wall end (`2 * wall + end`).
pub fn reconfigure_vertex(el: &Element, index: usize, cursor: Point) -> Result<Element, EditError> {
    let mut out = el.clone();
    match &mut out.kind {
        ElementKind::Polygon(p) => {
            let n = p.geom.outer.pieces.len();
            if index >= n || !p.geom.outer.is_polygonal() {
                return Err(EditError::NoSuchVertex(index));
            }
            let pieces = &mut p.geom.outer.pieces;
            if let SegmentPiece::Line { a, .. } = &mut pieces[index] {
                *a = cursor;
            }
            if let SegmentPiece::Line { b, .. } = &mut pieces[(index + n - 1) % n] {
                *b = cursor;
            }
        }
        ElementKind::Path(p) => {
            let slot = p.pts.get_mut(index).ok_or(EditError::NoSuchVertex(index))?;
            *slot = cursor;
        }
        ElementKind::Labyrinth(l) => {
            let wall = l.walls.get_mut(index / 2).ok_or(EditError::NoSuchVertex(index))?;
            if index % 2 == 0 {
                wall.a = cursor;
            } else {
                wall.b = cursor;
            }
        }
        _ => return Err(EditError::NoSuchVertex(index)),
    }
    out.validate()?;
    Ok(out)
}

/// Rotates all geometry about `pivot` by `dtheta`.
pub fn rotate_to(el: &Element, pivot: Point, dtheta: f64) -> Result<Element, EditError> {
    if !el.rotatable || !el.kind.supports_rotation() {
        return Err(EditError::NotRotatable);
    }
    let rot = |p: Point| rotate_about(p, pivot, dtheta);
    let mut out = el.clone();
    out.kind = match &el.kind {
        ElementKind::Polygon(p) => ElementKind::Polygon(PolygonEl { geom: p.geom.rotate(pivot, dtheta) }),
        ElementKind::Circle(c) => ElementKind::Circle(CircleEl { center: rot(c.center), r: c.r }),
        ElementKind::Pie(p) => ElementKind::Pie(PieEl {
            center: rot(p.center),
            start_angle: p.start_angle + dtheta,
            ..p.clone()
        }),
        ElementKind::Comment(c) => ElementKind::Comment(CommentEl {
            anchor: rot(c.anchor),
            angle: c.angle + dtheta,
            ..c.clone()
        }),
        ElementKind::Spot(s) => ElementKind::Spot(SpotEl { center: rot(s.center), ..s.clone() }),
        ElementKind::Labyrinth(l) => ElementKind::Labyrinth(LabyrinthEl {
            walls: l.walls.iter().map(|w| Wall { a: rot(w.a), b: rot(w.b) }).collect(),
            thickness: l.thickness,
        }),
        ElementKind::Path(p) => ElementKind::Path(PathEl { pts: p.pts.iter().map(|&q| rot(q)).collect() }),
        ElementKind::Control(_) | ElementKind::PlotArea(_) | ElementKind::Scale(_) => {
            return Err(EditError::NotRotatable)
        }
    };
    Ok(out)
}

/// Moves divider `index` of a pie to the cursor's polar angle, transferring
/// share between the two sectors it separates. Each share stays at least
/// [`MIN_SHARE_DEG`]; the growing sector absorbs the rounding so the total
/// stays 360.
pub fn drag_divider(el: &Element, index: usize, cursor: Point) -> Result<Element, EditError> {
    let ElementKind::Pie(pie) = &el.kind else {
        return Err(EditError::NoSuchDivider(index));
    };
    let n = pie.shares.len();
    if index >= n {
        return Err(EditError::NoSuchDivider(index));
    }
    if cursor == pie.center {
        return Ok(el.clone());
    }
    let current = pie.divider_angle(index);
    let wanted = cursor.angle_from(pie.center);
    let mut delta = wrap_angle(wanted - current).to_degrees();

    let mut p = pie.clone();
    if n == 1 {
        p.start_angle += delta.to_radians();
    } else {
        let prev = (index + n - 1) % n;
        delta = delta.clamp(-(p.shares[prev] - MIN_SHARE_DEG), p.shares[index] - MIN_SHARE_DEG);
        p.shares[index] = (p.shares[index] - delta).max(MIN_SHARE_DEG);
        let others: f64 = p.shares.iter().enumerate().filter(|&(k, _)| k != prev).map(|(_, s)| s).sum();
        p.shares[prev] = 360.0 - others;
        if p.shares[prev] < MIN_SHARE_DEG {
            return Ok(el.clone());
        }
        if index == 0 {
            p.start_angle += delta.to_radians();
        }
    }
    if p.start_angle.abs() > TAU {
        p.start_angle = p.start_angle.rem_euclid(TAU);
    }
    let mut out = el.clone();
    out.kind = ElementKind::Pie(p);
    Ok(out)
}

/// Spot position after a path-constrained drag to `cursor`.
pub fn project_spot(path: &PathEl, cursor: Point) -> Point {
    project_to_polyline(cursor, &path.pts).foot
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    fn el(kind: ElementKind) -> Element {
        Element::new(ElementId(1), kind)
    }

    fn poly(pts: &[(f64, f64)]) -> Element {
        let pts: Vec<Point> = pts.iter().map(|&(x, y)| Point::new(x, y)).collect();
        el(ElementKind::Polygon(PolygonEl { geom: ShapeGeom::polygon(&pts).unwrap() }))
    }

    fn control(x0: f64, y0: f64, x1: f64, y1: f64) -> Element {
        el(ElementKind::Control(ControlEl { rect: Rect::from_coords(x0, y0, x1, y1), tag: "b".into() }))
    }

    fn pie(shares: &[f64]) -> Element {
        el(ElementKind::Pie(PieEl {
            center: Point::ORIGIN,
            outer_r: 50.0,
            inner_r: 0.0,
            start_angle: 0.0,
            shares: shares.to_vec(),
        }))
    }

    fn shares(e: &Element) -> Vec<f64> {
        match &e.kind {
            ElementKind::Pie(p) => p.shares.clone(),
            _ => unreachable!(),
        }
    }

    #[test]
    fn move_square() {
        let sq = poly(&[(0.0, 0.0), (10.0, 0.0), (10.0, 10.0), (0.0, 10.0)]);
        let moved = move_by(&sq, Point::new(5.0, -2.0));
        assert_eq!(moved.bbox(), Rect::from_coords(5.0, -2.0, 15.0, 8.0));
        assert_eq!(move_by(&sq, Point::ORIGIN), sq);
    }

    #[test]
    fn resize_control_right_edge() {
        let c = control(0.0, 0.0, 100.0, 40.0);
        let r = resize_border(&c, 1, Point::new(120.0, 13.0)).unwrap();
        assert_eq!(r.bbox(), Rect::from_coords(0.0, 0.0, 120.0, 40.0));
        let r = resize_border(&c, 1, Point::new(4.0, 13.0)).unwrap();
        assert_eq!(r.bbox().width(), 10.0);
        let r = resize_border(&c, 3, Point::new(-30.0, 0.0)).unwrap();
        assert_eq!(r.bbox(), Rect::from_coords(-30.0, 0.0, 100.0, 40.0));
        assert_eq!(resize_border(&c, 4, Point::ORIGIN), Err(EditError::NoSuchBorder(4)));
    }

    #[test]
    fn resize_circle_clamps() {
        let c = el(ElementKind::Circle(CircleEl { center: Point::ORIGIN, r: 10.0 }));
        let r = resize_border(&c, 0, Point::new(0.0, 3.0)).unwrap();
        assert!(matches!(r.kind, ElementKind::Circle(CircleEl { r, .. }) if r == 5.0));
    }

    #[test]
    fn resize_ring_borders() {
        let mut p = pie(&[180.0, 180.0]);
        if let ElementKind::Pie(pp) = &mut p.kind {
            pp.inner_r = 20.0;
        }
        let r = resize_border(&p, 1, Point::new(100.0, 0.0)).unwrap();
        let ElementKind::Pie(pp) = &r.kind else { unreachable!() };
        assert!(pp.inner_r + 1.0 <= pp.outer_r && pp.inner_r > 48.9);
        let r = resize_border(&p, 0, Point::new(3.0, 0.0)).unwrap();
        let ElementKind::Pie(pp) = &r.kind else { unreachable!() };
        assert_eq!(pp.outer_r, 21.0);
        let r = resize_border(&p, 1, Point::new(0.0, 0.0)).unwrap();
        let ElementKind::Pie(pp) = &r.kind else { unreachable!() };
        assert_eq!(pp.inner_r, 0.0);
    }

    #[test]
    fn resize_polygon_edge_moves_along_normal() {
        let sq = poly(&[(0.0, 0.0), (10.0, 0.0), (10.0, 10.0), (0.0, 10.0)]);
        // piece 1 is the right edge (10,0)->(10,10)
        let r = resize_border(&sq, 1, Point::new(25.0, 3.0)).unwrap();
        assert_eq!(r.bbox(), Rect::from_coords(0.0, 0.0, 25.0, 10.0));
        // same with the opposite winding
        let sq2 = poly(&[(0.0, 0.0), (0.0, 10.0), (10.0, 10.0), (10.0, 0.0)]);
        let r = resize_border(&sq2, 2, Point::new(25.0, 3.0)).unwrap();
        assert_eq!(r.bbox(), Rect::from_coords(0.0, 0.0, 25.0, 10.0));
        // pushing the right edge past the left one collapses the square
        assert!(resize_border(&sq, 1, Point::new(-5.0, 3.0)).is_err());
    }

    #[test]
    fn reconfigure_triangle() {
        let tri = poly(&[(0.0, 0.0), (10.0, 0.0), (0.0, 10.0)]);
        let r = reconfigure_vertex(&tri, 1, Point::new(20.0, 0.0)).unwrap();
        let ElementKind::Polygon(p) = &r.kind else { unreachable!() };
        assert_eq!(p.geom.outer.vertices(), vec![Point::new(0.0, 0.0), Point::new(20.0, 0.0), Point::new(0.0, 10.0)]);
    }

    #[test]
    fn reconfigure_rejects_self_intersection() {
        let sq = poly(&[(0.0, 0.0), (10.0, 0.0), (10.0, 10.0), (0.0, 10.0)]);
        // vertex 1 dragged across the left edge makes a bow tie
        let err = reconfigure_vertex(&sq, 1, Point::new(-5.0, 5.0)).unwrap_err();
        assert!(matches!(err, EditError::Invalid(ElementError::Shape(GeometryError::SelfIntersecting))));
        assert_eq!(reconfigure_vertex(&sq, 9, Point::ORIGIN), Err(EditError::NoSuchVertex(9)));
    }

    #[test]
    fn rotate_comment() {
        let c = el(ElementKind::Comment(CommentEl {
            anchor: Point::new(10.0, 0.0),
            angle: 0.0,
            text: "peak".into(),
            attached_to: None,
        }));
        let r = rotate_to(&c, Point::ORIGIN, FRAC_PI_4).unwrap();
        let ElementKind::Comment(cc) = &r.kind else { unreachable!() };
        assert_eq!(cc.angle, FRAC_PI_4);
        assert!(cc.anchor.dist(rotate_about(Point::new(10.0, 0.0), Point::ORIGIN, FRAC_PI_4)) == 0.0);
    }

    #[test]
    fn rotate_full_turn() {
        let tri = poly(&[(0.0, 0.0), (10.0, 0.0), (0.0, 10.0)]);
        let r = rotate_to(&tri, Point::new(3.0, 3.0), TAU).unwrap();
        let (ElementKind::Polygon(a), ElementKind::Polygon(b)) = (&tri.kind, &r.kind) else { unreachable!() };
        for (p, q) in a.geom.outer.vertices().iter().zip(b.geom.outer.vertices()) {
            assert!(p.dist(q) < 1e-9);
        }
    }

    #[test]
    fn controls_do_not_rotate() {
        let c = control(0.0, 0.0, 100.0, 40.0);
        assert_eq!(rotate_to(&c, Point::ORIGIN, 1.0), Err(EditError::NotRotatable));
        let mut forced = c.clone();
        forced.rotatable = true;
        assert_eq!(rotate_to(&forced, Point::ORIGIN, 1.0), Err(EditError::NotRotatable));
        assert!(forced.validate().is_err());
    }

    #[test]
    fn divider_adjacent_transfer() {
        let p = pie(&[90.0, 90.0, 90.0, 90.0]);
        // divider 1 sits at 90 degrees; drag it to 100 degrees
        let cursor = Point::polar(Point::ORIGIN, 30.0, 100f64.to_radians());
        let r = drag_divider(&p, 1, cursor).unwrap();
        let s = shares(&r);
        let expected = [100.0, 80.0, 90.0, 90.0];
        for (a, b) in s.iter().zip(expected) {
            assert!((a - b).abs() < 1e-9, "{s:?}");
        }
        assert_eq!(s[2], 90.0);
        assert_eq!(s[3], 90.0);
    }

    #[test]
    fn divider_zero_moves_start_angle() {
        let p = pie(&[90.0, 90.0, 90.0, 90.0]);
        let cursor = Point::polar(Point::ORIGIN, 30.0, -FRAC_PI_2 / 9.0); // -10 degrees
        let r = drag_divider(&p, 0, cursor).unwrap();
        let ElementKind::Pie(pp) = &r.kind else { unreachable!() };
        assert!((pp.shares[0] - 100.0).abs() < 1e-9);
        assert!((pp.shares[3] - 80.0).abs() < 1e-9);
        assert!((pp.start_angle + 10f64.to_radians()).abs() < 1e-12);
    }

    #[test]
    fn divider_clamps_at_one_degree() {
        let p = pie(&[90.0, 90.0, 90.0, 90.0]);
        let cursor = Point::polar(Point::ORIGIN, 30.0, PI * 1.2);
        let s = shares(&drag_divider(&p, 1, cursor).unwrap());
        assert!((s[1] - 1.0).abs() < 1e-9);
        assert!((s.iter().sum::<f64>() - 360.0).abs() < 1e-9);
    }

    #[test]
    fn pie_validation() {
        assert!(pie(&[90.0, 90.0, 180.0]).validate().is_ok());
        assert!(matches!(pie(&[90.0, 80.0, 180.0]).validate(), Err(ElementError::ShareSum(_))));
        assert!(matches!(
            pie(&[0.5, 179.5, 180.0]).validate(),
            Err(ElementError::ShareTooSmall { index: 0, .. })
        ));
    }

    #[test]
    fn scale_moves_along_normal_only() {
        let s = el(ElementKind::Scale(ScaleEl {
            attached_to: ElementId(0),
            edge: ScaleEdge::Left,
            offset: 4.0,
            rect: scale_rect(&Rect::from_coords(100.0, 0.0, 200.0, 50.0), ScaleEdge::Left, 4.0),
        }));
        let m = move_by(&s, Point::new(-6.0, 11.0));
        let ElementKind::Scale(sc) = &m.kind else { unreachable!() };
        assert_eq!(sc.offset, 10.0);
        assert_eq!(sc.rect, scale_rect(&Rect::from_coords(100.0, 0.0, 200.0, 50.0), ScaleEdge::Left, 10.0));
    }

    #[test]
    fn path_and_labyrinth_points() {
        let p = el(ElementKind::Path(PathEl { pts: vec![Point::new(0.0, 0.0), Point::new(10.0, 0.0)] }));
        let r = reconfigure_vertex(&p, 1, Point::new(10.0, 10.0)).unwrap();
        let ElementKind::Path(pp) = &r.kind else { unreachable!() };
        assert_eq!(pp.pts[1], Point::new(10.0, 10.0));
        assert!(reconfigure_vertex(&p, 1, Point::new(0.0, 0.0)).is_err());

        let l = el(ElementKind::Labyrinth(LabyrinthEl {
            walls: vec![Wall { a: Point::new(0.0, 0.0), b: Point::new(10.0, 0.0) }],
            thickness: 2.0,
        }));
        let r = reconfigure_vertex(&l, 1, Point::new(10.0, 30.0)).unwrap();
        let ElementKind::Labyrinth(ll) = &r.kind else { unreachable!() };
        assert_eq!(ll.walls[0].b, Point::new(10.0, 30.0));
        assert_eq!(reconfigure_vertex(&l, 2, Point::ORIGIN), Err(EditError::NoSuchVertex(2)));
    }
}

//! Covers: the ordered list of invisible sensitive areas that makes an
//! element grabbable.
//!
//! Nodes are tested in order and the first one containing the pointer wins,
//! so special points come first, then border strips, then the interior.

use serde::{Deserialize, Serialize};

use crate::elements::{Element, ElementKind, SpotMode};
use crate::geometry::{
    dist_to_segment, FlatShape, Point, Rect, SegmentPiece, ShapeGeom, ARC_FLATTEN_TOLERANCE,
};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoverParams {
    pub strip_halfwidth: f64,
    pub vertex_radius: f64,
    pub frame_margin: f64,
}

impl Default for CoverParams {
    fn default() -> Self {
        CoverParams { strip_halfwidth: 3.0, vertex_radius: 5.0, frame_margin: 6.0 }
    }
}

impl CoverParams {
    pub fn is_valid(&self) -> bool {
        [self.strip_halfwidth, self.vertex_radius, self.frame_margin]
            .iter()
            .all(|v| v.is_finite() && *v > 0.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum NodeShape {
    Circle { center: Point, r: f64 },
    Strip { a: Point, b: Point, halfwidth: f64 },
    Polygon { shape: Box<FlatShape> },
}

impl NodeShape {
    pub fn polygon(shape: &ShapeGeom) -> Self {
        NodeShape::Polygon { shape: Box::new(shape.flat()) }
    }

    pub fn contains(&self, p: Point) -> bool {
        match self {
            NodeShape::Circle { center, r } => p.dist(*center) <= *r,
            NodeShape::Strip { a, b, halfwidth } => dist_to_segment(p, *a, *b) <= *halfwidth,
            NodeShape::Polygon { shape } => shape.contains(p),
        }
    }

    pub fn bounds(&self) -> Rect {
        match self {
            NodeShape::Circle { center, r } => Rect::around(*center).expand(*r),
            NodeShape::Strip { a, b, halfwidth } => {
                let mut r = Rect::around(*a);
                r.include(*b);
                r.expand(*halfwidth)
            }
            NodeShape::Polygon { shape } => shape.bounds(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum NodeAction {
    Move,
    ResizeBorder { border_id: usize },
    Vertex { index: usize },
    Divider { index: usize },
    PathConstrained,
    /// Matches, but hands the press to whatever lies beneath the element.
    Transparent,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoverNode {
    pub shape: NodeShape,
    pub action: NodeAction,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Cover {
    pub nodes: Vec<CoverNode>,
    bounds: Option<Rect>,
}

impl Cover {
    pub fn new(nodes: Vec<CoverNode>) -> Self {
        let bounds = nodes.iter().map(|n| n.shape.bounds()).reduce(|a, b| a.union(&b));
        Cover { nodes, bounds }
    }

    /// Box enclosing every node; `None` for an empty cover.
    pub fn bounds(&self) -> Option<Rect> {
        self.bounds
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Index of the first node containing `p`.
pub fn resolve_hit(cover: &Cover, p: Point) -> Option<usize> {
    match cover.bounds {
        Some(b) if b.contains(p) => cover.nodes.iter().position(|n| n.shape.contains(p)),
        _ => None,
    }
}

struct Builder<'a> {
    params: &'a CoverParams,
    nodes: Vec<CoverNode>,
}

impl Builder<'_> {
    fn circle(&mut self, center: Point, action: NodeAction) {
        self.nodes.push(CoverNode {
            shape: NodeShape::Circle { center, r: self.params.vertex_radius },
            action,
        });
    }

    fn strip(&mut self, a: Point, b: Point, halfwidth: f64, action: NodeAction) {
        self.nodes.push(CoverNode { shape: NodeShape::Strip { a, b, halfwidth }, action });
    }

    /// Strips along a border piece; arcs become chains of chord strips.
    fn piece(&mut self, piece: &SegmentPiece, action: NodeAction) {
        let pts = piece.flatten_open(ARC_FLATTEN_TOLERANCE);
        for w in pts.windows(2) {
            self.strip(w[0], w[1], self.params.strip_halfwidth, action);
        }
    }

    fn interior(&mut self, shape: &ShapeGeom, action: NodeAction) {
        self.nodes.push(CoverNode { shape: NodeShape::polygon(shape), action });
    }

    fn rect_borders(&mut self, r: &Rect) {
        let c = r.corners();
        for i in 0..4 {
            self.strip(c[i], c[(i + 1) % 4], self.params.strip_halfwidth, NodeAction::ResizeBorder { border_id: i });
        }
    }
}

/// Builds the cover of an element.
///
/// Order: vertex and divider circles, then border strips, then the interior.
/// Controls have no interior node so presses inside them reach the control;
/// their corners move them and their edges resize them.
pub fn build_cover(el: &Element, params: &CoverParams) -> Cover {
    let mut b = Builder { params, nodes: Vec::new() };
    match &el.kind {
        ElementKind::Polygon(p) => {
            let outer = &p.geom.outer;
            if outer.is_polygonal() {
                for (index, v) in outer.vertices().into_iter().enumerate() {
                    b.circle(v, NodeAction::Vertex { index });
                }
            }
            for (border_id, piece) in outer.pieces.iter().enumerate() {
                b.piece(piece, NodeAction::ResizeBorder { border_id });
            }
            for hole in &p.geom.holes {
                for piece in &hole.pieces {
                    b.piece(piece, NodeAction::Transparent);
                }
            }
            b.interior(&p.geom, NodeAction::Move);
        }
        ElementKind::Circle(c) => {
            b.piece(&SegmentPiece::full_circle(c.center, c.r), NodeAction::ResizeBorder { border_id: 0 });
            if let Ok(shape) = ShapeGeom::circle(c.center, c.r) {
                b.interior(&shape, NodeAction::Move);
            }
        }
        ElementKind::Pie(p) => {
            for index in 0..p.shares.len() {
                b.circle(Point::polar(p.center, p.outer_r, p.divider_angle(index)), NodeAction::Divider { index });
            }
            b.piece(&SegmentPiece::full_circle(p.center, p.outer_r), NodeAction::ResizeBorder { border_id: 0 });
            if p.inner_r > 0.0 {
                b.piece(&SegmentPiece::full_circle(p.center, p.inner_r), NodeAction::ResizeBorder { border_id: 1 });
            }
            if let Ok(shape) = p.shape() {
                b.interior(&shape, NodeAction::Move);
            }
        }
        ElementKind::Control(c) => {
            for corner in c.rect.corners() {
                b.circle(corner, NodeAction::Move);
            }
            b.rect_borders(&c.rect);
        }
        ElementKind::PlotArea(a) => {
            b.rect_borders(&a.rect);
            if let Ok(shape) = ShapeGeom::rect(&a.rect) {
                b.interior(&shape, NodeAction::Move);
            }
        }
        ElementKind::Comment(c) => {
            if let Ok(shape) = ShapeGeom::polygon(&c.corners()) {
                b.interior(&shape, NodeAction::Move);
            }
        }
        ElementKind::Scale(s) => {
            if let Ok(shape) = ShapeGeom::rect(&s.rect) {
                b.interior(&shape, NodeAction::Move);
            }
        }
        ElementKind::Spot(s) => {
            let action = match s.mode {
                SpotMode::Path(_) => NodeAction::PathConstrained,
                SpotMode::Free | SpotMode::Maze(_) => NodeAction::Move,
            };
            b.nodes.push(CoverNode { shape: NodeShape::Circle { center: s.center, r: s.r }, action });
        }
        ElementKind::Labyrinth(l) => {
            for (w, wall) in l.walls.iter().enumerate() {
                b.circle(wall.a, NodeAction::Vertex { index: 2 * w });
                b.circle(wall.b, NodeAction::Vertex { index: 2 * w + 1 });
            }
            let hw = (l.thickness * 0.5).max(params.strip_halfwidth);
            for wall in &l.walls {
                b.strip(wall.a, wall.b, hw, NodeAction::Move);
            }
        }
        ElementKind::Path(p) => {
            for (index, &q) in p.pts.iter().enumerate() {
                b.circle(q, NodeAction::Vertex { index });
            }
            for w in p.pts.windows(2) {
                b.strip(w[0], w[1], params.strip_halfwidth, NodeAction::Move);
            }
        }
    }
    Cover::new(b.nodes)
}

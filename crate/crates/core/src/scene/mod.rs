//! The scene: z-ordered elements, groups with self-adjusting frames, and
//! named views.

mod persist;
mod svg;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use persist::{load_scene, save_scene, LoadError, FORMAT_VERSION};
pub use svg::to_svg;

use crate::apps::labyrinth::spot_is_clear;
use crate::cover::CoverParams;
use crate::elements::{
    self, scale_rect, Element, ElementError, ElementId, ElementKind, PieEl, SpotMode,
};
use crate::geometry::{project_to_polyline, Point, Rect, ShapeGeom, Vector};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EngineConfig {
    pub cover_params: CoverParams,
    pub raise_on_grab: bool,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig { cover_params: CoverParams::default(), raise_on_grab: true }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GroupId(pub u32);

/// A one-level group. `frame` is derived: the union of the member boxes grown
/// by `margin`, recomputed after every change.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Group {
    pub id: GroupId,
    pub members: Vec<ElementId>,
    pub margin: f64,
    pub frame: Rect,
}

/// The geometric fields of one element, as recorded by a view.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Geometry {
    Polygon { geom: ShapeGeom },
    Circle { center: Point, r: f64 },
    Pie { center: Point, outer_r: f64, inner_r: f64, start_angle: f64, shares: Vec<f64> },
    Control { rect: Rect },
    Comment { anchor: Point, angle: f64 },
    PlotArea { rect: Rect, world: elements::WorldRect },
    Scale { offset: f64 },
    Spot { center: Point, r: f64 },
    Labyrinth { walls: Vec<elements::Wall>, thickness: f64 },
    Path { pts: Vec<Point> },
}

impl Geometry {
    pub fn of(kind: &ElementKind) -> Geometry {
        match kind {
            ElementKind::Polygon(p) => Geometry::Polygon { geom: p.geom.clone() },
            ElementKind::Circle(c) => Geometry::Circle { center: c.center, r: c.r },
            ElementKind::Pie(p) => Geometry::Pie {
                center: p.center,
                outer_r: p.outer_r,
                inner_r: p.inner_r,
                start_angle: p.start_angle,
                shares: p.shares.clone(),
            },
            ElementKind::Control(c) => Geometry::Control { rect: c.rect },
            ElementKind::Comment(c) => Geometry::Comment { anchor: c.anchor, angle: c.angle },
            ElementKind::PlotArea(a) => Geometry::PlotArea { rect: a.rect, world: a.world },
            ElementKind::Scale(s) => Geometry::Scale { offset: s.offset },
            ElementKind::Spot(s) => Geometry::Spot { center: s.center, r: s.r },
            ElementKind::Labyrinth(l) => Geometry::Labyrinth { walls: l.walls.clone(), thickness: l.thickness },
            ElementKind::Path(p) => Geometry::Path { pts: p.pts.clone() },
        }
    }

    /// Writes the recorded fields back; `false` when the kinds differ.
    fn restore(&self, kind: &mut ElementKind) -> bool {
        match (self, kind) {
            (Geometry::Polygon { geom }, ElementKind::Polygon(p)) => p.geom = geom.clone(),
            (Geometry::Circle { center, r }, ElementKind::Circle(c)) => {
                c.center = *center;
                c.r = *r;
            }
            (Geometry::Pie { center, outer_r, inner_r, start_angle, shares }, ElementKind::Pie(p)) => {
                *p = PieEl {
                    center: *center,
                    outer_r: *outer_r,
                    inner_r: *inner_r,
                    start_angle: *start_angle,
                    shares: shares.clone(),
                }
            }
            (Geometry::Control { rect }, ElementKind::Control(c)) => c.rect = *rect,
            (Geometry::Comment { anchor, angle }, ElementKind::Comment(c)) => {
                c.anchor = *anchor;
                c.angle = *angle;
            }
            (Geometry::PlotArea { rect, world }, ElementKind::PlotArea(a)) => {
                a.rect = *rect;
                a.world = *world;
            }
            (Geometry::Scale { offset }, ElementKind::Scale(s)) => s.offset = *offset,
            (Geometry::Spot { center, r }, ElementKind::Spot(s)) => {
                s.center = *center;
                s.r = *r;
            }
            (Geometry::Labyrinth { walls, thickness }, ElementKind::Labyrinth(l)) => {
                l.walls = walls.clone();
                l.thickness = *thickness;
            }
            (Geometry::Path { pts }, ElementKind::Path(p)) => p.pts = pts.clone(),
            _ => return false,
        }
        true
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct View {
    pub geometry: BTreeMap<ElementId, Geometry>,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SceneError {
    #[error("no view named {0:?}")]
    UnknownView(String),
    #[error("no element {0}")]
    UnknownElement(ElementId),
    #[error("no group {0:?}")]
    UnknownGroup(GroupId),
    #[error("element {0} already belongs to a group")]
    AlreadyGrouped(ElementId),
    #[error("a group needs at least one member")]
    EmptyGroup,
    #[error("element {id}: {source}")]
    InvalidElement { id: ElementId, source: ElementError },
    #[error("element {id}: {reason}")]
    BadReference { id: ElementId, reason: String },
    #[error("spot {0} would overlap a labyrinth wall")]
    SpotCollision(ElementId),
}

/// One broken scene invariant.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub element: Option<ElementId>,
    pub group: Option<GroupId>,
    pub message: String,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match (self.element, self.group) {
            (Some(e), _) => write!(f, "element {e}: {}", self.message),
            (None, Some(g)) => write!(f, "group {}: {}", g.0, self.message),
            (None, None) => write!(f, "{}", self.message),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Scene {
    elements: Vec<Element>,
    groups: Vec<Group>,
    views: BTreeMap<String, View>,
    pub config: EngineConfig,
    next_element: u32,
    next_group: u32,
    touched: Vec<ElementId>,
}

impl PartialEq for Scene {
    fn eq(&self, o: &Scene) -> bool {
        self.elements == o.elements && self.groups == o.groups && self.views == o.views && self.config == o.config
    }
}

impl Scene {
    pub fn new(config: EngineConfig) -> Self {
        Scene { config, ..Default::default() }
    }

    /// Elements bottom to top; an element's z is its index.
    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn groups(&self) -> &[Group] {
        &self.groups
    }

    pub fn views(&self) -> &BTreeMap<String, View> {
        &self.views
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn z_of(&self, id: ElementId) -> Option<usize> {
        self.elements.iter().position(|e| e.id == id)
    }

    pub fn element(&self, id: ElementId) -> Option<&Element> {
        self.elements.iter().find(|e| e.id == id)
    }

    pub fn group(&self, id: GroupId) -> Option<&Group> {
        self.groups.iter().find(|g| g.id == id)
    }

    pub fn group_of(&self, id: ElementId) -> Option<&Group> {
        self.groups.iter().find(|g| g.members.contains(&id))
    }

    /// Ids whose cached covers may be stale since the last call.
    pub(crate) fn take_touched(&mut self) -> Vec<ElementId> {
        std::mem::take(&mut self.touched)
    }

    /// Adds an element on top with the kind's default rotatability.
    pub fn add(&mut self, kind: ElementKind) -> Result<ElementId, SceneError> {
        let rotatable = kind.supports_rotation();
        self.add_with(kind, rotatable, serde_json::Value::Null)
    }

    pub fn add_with(
        &mut self,
        mut kind: ElementKind,
        rotatable: bool,
        style: serde_json::Value,
    ) -> Result<ElementId, SceneError> {
        let id = ElementId(self.next_element);
        if let ElementKind::Scale(s) = &mut kind {
            let area = self.plot_rect(s.attached_to).ok_or_else(|| SceneError::BadReference {
                id,
                reason: format!("scale attached to {} which is not a plot area", s.attached_to),
            })?;
            s.rect = scale_rect(&area, s.edge, s.offset);
        }
        let el = Element { id, kind, rotatable, style };
        el.validate().map_err(|source| SceneError::InvalidElement { id, source })?;
        self.check_references(&el).map_err(|reason| SceneError::BadReference { id, reason })?;
        if let ElementKind::Spot(s) = &el.kind {
            if let SpotMode::Maze(lab) = s.mode {
                if !self.labyrinth_clear_for(lab, s) {
                    return Err(SceneError::BadReference { id, reason: "spot overlaps a labyrinth wall".into() });
                }
            }
        }
        self.next_element += 1;
        self.touched.push(id);
        self.elements.push(el);
        self.refresh_derived();
        Ok(id)
    }

    pub(crate) fn insert_loaded(&mut self, el: Element) {
        self.next_element = self.next_element.max(el.id.0 + 1);
        self.touched.push(el.id);
        self.elements.push(el);
    }

    pub(crate) fn insert_group_loaded(&mut self, g: Group) {
        self.next_group = self.next_group.max(g.id.0 + 1);
        self.groups.push(g);
    }

    pub(crate) fn insert_view_loaded(&mut self, name: String, v: View) {
        self.views.insert(name, v);
    }

    /// Removes an element. Comments attached to it detach, scales attached to
    /// it are removed as well, spots bound to it become free, and it leaves its
    /// group (an emptied group disappears).
    pub fn remove(&mut self, id: ElementId) -> Option<Element> {
        let z = self.z_of(id)?;
        let el = self.elements.remove(z);
        self.touched.push(id);
        let dependent_scales: Vec<ElementId> = self
            .elements
            .iter()
            .filter(|e| matches!(&e.kind, ElementKind::Scale(s) if s.attached_to == id))
            .map(|e| e.id)
            .collect();
        for e in &mut self.elements {
            match &mut e.kind {
                ElementKind::Comment(c) if c.attached_to == Some(id) => c.attached_to = None,
                ElementKind::Spot(s) if matches!(s.mode, SpotMode::Path(p) | SpotMode::Maze(p) if p == id) => {
                    s.mode = SpotMode::Free;
                    self.touched.push(e.id);
                }
                _ => {}
            }
        }
        for g in &mut self.groups {
            g.members.retain(|&m| m != id);
        }
        self.groups.retain(|g| !g.members.is_empty());
        for s in dependent_scales {
            self.remove(s);
        }
        self.refresh_derived();
        Some(el)
    }

    /// Replaces an element's data in place, keeping its z.
    pub(crate) fn set(&mut self, el: Element) {
        if let Some(z) = self.z_of(el.id) {
            self.touched.push(el.id);
            self.elements[z] = el;
        }
    }

    /// Replaces an element after checking its own invariants.
    pub fn update(&mut self, el: Element) -> Result<(), SceneError> {
        let id = el.id;
        if self.z_of(id).is_none() {
            return Err(SceneError::UnknownElement(id));
        }
        el.validate().map_err(|source| SceneError::InvalidElement { id, source })?;
        self.check_references(&el).map_err(|reason| SceneError::BadReference { id, reason })?;
        let changed = vec![el];
        self.check_spots(&changed)?;
        self.commit(changed);
        self.refresh_derived();
        Ok(())
    }

    /// Maze spots must stay clear of their walls whenever the spot or its
    /// labyrinth is part of an edit. Both are judged at their edited
    /// positions.
    pub(crate) fn check_spots(&self, changed: &[Element]) -> Result<(), SceneError> {
        let current = |id: ElementId| changed.iter().find(|c| c.id == id).or_else(|| self.element(id));
        for e in &self.elements {
            let e = current(e.id).unwrap_or(e);
            let ElementKind::Spot(s) = &e.kind else { continue };
            let SpotMode::Maze(lab) = s.mode else { continue };
            if !changed.iter().any(|c| c.id == e.id || c.id == lab) {
                continue;
            }
            if let Some(ElementKind::Labyrinth(l)) = current(lab).map(|l| &l.kind) {
                if !spot_is_clear(l, s.center, s.r) {
                    return Err(SceneError::SpotCollision(e.id));
                }
            }
        }
        Ok(())
    }

    /// Stores edited elements without validation. Path spots are projected
    /// back onto their path whenever they or their path moved.
    pub(crate) fn commit(&mut self, changed: Vec<Element>) {
        let mut paths: Vec<ElementId> = Vec::new();
        for e in &changed {
            let host = match &e.kind {
                ElementKind::Path(_) => Some(e.id),
                ElementKind::Spot(s) => match s.mode {
                    SpotMode::Path(p) => Some(p),
                    _ => None,
                },
                _ => None,
            };
            if let Some(h) = host.filter(|h| !paths.contains(h)) {
                paths.push(h);
            }
        }
        for e in changed {
            self.set(e);
        }
        for p in paths {
            self.reproject_path_spots(p);
        }
    }

    /// Translates `ids` and their followers, refusing moves that would push a
    /// maze spot into a wall.
    fn translate(&mut self, ids: &[ElementId], d: Vector) -> Result<(), SceneError> {
        let mut all = ids.to_vec();
        all.extend(self.followers(ids));
        let moved: Vec<Element> = all.iter().filter_map(|&m| self.element(m)).map(|e| elements::move_by(e, d)).collect();
        self.check_spots(&moved)?;
        self.commit(moved);
        self.refresh_derived();
        Ok(())
    }

    /// Moves an element to the top, keeping everyone else's relative order.
    pub fn raise(&mut self, id: ElementId) {
        if let Some(z) = self.z_of(id) {
            let el = self.elements.remove(z);
            self.elements.push(el);
        }
    }

    /// Moves all members of a group to the top, keeping their relative order.
    pub fn raise_group(&mut self, gid: GroupId) {
        let Some(g) = self.group(gid) else { return };
        let members = g.members.clone();
        let (mut top, rest): (Vec<Element>, Vec<Element>) =
            std::mem::take(&mut self.elements).into_iter().partition(|e| members.contains(&e.id));
        self.elements = rest;
        self.elements.append(&mut top);
    }

    pub fn add_group(&mut self, members: Vec<ElementId>, margin: f64) -> Result<GroupId, SceneError> {
        if members.is_empty() {
            return Err(SceneError::EmptyGroup);
        }
        for &m in &members {
            if self.element(m).is_none() {
                return Err(SceneError::UnknownElement(m));
            }
            if self.group_of(m).is_some() || members.iter().filter(|&&x| x == m).count() > 1 {
                return Err(SceneError::AlreadyGrouped(m));
            }
        }
        let id = GroupId(self.next_group);
        self.next_group += 1;
        let mut g = Group { id, members, margin, frame: Rect::around(Point::ORIGIN) };
        g.frame = self.recompute_frame(&g);
        self.groups.push(g);
        Ok(id)
    }

    /// Union of the member boxes grown by the margin, computed from scratch.
    pub fn recompute_frame(&self, g: &Group) -> Rect {
        g.members
            .iter()
            .filter_map(|&m| self.element(m))
            .map(|e| e.bbox())
            .reduce(|a, b| a.union(&b))
            .unwrap_or_else(|| Rect::around(Point::ORIGIN))
            .expand(g.margin)
    }

    /// Translates every member (and the frame with them) by `d`.
    pub fn group_move(&mut self, gid: GroupId, d: Vector) -> Result<(), SceneError> {
        let members = self.group(gid).ok_or(SceneError::UnknownGroup(gid))?.members.clone();
        self.translate(&members, d)
    }

    fn plot_rect(&self, id: ElementId) -> Option<Rect> {
        match &self.element(id)?.kind {
            ElementKind::PlotArea(a) => Some(a.rect),
            _ => None,
        }
    }

    /// Re-derives scale rectangles from their areas and group frames from
    /// their members.
    pub fn refresh_derived(&mut self) {
        let areas: BTreeMap<ElementId, Rect> = self
            .elements
            .iter()
            .filter_map(|e| match &e.kind {
                ElementKind::PlotArea(a) => Some((e.id, a.rect)),
                _ => None,
            })
            .collect();
        for e in &mut self.elements {
            if let ElementKind::Scale(s) = &mut e.kind {
                if let Some(area) = areas.get(&s.attached_to) {
                    let r = scale_rect(area, s.edge, s.offset);
                    if r != s.rect {
                        s.rect = r;
                        self.touched.push(e.id);
                    }
                }
            }
        }
        for i in 0..self.groups.len() {
            let frame = self.recompute_frame(&self.groups[i]);
            self.groups[i].frame = frame;
        }
    }

    /// Moves spots bound to `path` onto its nearest point.
    pub(crate) fn reproject_path_spots(&mut self, path: ElementId) {
        let Some(ElementKind::Path(p)) = self.element(path).map(|e| &e.kind) else { return };
        let pts = p.pts.clone();
        let mut moved = Vec::new();
        for e in &mut self.elements {
            if let ElementKind::Spot(s) = &mut e.kind {
                if s.mode == SpotMode::Path(path) {
                    s.center = project_to_polyline(s.center, &pts).foot;
                    moved.push(e.id);
                }
            }
        }
        self.touched.extend(moved);
    }

    fn labyrinth_clear_for(&self, lab: ElementId, spot: &elements::SpotEl) -> bool {
        match self.element(lab).map(|e| &e.kind) {
            Some(ElementKind::Labyrinth(l)) => spot_is_clear(l, spot.center, spot.r),
            _ => false,
        }
    }

    fn check_references(&self, el: &Element) -> Result<(), String> {
        let kind_of = |id: ElementId| self.element(id).map(|e| e.kind.name());
        match &el.kind {
            ElementKind::Comment(c) => {
                if let Some(t) = c.attached_to {
                    if kind_of(t).is_none() || t == el.id {
                        return Err(format!("comment attached to missing element {t}"));
                    }
                }
            }
            ElementKind::Scale(s) => {
                if kind_of(s.attached_to) != Some("plot_area") {
                    return Err(format!("scale attached to {} which is not a plot area", s.attached_to));
                }
            }
            ElementKind::Spot(s) => match s.mode {
                SpotMode::Free => {}
                SpotMode::Path(p) if kind_of(p) != Some("path") => {
                    return Err(format!("spot bound to {p} which is not a path"))
                }
                SpotMode::Maze(l) if kind_of(l) != Some("labyrinth") => {
                    return Err(format!("spot bound to {l} which is not a labyrinth"))
                }
                _ => {}
            },
            _ => {}
        }
        Ok(())
    }

    /// Records the geometry of every element under `name`, replacing any
    /// view of that name.
    pub fn capture_view(&mut self, name: &str) {
        let geometry = self.elements.iter().map(|e| (e.id, Geometry::of(&e.kind))).collect();
        self.views.insert(name.to_string(), View { geometry });
    }

    /// Restores recorded geometry for elements that still exist. Everything
    /// that is not geometry (texts, functions, bindings) is left alone.
    pub fn apply_view(&mut self, name: &str) -> Result<(), SceneError> {
        let view = self.views.get(name).ok_or_else(|| SceneError::UnknownView(name.to_string()))?.clone();
        for (id, geom) in &view.geometry {
            if let Some(z) = self.z_of(*id) {
                let mut el = self.elements[z].clone();
                if geom.restore(&mut el.kind) {
                    self.set(el);
                }
            }
        }
        self.refresh_derived();
        Ok(())
    }

    pub fn remove_view(&mut self, name: &str) -> Option<View> {
        self.views.remove(name)
    }

    /// Every broken invariant, in a stable order.
    pub fn violations(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let el_v = |id: ElementId, message: String| Violation { element: Some(id), group: None, message };
        let mut seen = std::collections::BTreeSet::new();
        for e in &self.elements {
            if !seen.insert(e.id) {
                out.push(el_v(e.id, "duplicate id".into()));
            }
            if let Err(err) = e.validate() {
                out.push(el_v(e.id, err.to_string()));
            }
            if let Err(reason) = self.check_references(e) {
                out.push(el_v(e.id, reason));
            }
            match &e.kind {
                ElementKind::Scale(s) => {
                    if let Some(area) = self.plot_rect(s.attached_to) {
                        if scale_rect(&area, s.edge, s.offset) != s.rect {
                            out.push(el_v(e.id, "scale rect does not match its plot area".into()));
                        }
                    }
                }
                ElementKind::Spot(s) => match s.mode {
                    SpotMode::Maze(l) => {
                        if !self.labyrinth_clear_for(l, s) && self.element(l).is_some() {
                            out.push(el_v(e.id, "spot overlaps a labyrinth wall".into()));
                        }
                    }
                    SpotMode::Path(p) => {
                        if let Some(ElementKind::Path(path)) = self.element(p).map(|x| &x.kind) {
                            let foot = project_to_polyline(s.center, &path.pts).foot;
                            if foot.dist(s.center) > 1e-9 {
                                out.push(el_v(e.id, "spot is off its path".into()));
                            }
                        }
                    }
                    SpotMode::Free => {}
                },
                _ => {}
            }
        }
        let mut grouped = std::collections::BTreeSet::new();
        let mut gids = std::collections::BTreeSet::new();
        for g in &self.groups {
            let gv = |message: String| Violation { element: None, group: Some(g.id), message };
            if !gids.insert(g.id) {
                out.push(gv("duplicate group id".into()));
            }
            if g.members.is_empty() {
                out.push(gv("group has no members".into()));
            }
            if !(g.margin.is_finite() && g.margin >= 0.0) {
                out.push(gv("margin must be finite and non-negative".into()));
            }
            for &m in &g.members {
                if self.element(m).is_none() {
                    out.push(gv(format!("member {m} does not exist")));
                }
                if !grouped.insert(m) {
                    out.push(gv(format!("member {m} belongs to more than one group")));
                }
            }
            if self.recompute_frame(g) != g.frame {
                out.push(gv("frame does not wrap its members".into()));
            }
        }
        if !self.config.cover_params.is_valid() {
            out.push(Violation { element: None, group: None, message: "cover parameters must be positive".into() });
        }
        out
    }

    /// Translates a single element by `d` together with the comments attached
    /// to it. Used by programmatic edits; pointer drags go through the engine.
    pub fn move_element(&mut self, id: ElementId, d: Vector) -> Result<(), SceneError> {
        self.element(id).ok_or(SceneError::UnknownElement(id))?;
        self.translate(&[id], d)
    }

    /// Elements that translate along with `ids` without being listed: their
    /// attached comments and the spots bound to them. The result excludes
    /// `ids` themselves and has no repeats.
    pub fn followers(&self, ids: &[ElementId]) -> Vec<ElementId> {
        let mut out: Vec<ElementId> = Vec::new();
        let push = |x: ElementId, out: &mut Vec<ElementId>| {
            if !ids.contains(&x) && !out.contains(&x) {
                out.push(x);
            }
        };
        for &id in ids {
            for c in self.attached_comments(id) {
                push(c, &mut out);
            }
            for e in &self.elements {
                if let ElementKind::Spot(s) = &e.kind {
                    if matches!(s.mode, SpotMode::Path(h) | SpotMode::Maze(h) if h == id) {
                        push(e.id, &mut out);
                        for c in self.attached_comments(e.id) {
                            push(c, &mut out);
                        }
                    }
                }
            }
        }
        out
    }

    /// Comments that follow `id` when it translates, including those attached
    /// to the scales of a plot area.
    pub fn attached_comments(&self, id: ElementId) -> Vec<ElementId> {
        let mut anchors = vec![id];
        if matches!(self.element(id).map(|e| &e.kind), Some(ElementKind::PlotArea(_))) {
            anchors.extend(
                self.elements
                    .iter()
                    .filter(|e| matches!(&e.kind, ElementKind::Scale(s) if s.attached_to == id))
                    .map(|e| e.id),
            );
        }
        self.elements
            .iter()
            .filter(|e| matches!(&e.kind, ElementKind::Comment(c) if c.attached_to.is_some_and(|t| anchors.contains(&t))))
            .map(|e| e.id)
            .collect()
    }
}

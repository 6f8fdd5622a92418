//! Pointer-event state machine. Press resolves a grab, move applies it,
//! release ends it. This is the only path by which pointer input mutates a
//! scene.
//!
//! Button mapping: the left button moves, resizes and reconfigures through
//! whichever cover node was hit; the right button rotates any rotatable
//! element about the centre of its bounding box at press time.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::apps::labyrinth::constrained_spot_move;
use crate::cover::{build_cover, resolve_hit, Cover, NodeAction};
use crate::elements::{
    self, drag_divider, move_by, project_spot, reconfigure_vertex, resize_border, rotate_to, EditError, Element,
    ElementId, ElementKind, SpotMode,
};
use crate::geometry::{wrap_angle, Point, Vector};
use crate::scene::{GroupId, Scene};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Button {
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PointerEvent {
    Press { button: Button, p: Point },
    Move { p: Point },
    Release,
}

/// Notifications for the application layer.
#[derive(Debug, Clone, PartialEq)]
pub enum Signal {
    ControlPressed(ElementId),
    ControlClicked(ElementId),
    /// A drag step was refused and the element kept its last valid geometry.
    Rejected { id: ElementId, reason: EditError },
}

/// What a press landed on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Hit {
    Node { id: ElementId, node: usize, action: NodeAction },
    ControlInterior(ElementId),
    Frame(GroupId),
}

#[derive(Debug, Clone, PartialEq)]
pub enum DragMode {
    /// Rigid translation of the grabbed element and its followers, applied
    /// from their press-time geometry.
    Translate { origin: Vec<Element> },
    GroupTranslate { group: GroupId, origin: Vec<Element> },
    Maze { offset: Vector },
    Path,
    Resize { border_id: usize },
    Vertex { index: usize },
    Divider { index: usize },
    Rotate { pivot: Point, last_angle: f64 },
}

/// The active grab, alive from press to release.
#[derive(Debug, Clone, PartialEq)]
pub struct DragState {
    pub element: Option<ElementId>,
    pub node: Option<usize>,
    pub button: Button,
    pub press_point: Point,
    pub grab_offset: Vector,
    pub mode: DragMode,
    pub last_valid: Option<Element>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("press while the button is already down")]
    DoublePress,
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("event {index}: {source}")]
pub struct ReplayError {
    pub index: usize,
    pub source: EngineError,
}

pub struct Engine {
    scene: Scene,
    drag: Option<DragState>,
    button_down: bool,
    pending_control: Option<ElementId>,
    cursor: Point,
    covers: HashMap<ElementId, Cover>,
}

impl Engine {
    pub fn new(mut scene: Scene) -> Self {
        scene.take_touched();
        Engine {
            scene,
            drag: None,
            button_down: false,
            pending_control: None,
            cursor: Point::ORIGIN,
            covers: HashMap::new(),
        }
    }

    pub fn scene(&self) -> &Scene {
        &self.scene
    }

    /// Direct access for programmatic edits; covers are refreshed lazily
    /// from what the scene reports as changed.
    pub fn scene_mut(&mut self) -> &mut Scene {
        &mut self.scene
    }

    pub fn into_scene(self) -> Scene {
        self.scene
    }

    pub fn drag(&self) -> Option<&DragState> {
        self.drag.as_ref()
    }

    fn sync_covers(&mut self) {
        for id in self.scene.take_touched() {
            self.covers.remove(&id);
        }
    }

    fn cover_of(&mut self, z: usize) -> &Cover {
        let el = &self.scene.elements()[z];
        let params = self.scene.config.cover_params;
        self.covers.entry(el.id).or_insert_with(|| build_cover(el, &params))
    }

    /// Resolves what lies under `p`: elements top-down, each group frame
    /// sitting just below its lowest member.
    pub fn pick(&mut self, p: Point) -> Option<Hit> {
        self.sync_covers();
        let n = self.scene.len();
        let mut frame_level: Vec<(usize, GroupId)> = self
            .scene
            .groups()
            .iter()
            .filter(|g| g.frame.contains(p))
            .filter_map(|g| {
                g.members.iter().filter_map(|&m| self.scene.z_of(m)).min().map(|z| (z, g.id))
            })
            .collect();
        frame_level.sort_by(|a, b| b.cmp(a));
        let mut frames = frame_level.into_iter().peekable();
        for z in (0..n).rev() {
            let hit = {
                let cover = self.cover_of(z);
                resolve_hit(cover, p).map(|k| (k, cover.nodes[k].action))
            };
            let el = &self.scene.elements()[z];
            match hit {
                Some((_, NodeAction::Transparent)) => {}
                Some((node, action)) => return Some(Hit::Node { id: el.id, node, action }),
                None => {
                    if let ElementKind::Control(c) = &el.kind {
                        if c.rect.contains(p) {
                            return Some(Hit::ControlInterior(el.id));
                        }
                    }
                }
            }
            if let Some(&(fz, g)) = frames.peek() {
                if fz == z {
                    return Some(Hit::Frame(g));
                }
            }
            while frames.peek().is_some_and(|&(fz, _)| fz >= z) {
                frames.next();
            }
        }
        None
    }

    pub fn handle(&mut self, ev: PointerEvent) -> Result<Option<Signal>, EngineError> {
        match ev {
            PointerEvent::Press { button, p } => self.on_press(button, p),
            PointerEvent::Move { p } => Ok(self.on_move(p)),
            PointerEvent::Release => Ok(self.on_release()),
        }
    }

    pub fn on_press(&mut self, button: Button, p: Point) -> Result<Option<Signal>, EngineError> {
        if self.button_down {
            return Err(EngineError::DoublePress);
        }
        self.button_down = true;
        self.cursor = p;
        let Some(hit) = self.pick(p) else { return Ok(None) };
        match (button, hit) {
            (Button::Left, Hit::ControlInterior(id)) => {
                self.pending_control = Some(id);
                Ok(Some(Signal::ControlPressed(id)))
            }
            (Button::Right, Hit::ControlInterior(_)) => Ok(None),
            (Button::Left, Hit::Frame(group)) => {
                let members = self.scene.group(group).map(|g| g.members.clone()).unwrap_or_default();
                let origin = self.followers(&members);
                self.drag = Some(DragState {
                    element: None,
                    node: None,
                    button,
                    press_point: p,
                    grab_offset: Point::ORIGIN,
                    mode: DragMode::GroupTranslate { group, origin },
                    last_valid: None,
                });
                if self.scene.config.raise_on_grab {
                    self.scene.raise_group(group);
                }
                Ok(None)
            }
            (Button::Right, Hit::Frame(_)) => Ok(None),
            (Button::Left, Hit::Node { id, node, action }) => {
                let el = self.scene.element(id).expect("picked element exists").clone();
                let mode = match action {
                    NodeAction::Move => match &el.kind {
                        ElementKind::Spot(s) if matches!(s.mode, SpotMode::Maze(_)) => {
                            DragMode::Maze { offset: s.center - p }
                        }
                        ElementKind::Spot(s) if matches!(s.mode, SpotMode::Path(_)) => DragMode::Path,
                        _ => DragMode::Translate { origin: self.followers(&[id]) },
                    },
                    NodeAction::PathConstrained => DragMode::Path,
                    NodeAction::ResizeBorder { border_id } => DragMode::Resize { border_id },
                    NodeAction::Vertex { index } => DragMode::Vertex { index },
                    NodeAction::Divider { index } => DragMode::Divider { index },
                    NodeAction::Transparent => unreachable!("pick skips transparent nodes"),
                };
                self.start_element_drag(el, node, button, p, mode);
                Ok(None)
            }
            (Button::Right, Hit::Node { id, node, .. }) => {
                let el = self.scene.element(id).expect("picked element exists").clone();
                if !el.rotatable || !el.kind.supports_rotation() {
                    return Ok(None);
                }
                let pivot = el.bbox().center();
                let last_angle = p.angle_from(pivot);
                self.start_element_drag(el, node, button, p, DragMode::Rotate { pivot, last_angle });
                Ok(None)
            }
        }
    }

    fn start_element_drag(&mut self, el: Element, node: usize, button: Button, p: Point, mode: DragMode) {
        let id = el.id;
        self.drag = Some(DragState {
            element: Some(id),
            node: Some(node),
            button,
            press_point: p,
            grab_offset: p - el.reference_point(),
            mode,
            last_valid: Some(el),
        });
        if self.scene.config.raise_on_grab {
            self.scene.raise(id);
        }
    }

    /// Press-time snapshots of `ids` plus everything that follows them.
    fn followers(&self, ids: &[ElementId]) -> Vec<Element> {
        let mut out: Vec<ElementId> = ids.to_vec();
        out.extend(self.scene.followers(ids));
        out.iter().filter_map(|&id| self.scene.element(id).cloned()).collect()
    }

    pub fn on_move(&mut self, p: Point) -> Option<Signal> {
        self.cursor = p;
        let mut drag = self.drag.take()?;
        let signal = self.apply_drag(&mut drag, p);
        self.drag = Some(drag);
        self.scene.refresh_derived();
        signal
    }

    fn apply_drag(&mut self, drag: &mut DragState, p: Point) -> Option<Signal> {
        let total = p - drag.press_point;
        if let DragMode::GroupTranslate { origin, .. } = &drag.mode {
            let moved: Vec<Element> = origin.iter().map(|e| move_by(e, total)).collect();
            if self.scene.check_spots(&moved).is_ok() {
                self.scene.commit(moved);
            }
            return None;
        }
        let id = drag.element?;
        let current = self.scene.element(id)?.clone();
        let result: Result<Vec<Element>, EditError> = match &mut drag.mode {
            DragMode::Translate { origin } => {
                let primary = move_by(&origin[0], total);
                let shift = if matches!(primary.kind, ElementKind::Scale(_)) {
                    primary.reference_point() - origin[0].reference_point()
                } else {
                    total
                };
                let mut out = vec![primary];
                out.extend(origin[1..].iter().map(|e| move_by(e, shift)));
                Ok(out)
            }
            DragMode::Maze { offset } => match (&current.kind, self.maze_of(&current)) {
                (ElementKind::Spot(s), Some(lab)) => {
                    let to = constrained_spot_move(&lab, s, p + *offset);
                    Ok(self.with_followers(&current, to - s.center))
                }
                _ => Ok(vec![move_by(&current, p + drag.grab_offset - current.reference_point())]),
            },
            DragMode::Path => match &current.kind {
                ElementKind::Spot(s) => match s.mode {
                    SpotMode::Path(path) => match self.scene.element(path).map(|e| &e.kind) {
                        Some(ElementKind::Path(pe)) => {
                            let foot = project_spot(pe, p);
                            Ok(self.with_followers(&current, foot - s.center))
                        }
                        _ => Ok(vec![current.clone()]),
                    },
                    _ => Ok(vec![current.clone()]),
                },
                _ => Ok(vec![current.clone()]),
            },
            DragMode::Resize { border_id } => resize_border(&current, *border_id, p).map(|e| vec![e]),
            DragMode::Vertex { index } => reconfigure_vertex(&current, *index, p).map(|e| vec![e]),
            DragMode::Divider { index } => drag_divider(&current, *index, p).map(|e| vec![e]),
            DragMode::Rotate { pivot, last_angle } => {
                if p == *pivot {
                    return None;
                }
                let angle = p.angle_from(*pivot);
                let dtheta = wrap_angle(angle - *last_angle);
                *last_angle = angle;
                rotate_to(&current, *pivot, dtheta).map(|e| vec![e])
            }
            DragMode::GroupTranslate { .. } => unreachable!("handled above"),
        };
        match result {
            Ok(changed) => {
                if self.scene.check_spots(&changed).is_err() {
                    return Some(Signal::Rejected { id, reason: EditError::SpotCollision });
                }
                drag.last_valid = Some(changed[0].clone());
                self.scene.commit(changed);
                None
            }
            Err(reason) => Some(Signal::Rejected { id, reason }),
        }
    }

    /// The element moved by `d` together with its followers.
    fn with_followers(&self, el: &Element, d: Vector) -> Vec<Element> {
        let mut out = vec![move_by(el, d)];
        for c in self.scene.followers(&[el.id]) {
            if let Some(ce) = self.scene.element(c) {
                out.push(move_by(ce, d));
            }
        }
        out
    }

    fn maze_of(&self, spot: &Element) -> Option<elements::LabyrinthEl> {
        let ElementKind::Spot(s) = &spot.kind else { return None };
        let SpotMode::Maze(lab) = s.mode else { return None };
        match &self.scene.element(lab)?.kind {
            ElementKind::Labyrinth(l) => Some(l.clone()),
            _ => None,
        }
    }

    pub fn on_release(&mut self) -> Option<Signal> {
        self.button_down = false;
        self.drag = None;
        let id = self.pending_control.take()?;
        match self.scene.element(id).map(|e| &e.kind) {
            Some(ElementKind::Control(c)) if c.rect.contains(self.cursor) => Some(Signal::ControlClicked(id)),
            _ => None,
        }
    }

    /// Feeds a whole event sequence, collecting signals.
    pub fn run(&mut self, events: &[PointerEvent]) -> Result<Vec<Signal>, ReplayError> {
        let mut signals = Vec::new();
        for (index, ev) in events.iter().enumerate() {
            if let Some(s) = self.handle(*ev).map_err(|source| ReplayError { index, source })? {
                signals.push(s);
            }
        }
        Ok(signals)
    }
}

/// Folds the events over the scene. A pure function of its inputs.
pub fn replay(scene: Scene, events: &[PointerEvent]) -> Result<Scene, ReplayError> {
    let mut engine = Engine::new(scene);
    engine.run(events)?;
    Ok(engine.into_scene())
}

impl fmt::Display for PointerEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PointerEvent::Press { button, p } => {
                let b = match button {
                    Button::Left => 'L',
                    Button::Right => 'R',
                };
                write!(f, "P {b} {} {}", p.x, p.y)
            }
            PointerEvent::Move { p } => write!(f, "M {} {}", p.x, p.y),
            PointerEvent::Release => write!(f, "R"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct EventParseError {
    pub line: usize,
    pub message: String,
}

impl FromStr for PointerEvent {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(' ').collect();
        let num = |t: &str| -> Result<f64, String> {
            let v: f64 = t.parse().map_err(|_| format!("bad coordinate {t:?}"))?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(format!("non-finite coordinate {t:?}"))
            }
        };
        match parts.as_slice() {
            ["P", b, x, y] => {
                let button = match *b {
                    "L" => Button::Left,
                    "R" => Button::Right,
                    other => return Err(format!("unknown button {other:?}")),
                };
                Ok(PointerEvent::Press { button, p: Point::new(num(x)?, num(y)?) })
            }
            ["M", x, y] => Ok(PointerEvent::Move { p: Point::new(num(x)?, num(y)?) }),
            ["R"] => Ok(PointerEvent::Release),
            _ => Err(format!("unrecognised event {s:?}")),
        }
    }
}

/// Parses an event log: one event per line, `#` comment lines and blank
/// lines ignored.
pub fn parse_events(text: &str) -> Result<Vec<PointerEvent>, EventParseError> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .map(|(i, l)| l.parse().map_err(|message| EventParseError { line: i + 1, message }))
        .collect()
}

pub fn format_events(events: &[PointerEvent]) -> String {
    let mut out = String::new();
    for e in events {
        out.push_str(&e.to_string());
        out.push('\n');
    }
    out
}

//! Spot in a labyrinth or on a path.

use crate::elements::{ElementId, ElementKind, LabyrinthEl, PathEl, SpotEl, SpotMode, Wall};
use crate::geometry::{dist_to_segment, segment_segment_dist, Point};
use crate::scene::{Scene, SceneError};

/// Precision of the collision search along a drag.
pub const SPOT_STEP_TOLERANCE: f64 = 0.1;

/// Smallest allowed distance between a spot centre and a wall's centre line.
pub fn clearance(lab: &LabyrinthEl, r: f64) -> f64 {
    r + lab.thickness * 0.5
}

/// Rounding allowance when a spot and its labyrinth are moved rigidly
/// together; far below the 0.1 px bisection tolerance.
pub const CLEARANCE_SLACK: f64 = 1e-9;

pub fn spot_is_clear(lab: &LabyrinthEl, center: Point, r: f64) -> bool {
    spot_margin(lab, center, r) >= -CLEARANCE_SLACK
}

/// Distance from `center` to the nearest wall, minus the required clearance.
pub fn spot_margin(lab: &LabyrinthEl, center: Point, r: f64) -> f64 {
    let need = clearance(lab, r);
    lab.walls
        .iter()
        .map(|w| dist_to_segment(center, w.a, w.b) - need)
        .fold(f64::INFINITY, f64::min)
}

fn sweep_is_clear(lab: &LabyrinthEl, from: Point, to: Point, need: f64) -> bool {
    lab.walls.iter().all(|w| segment_segment_dist(from, to, w.a, w.b) >= need)
}

/// Farthest point on the straight move from the spot's centre towards
/// `target` that the spot can reach without touching a wall. The search
/// bisects to [`SPOT_STEP_TOLERANCE`] and only ever returns positions it has
/// checked to be clear.
pub fn constrained_spot_move(lab: &LabyrinthEl, spot: &SpotEl, target: Point) -> Point {
    let from = spot.center;
    let need = clearance(lab, spot.r);
    if target == from || !spot_is_clear(lab, from, spot.r) {
        return from;
    }
    if sweep_is_clear(lab, from, target, need) {
        return target;
    }
    let len = from.dist(target);
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    while (hi - lo) * len > SPOT_STEP_TOLERANCE {
        let mid = 0.5 * (lo + hi);
        if sweep_is_clear(lab, from, from.lerp(target, mid), need) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if lo == 0.0 {
        from
    } else {
        from.lerp(target, lo)
    }
}

/// Adds a labyrinth, a spot inside it, and returns their ids.
pub fn add_maze(
    scene: &mut Scene,
    walls: Vec<Wall>,
    thickness: f64,
    spot_center: Point,
    spot_r: f64,
) -> Result<(ElementId, ElementId), SceneError> {
    let lab = scene.add(ElementKind::Labyrinth(LabyrinthEl { walls, thickness }))?;
    let spot = scene.add_with(
        ElementKind::Spot(SpotEl { center: spot_center, r: spot_r, mode: SpotMode::Maze(lab) }),
        false,
        serde_json::Value::Null,
    )?;
    Ok((lab, spot))
}

/// Adds a path and a spot bound to it, placed at the path's nearest point to
/// `near`.
pub fn add_path_spot(
    scene: &mut Scene,
    pts: Vec<Point>,
    near: Point,
    spot_r: f64,
) -> Result<(ElementId, ElementId), SceneError> {
    let path = PathEl { pts };
    let center = crate::elements::project_spot(&path, near);
    let path_id = scene.add(ElementKind::Path(path))?;
    let spot = scene.add_with(
        ElementKind::Spot(SpotEl { center, r: spot_r, mode: SpotMode::Path(path_id) }),
        false,
        serde_json::Value::Null,
    )?;
    Ok((path_id, spot))
}

/// Deletes one wall; the next spot move already sees the new layout.
pub fn remove_wall(scene: &mut Scene, lab: ElementId, wall: usize) -> Result<(), SceneError> {
    let mut el = scene.element(lab).ok_or(SceneError::UnknownElement(lab))?.clone();
    if let ElementKind::Labyrinth(l) = &mut el.kind {
        if wall < l.walls.len() {
            l.walls.remove(wall);
        }
    }
    scene.update(el)
}

//! Random scenes and event logs checked event by event against the
//! independent oracles from `udscene::testkit`.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use udscene::apps::labyrinth::{clearance, SPOT_STEP_TOLERANCE};
use udscene::cover::{build_cover, resolve_hit};
use udscene::elements::{ElementKind, SpotMode, MIN_SHARE_DEG, SHARE_SUM_TOLERANCE};
use udscene::testkit::oracle::{polyline_distance, segment_distance, ElementOracle};
use udscene::testkit::{path_spot, random_events, random_scene, SceneGen};
use udscene::{Engine, PointerEvent, Scene};

/// Distance a path spot may sit off its path.
pub const PATH_TOLERANCE: f64 = 1e-9;

/// One oracle disagreement.
#[derive(Debug, Clone, PartialEq)]
pub struct Failure {
    /// Index of the event after (or, for hit checks, before) which the
    /// check failed.
    pub event: usize,
    pub check: &'static str,
    pub message: String,
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "event {}: {} check: {}", self.event, self.check, self.message)
    }
}

/// Counters for the summary line.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Stats {
    pub events: u64,
    pub hit_checks: u64,
}

impl std::ops::Add for Stats {
    type Output = Stats;
    fn add(self, o: Stats) -> Stats {
        Stats { events: self.events + o.events, hit_checks: self.hit_checks + o.hit_checks }
    }
}

fn fail(event: usize, check: &'static str, message: String) -> Result<(), Failure> {
    Err(Failure { event, check, message })
}

/// Every element's cover must resolve `p` as the exact oracle does, except
/// where the oracle flags the point as within the flattening band.
fn check_hits(scene: &Scene, p: udscene::Point, event: usize, stats: &mut Stats) -> Result<(), Failure> {
    let params = scene.config.cover_params;
    for el in scene.elements() {
        let cover = build_cover(el, &params);
        let want = ElementOracle::new(&cover, el).hit(p);
        let got = resolve_hit(&cover, p);
        stats.hit_checks += 1;
        if got != want.node && !want.ambiguous {
            return fail(event, "hit", format!("element {} at {p:?}: cover gives {got:?}, oracle {:?}", el.id, want.node));
        }
    }
    Ok(())
}

/// Scene-wide invariants after one event.
fn check_state(scene: &Scene, event: usize) -> Result<(), Failure> {
    for g in scene.groups() {
        let fresh = scene.recompute_frame(g);
        if fresh != g.frame {
            return fail(event, "frame", format!("group {}: stored {:?}, recomputed {fresh:?}", g.id.0, g.frame));
        }
    }
    for el in scene.elements() {
        match &el.kind {
            ElementKind::Pie(p) => {
                let sum: f64 = p.shares.iter().sum();
                if (sum - 360.0).abs() > SHARE_SUM_TOLERANCE {
                    return fail(event, "divider", format!("element {}: shares sum to {sum}", el.id));
                }
                if let Some(s) = p.shares.iter().find(|&&s| s < MIN_SHARE_DEG) {
                    return fail(event, "divider", format!("element {}: share {s} below minimum", el.id));
                }
            }
            ElementKind::Spot(s) => match s.mode {
                SpotMode::Maze(lab) => {
                    let Some(ElementKind::Labyrinth(l)) = scene.element(lab).map(|e| &e.kind) else { continue };
                    let need = clearance(l, s.r);
                    let d = l.walls.iter().map(|w| segment_distance(s.center, w.a, w.b)).fold(f64::INFINITY, f64::min);
                    if d < need - SPOT_STEP_TOLERANCE {
                        return fail(event, "spot", format!("element {}: {d} from a wall, needs {need}", el.id));
                    }
                }
                SpotMode::Path(_) => {
                    if let Some((s, pts)) = path_spot(scene, el) {
                        let d = polyline_distance(s.center, &pts);
                        if d > PATH_TOLERANCE {
                            return fail(event, "spot", format!("element {}: {d} off its path", el.id));
                        }
                    }
                }
                SpotMode::Free => {}
            },
            _ => {}
        }
    }
    if let Some(v) = scene.violations().into_iter().next() {
        return fail(event, "invariant", v.to_string());
    }
    Ok(())
}

/// Replays `events` on `scene`, running every check after every event.
pub fn check_log(scene: &Scene, events: &[PointerEvent]) -> Result<Stats, Failure> {
    let mut stats = Stats::default();
    let mut engine = Engine::new(scene.clone());
    for (i, ev) in events.iter().enumerate() {
        if let PointerEvent::Press { p, .. } = ev {
            check_hits(engine.scene(), *p, i, &mut stats)?;
        }
        if let Err(e) = engine.handle(*ev) {
            return Err(Failure { event: i, check: "engine", message: e.to_string() });
        }
        check_state(engine.scene(), i)?;
        stats.events += 1;
    }
    Ok(stats)
}

/// Scene and log for one iteration. Each iteration has its own ChaCha
/// stream so results do not depend on scheduling.
pub fn case(seed: u64, iteration: u64) -> (Scene, Vec<PointerEvent>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(iteration);
    let gen = SceneGen { elements: rng.gen_range(3..12), groups: rng.gen_range(0..3), ..SceneGen::default() };
    let scene = random_scene(&mut rng, &gen);
    let m = rng.gen_range(10..80);
    let events = random_events(&mut rng, &scene, m, &gen.extent);
    (scene, events)
}

pub struct Report {
    pub stats: Stats,
    /// The lowest failing iteration with its case and failure.
    pub failure: Option<(u64, Scene, Vec<PointerEvent>, Failure)>,
}

pub fn run(seed: u64, iterations: u64) -> Report {
    let outcome: Result<Stats, (u64, Scene, Vec<PointerEvent>, Failure)> = (0..iterations)
        .into_par_iter()
        .map(|i| {
            let (scene, events) = case(seed, i);
            check_log(&scene, &events).map_err(|f| (i, scene, events, f))
        })
        .try_reduce(Stats::default, |a, b| Ok(a + b));
    match outcome {
        Ok(stats) => Report { stats, failure: None },
        Err(_) => {
            // try_reduce may stop at any failing iteration; report the first.
            let first = (0..iterations)
                .into_par_iter()
                .find_map_first(|i| {
                    let (scene, events) = case(seed, i);
                    check_log(&scene, &events).err().map(|f| (i, scene, events, f))
                })
                .expect("a failure was seen");
            Report { stats: Stats::default(), failure: Some(first) }
        }
    }
}

/// Splits a log into press-to-release gestures (the last may be open).
fn gestures(events: &[PointerEvent]) -> Vec<Vec<PointerEvent>> {
    let mut out: Vec<Vec<PointerEvent>> = Vec::new();
    for ev in events {
        if matches!(ev, PointerEvent::Press { .. }) || out.is_empty() {
            out.push(Vec::new());
        }
        out.last_mut().expect("pushed above").push(*ev);
    }
    out
}

/// Shrinks a failing log while `fails` keeps holding: first the prefix up to
/// the failing event, then whole gestures removed by bisection, then single
/// moves inside the surviving gestures.
pub fn minimize<F>(scene: &Scene, events: &[PointerEvent], fails: F) -> Vec<PointerEvent>
where
    F: Fn(&Scene, &[PointerEvent]) -> Option<usize>,
{
    let Some(at) = fails(scene, events) else { return events.to_vec() };
    let mut parts = gestures(&events[..=at.min(events.len() - 1)]);
    let flat = |parts: &[Vec<PointerEvent>]| parts.concat();

    let mut chunk = parts.len().div_ceil(2).max(1);
    loop {
        let mut removed = false;
        let mut start = 0;
        while start < parts.len() {
            let end = (start + chunk).min(parts.len());
            let mut trial = parts.clone();
            trial.drain(start..end);
            if !trial.is_empty() && fails(scene, &flat(&trial)).is_some() {
                parts = trial;
                removed = true;
            } else {
                start = end;
            }
        }
        if chunk == 1 && !removed {
            break;
        }
        if !removed {
            chunk = chunk.div_ceil(2);
        }
    }

    for g in 0..parts.len() {
        let mut k = 1;
        while k < parts[g].len() {
            if matches!(parts[g][k], PointerEvent::Move { .. }) {
                let mut trial = parts.clone();
                trial[g].remove(k);
                if fails(scene, &flat(&trial)).is_some() {
                    parts = trial;
                    continue;
                }
            }
            k += 1;
        }
    }
    flat(&parts)
}

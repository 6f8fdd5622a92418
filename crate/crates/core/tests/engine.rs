use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use udscene::apps::labyrinth::add_path_spot;
use udscene::cover::{CoverParams, NodeAction};
use udscene::elements::{CircleEl, ControlEl, ElementKind, PolygonEl, ScaleEl};
use udscene::engine::{format_events, parse_events, DragMode, EngineError, Hit};
use udscene::geometry::{Point, Rect, ShapeGeom};
use udscene::scene::EngineConfig;
use udscene::testkit::{random_events, random_point, random_scene, SceneGen};
use udscene::{replay, save_scene, Button, ElementId, Engine, PointerEvent, Scene, Signal};

fn press(x: f64, y: f64) -> PointerEvent {
    PointerEvent::Press { button: Button::Left, p: Point::new(x, y) }
}

fn press_r(x: f64, y: f64) -> PointerEvent {
    PointerEvent::Press { button: Button::Right, p: Point::new(x, y) }
}

fn mv(x: f64, y: f64) -> PointerEvent {
    PointerEvent::Move { p: Point::new(x, y) }
}

fn square(s: &mut Scene, r: Rect) -> ElementId {
    s.add(ElementKind::Polygon(PolygonEl { geom: ShapeGeom::rect(&r).unwrap() })).unwrap()
}

fn bbox(s: &Scene, id: ElementId) -> Rect {
    s.element(id).unwrap().bbox()
}

#[test]
fn small_grab_targets_reproduce_the_offset_example() {
    // With 2 px vertex circles and 1 px strips, (2,2) is interior on a
    // 10 px square and the grab offset carries over exactly.
    let params = CoverParams { strip_halfwidth: 1.0, vertex_radius: 2.0, frame_margin: 6.0 };
    let mut s = Scene::new(EngineConfig { cover_params: params, raise_on_grab: true });
    let id = square(&mut s, Rect::from_coords(0.0, 0.0, 10.0, 10.0));
    let mut e = Engine::new(s.clone());
    assert!(matches!(e.pick(Point::new(2.0, 2.0)), Some(Hit::Node { action: NodeAction::Move, .. })));
    let out = replay(s, &[press(2.0, 2.0), mv(12.0, 7.0), PointerEvent::Release]).unwrap();
    assert_eq!(bbox(&out, id), Rect::from_coords(10.0, 5.0, 20.0, 15.0));
}

#[test]
fn press_move_release_translates() {
    let mut s = Scene::default();
    let id = square(&mut s, Rect::from_coords(0.0, 0.0, 40.0, 40.0));
    let out = replay(s, &[press(5.0, 5.0), mv(25.0, 5.0), PointerEvent::Release]).unwrap();
    assert_eq!(bbox(&out, id), Rect::from_coords(20.0, 0.0, 60.0, 40.0));
}

#[test]
fn empty_log_is_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let s = random_scene(&mut rng, &SceneGen::default());
    assert_eq!(save_scene(&replay(s.clone(), &[]).unwrap()), save_scene(&s));
}

#[test]
fn quarter_turn_rotation() {
    let mut s = Scene::default();
    let id = s
        .add_with(
            ElementKind::Polygon(PolygonEl { geom: ShapeGeom::rect(&Rect::from_coords(0.0, 0.0, 100.0, 20.0)).unwrap() }),
            true,
            serde_json::Value::Null,
        )
        .unwrap();
    // Pivot is the bbox centre (50,10); angle 0 is +x, angle pi/2 is +y.
    let out = replay(s, &[press_r(90.0, 10.0), mv(50.0, 60.0), PointerEvent::Release]).unwrap();
    let b = bbox(&out, id);
    for (got, want) in [(b.min, Point::new(40.0, -40.0)), (b.max, Point::new(60.0, 60.0))] {
        assert!(got.dist(want) < 1e-12, "{b:?}");
    }
    let ElementKind::Polygon(p) = &out.element(id).unwrap().kind else { unreachable!() };
    // Corner (0,0) sits at angle pi + atan(10/50) from the pivot; a
    // clockwise (screen) quarter turn maps it to (60, -40).
    assert!(p.geom.outer.pieces[0].start().dist(Point::new(60.0, -40.0)) < 1e-12);
}

#[test]
fn right_press_on_control_does_nothing() {
    let mut s = Scene::default();
    s.add(ElementKind::Control(ControlEl { rect: Rect::from_coords(0.0, 0.0, 80.0, 40.0), tag: "7".into() })).unwrap();
    let mut e = Engine::new(s.clone());
    assert_eq!(e.handle(press_r(40.0, 20.0)).unwrap(), None);
    assert!(e.drag().is_none());
    assert_eq!(e.handle(PointerEvent::Release).unwrap(), None);
    assert_eq!(e.scene(), &s);
}

#[test]
fn far_cursor_projects_path_spot_onto_path() {
    let mut s = Scene::default();
    let pts = vec![Point::new(0.0, 0.0), Point::new(100.0, 0.0), Point::new(100.0, 100.0)];
    let (_, spot) = add_path_spot(&mut s, pts, Point::new(50.0, 0.0), 5.0).unwrap();
    let out = replay(s, &[press(50.0, 0.0), mv(500.0, 40.0), PointerEvent::Release]).unwrap();
    let ElementKind::Spot(sp) = &out.element(spot).unwrap().kind else { unreachable!() };
    assert_eq!(sp.center, Point::new(100.0, 40.0));
}

#[test]
fn double_press_names_the_event() {
    let s = Scene::default();
    let err = replay(s, &[press(0.0, 0.0), mv(1.0, 1.0), press(2.0, 2.0)]).unwrap_err();
    assert_eq!(err.index, 2);
    assert_eq!(err.source, EngineError::DoublePress);
}

#[test]
fn frame_grab_moves_whole_group() {
    let mut s = Scene::default();
    let a = square(&mut s, Rect::from_coords(0.0, 0.0, 10.0, 10.0));
    let b = square(&mut s, Rect::from_coords(20.0, 0.0, 30.0, 10.0));
    let g = s.add_group(vec![a, b], 6.0).unwrap();
    assert_eq!(s.group(g).unwrap().frame, Rect::from_coords(-6.0, -6.0, 36.0, 16.0));
    let out = replay(s, &[press(15.0, 12.0), mv(25.0, 22.0), PointerEvent::Release]).unwrap();
    assert_eq!(bbox(&out, a), Rect::from_coords(10.0, 10.0, 20.0, 20.0));
    assert_eq!(bbox(&out, b), Rect::from_coords(30.0, 10.0, 40.0, 20.0));
    assert_eq!(out.group(g).unwrap().frame, Rect::from_coords(4.0, 4.0, 46.0, 26.0));
}

#[test]
fn member_drag_rewraps_frame() {
    let mut s = Scene::default();
    let a = square(&mut s, Rect::from_coords(0.0, 0.0, 40.0, 40.0));
    let b = square(&mut s, Rect::from_coords(60.0, 0.0, 100.0, 40.0));
    let g = s.add_group(vec![a, b], 0.0).unwrap();
    let out = replay(s, &[press(80.0, 20.0), mv(180.0, 20.0), PointerEvent::Release]).unwrap();
    assert_eq!(bbox(&out, a), Rect::from_coords(0.0, 0.0, 40.0, 40.0));
    assert_eq!(out.group(g).unwrap().frame, Rect::from_coords(0.0, 0.0, 200.0, 40.0));
}

#[test]
fn rejected_step_keeps_last_valid_geometry() {
    let mut s = Scene::default();
    let id = square(&mut s, Rect::from_coords(0.0, 0.0, 100.0, 100.0));
    let mut e = Engine::new(s);
    // Vertex (100,100) dragged across the opposite edge would fold the square.
    e.handle(press(100.0, 100.0)).unwrap();
    e.handle(mv(110.0, 110.0)).unwrap();
    let before = e.scene().element(id).unwrap().clone();
    let sig = e.handle(mv(-50.0, 50.0)).unwrap();
    assert!(matches!(sig, Some(Signal::Rejected { .. })), "{sig:?}");
    assert_eq!(e.scene().element(id).unwrap(), &before);
}

#[test]
fn event_log_text_round_trips() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let s = random_scene(&mut rng, &SceneGen::default());
    let evs = random_events(&mut rng, &s, 500, &SceneGen::default().extent);
    let text = format_events(&evs);
    assert!(text.ends_with('\n') && !text.contains("\r") && !text.contains("  "));
    assert_eq!(parse_events(&text).unwrap(), evs);
    assert_eq!(format_events(&parse_events(&text).unwrap()), text);
    assert_eq!(parse_events("P L 1 2\nX\n").unwrap_err().line, 2);
}

#[test]
fn scale_drag_moves_only_along_its_normal() {
    let mut s = Scene::default();
    let area = udscene::apps::analyser::add_plot(
        &mut s,
        Rect::from_coords(100.0, 100.0, 300.0, 250.0),
        udscene::elements::WorldRect::new(-1.0, 1.0, -1.0, 1.0),
        vec![],
    )
    .unwrap();
    let (left, left_el) = s
        .elements()
        .iter()
        .find_map(|e| match &e.kind {
            ElementKind::Scale(sc @ ScaleEl { edge: udscene::elements::ScaleEdge::Left, .. }) => Some((e.id, sc.clone())),
            _ => None,
        })
        .unwrap();
    let c = left_el.rect.center();
    let out = replay(s, &[press(c.x, c.y), mv(c.x - 20.0, c.y + 35.0), PointerEvent::Release]).unwrap();
    let ElementKind::Scale(sc) = &out.element(left).unwrap().kind else { unreachable!() };
    assert_eq!(sc.rect, left_el.rect.translate(Point::new(-20.0, 0.0)));
    assert_eq!(sc.offset, left_el.offset + 20.0);
    assert_eq!(bbox(&out, area), Rect::from_coords(100.0, 100.0, 300.0, 250.0));
}

fn scene_for(seed: u64, n: usize) -> (ChaCha8Rng, Scene) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let s = random_scene(&mut rng, &SceneGen { elements: n, ..SceneGen::default() });
    (rng, s)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// While a Move drag is active the cursor keeps its offset to the
    /// element's reference point.
    #[test]
    fn grab_is_stable(seed in any::<u64>()) {
        let (mut rng, s) = scene_for(seed, 15);
        let mut e = Engine::new(s);
        let extent = SceneGen::default().extent;
        for _ in 0..20 {
            let p = random_point(&mut rng, &extent);
            e.handle(PointerEvent::Press { button: Button::Left, p }).unwrap();
            let translating = e.drag().is_some_and(|d| matches!(d.mode, DragMode::Translate { .. }))
                && e.drag().and_then(|d| d.element).and_then(|id| e.scene().element(id))
                    .is_some_and(|el| !matches!(el.kind, ElementKind::Scale(_)));
            if translating {
                let id = e.drag().unwrap().element.unwrap();
                let offset = p - e.scene().element(id).unwrap().reference_point();
                let mut q = p;
                for _ in 0..10 {
                    q = q + Point::new(rng.gen_range(-50.0..50.0), rng.gen_range(-50.0..50.0));
                    e.handle(PointerEvent::Move { p: q }).unwrap();
                    let now = q - e.scene().element(id).unwrap().reference_point();
                    prop_assert!(now.dist(offset) <= 1e-12, "{:?} vs {:?}", now, offset);
                }
            }
            e.handle(PointerEvent::Release).unwrap();
        }
    }

    /// With raise_on_grab, a grabbed element ends on top and every other
    /// element keeps its relative order.
    #[test]
    fn z_discipline(seed in any::<u64>()) {
        let (mut rng, s) = scene_for(seed, 15);
        let mut e = Engine::new(s);
        let extent = SceneGen::default().extent;
        for _ in 0..30 {
            let before: Vec<ElementId> = e.scene().elements().iter().map(|el| el.id).collect();
            let p = random_point(&mut rng, &extent);
            e.handle(PointerEvent::Press { button: Button::Left, p }).unwrap();
            let after: Vec<ElementId> = e.scene().elements().iter().map(|el| el.id).collect();
            let raised: Vec<ElementId> = match e.drag() {
                Some(d) => match (d.element, &d.mode) {
                    (Some(id), _) => vec![id],
                    (None, DragMode::GroupTranslate { group, .. }) => e.scene().group(*group).unwrap().members.clone(),
                    _ => vec![],
                },
                None => vec![],
            };
            if raised.is_empty() {
                prop_assert_eq!(&before, &after);
            } else {
                let k = raised.len();
                let top = &after[after.len() - k..];
                prop_assert!(raised.iter().all(|id| top.contains(id)));
                let rest_before: Vec<_> = before.iter().filter(|id| !raised.contains(id)).collect();
                let rest_after: Vec<_> = after[..after.len() - k].iter().collect();
                prop_assert_eq!(rest_before, rest_after);
            }
            e.handle(PointerEvent::Release).unwrap();
        }
    }

    /// Moves without a pressed button never change the scene.
    #[test]
    fn hover_never_mutates(seed in any::<u64>()) {
        let (mut rng, s) = scene_for(seed, 15);
        let extent = SceneGen::default().extent;
        let hovers: Vec<PointerEvent> = (0..200).map(|_| PointerEvent::Move { p: random_point(&mut rng, &extent) }).collect();
        let out = replay(s.clone(), &hovers).unwrap();
        prop_assert_eq!(save_scene(&out), save_scene(&s));
    }

    /// After every single event, frames equal a from-scratch recomputation
    /// and the scene reports no violated invariant.
    #[test]
    fn invariants_hold_after_every_event(seed in any::<u64>()) {
        let (mut rng, s) = scene_for(seed, 12);
        let evs = random_events(&mut rng, &s, 150, &SceneGen::default().extent);
        let mut e = Engine::new(s);
        for (i, ev) in evs.iter().enumerate() {
            e.handle(*ev).unwrap();
            for g in e.scene().groups() {
                prop_assert_eq!(g.frame, e.scene().recompute_frame(g), "event {}", i);
            }
            let v = e.scene().violations();
            prop_assert!(v.is_empty(), "event {}: {:?}", i, v);
        }
    }

    /// Replaying the same log twice gives byte-identical documents.
    #[test]
    fn replay_is_deterministic(seed in any::<u64>()) {
        let (mut rng, s) = scene_for(seed, 12);
        let evs = random_events(&mut rng, &s, 200, &SceneGen::default().extent);
        let a = save_scene(&replay(s.clone(), &evs).unwrap());
        let b = save_scene(&replay(s, &evs).unwrap());
        prop_assert_eq!(a, b);
    }
}

#[test]
fn circle_resize_follows_cursor_distance() {
    let mut s = Scene::default();
    let id = s.add(ElementKind::Circle(CircleEl { center: Point::new(100.0, 100.0), r: 30.0 })).unwrap();
    let out = replay(s, &[press(130.0, 100.0), mv(100.0, 150.0), PointerEvent::Release]).unwrap();
    let ElementKind::Circle(c) = &out.element(id).unwrap().kind else { unreachable!() };
    assert_eq!(c.r, 50.0);
    assert_eq!(c.center, Point::new(100.0, 100.0));
}

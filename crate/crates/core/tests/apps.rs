use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use udscene::apps::analyser::{
    add_comment, add_plot, sample_function, screen_to_world, world_to_screen, FunctionDef, PlotBinding,
};
use udscene::apps::calculator::{Calculator, BUTTON_TAGS};
use udscene::apps::labyrinth::{add_maze, constrained_spot_move, remove_wall, SPOT_STEP_TOLERANCE};
use udscene::apps::{eval_expression, format_value};
use udscene::elements::{ElementKind, LabyrinthEl, PlotAreaEl, SpotEl, SpotMode, Wall, WorldRect};
use udscene::engine::{format_events, parse_events};
use udscene::geometry::{Point, Rect};
use udscene::testkit::oracle::{polyline_distance, segment_distance};
use udscene::testkit::{path_spot, random_events, random_point, random_scene, SceneGen};
use udscene::{replay, Button, ElementId, PointerEvent, Scene};

fn tokens(s: &str) -> Vec<String> {
    s.chars().map(|c| c.to_string()).collect()
}

#[test]
fn calculator_adds_through_an_event_log() {
    let mut calc = Calculator::standard();
    let text = format_events(&calc.click_events(&["7", "+", "2", "="]));
    calc.run(&parse_events(&text).unwrap()).unwrap();
    assert_eq!(calc.display(), "9");
}

#[test]
fn calculator_expression_examples() {
    assert_eq!(eval_expression(&tokens("3+4*2")).unwrap(), 11.0);
    assert_eq!(eval_expression(&tokens("(3+4)*2")).unwrap(), 14.0);
    assert_eq!(format_value(eval_expression(&tokens("1/0")).unwrap()), "∞");
}

#[test]
fn click_needs_release_inside_the_button() {
    let mut calc = Calculator::standard();
    let mut evs = calc.click_events(&["7"]);
    evs.insert(1, PointerEvent::Move { p: Point::new(-500.0, -500.0) });
    calc.run(&evs).unwrap();
    assert_eq!(calc.display(), "0");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Identical click sequences give identical results whatever the layout.
    #[test]
    fn calculator_is_layout_independent(seed in any::<u64>(), clicks in prop::collection::vec(0usize..BUTTON_TAGS.len(), 1..25)) {
        let tags: Vec<&str> = clicks.iter().map(|&i| BUTTON_TAGS[i]).chain(["="]).collect();
        let mut reference = Calculator::standard();
        reference.run(&reference.click_events(&tags)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut shuffled = Calculator::random_layout(&mut rng);
        shuffled.run(&shuffled.click_events(&tags)).unwrap();
        prop_assert_eq!(shuffled.display(), reference.display());
        // Without C or = in the middle the display is the whole expression.
        let labels: Vec<&str> = clicks.iter().map(|&i| BUTTON_TAGS[i]).collect();
        if !labels.iter().any(|t| *t == "C" || *t == "=") {
            let expected = eval_expression(&labels).map(format_value).unwrap_or_else(|_| "Error".into());
            prop_assert_eq!(reference.display(), expected);
        }
    }
}

#[test]
fn explicit_square_samples() {
    let s = sample_function(&FunctionDef::explicit("x^2"), &WorldRect::new(0.0, 2.0, -1.0, 5.0), 3).unwrap();
    assert_eq!(s, vec![vec![Point::new(0.0, 0.0), Point::new(1.0, 1.0), Point::new(2.0, 4.0)]]);
}

#[test]
fn parametric_circle_stays_on_unit_circle() {
    let def = FunctionDef::parametric("cos(p)", "sin(p)", 0.0, std::f64::consts::TAU);
    let lines = sample_function(&def, &WorldRect::new(-2.0, 2.0, -2.0, 2.0), 10_000).unwrap();
    let worst = lines.iter().flatten().map(|p| (p.x.hypot(p.y) - 1.0).abs()).fold(0.0, f64::max);
    assert!(worst <= 1e-9, "{worst}");
}

#[test]
fn reciprocal_splits_at_the_pole() {
    // Uniform samples over [-1, 1] only hit x = 0 for an odd count.
    let lines = sample_function(&FunctionDef::explicit("1/x"), &WorldRect::new(-1.0, 1.0, -10.0, 10.0), 11).unwrap();
    assert_eq!(lines.len(), 2);
    assert!(lines.iter().flatten().all(|p| p.y.is_finite()));
}

#[test]
fn world_screen_mapping() {
    let area = PlotAreaEl {
        rect: Rect::from_coords(100.0, 50.0, 400.0, 250.0),
        world: WorldRect::new(-3.0, 5.0, -1.0, 2.0),
        functions: vec![],
    };
    assert_eq!(world_to_screen(&area, Point::new(-3.0, -1.0)), Point::new(100.0, 250.0));
    assert_eq!(world_to_screen(&area, Point::new(1.0, 0.5)), Point::new(250.0, 150.0));
    let mut rng = ChaCha8Rng::seed_from_u64(51);
    let mut worst: f64 = 0.0;
    for _ in 0..10_000 {
        let sp = random_point(&mut rng, &Rect::from_coords(-1000.0, -1000.0, 1000.0, 1000.0));
        worst = worst.max(world_to_screen(&area, screen_to_world(&area, sp)).dist(sp));
    }
    assert!(worst <= 1e-9, "{worst}");
}

fn plot_scene() -> (Scene, ElementId, Vec<ElementId>, [ElementId; 2]) {
    let mut s = Scene::default();
    let area = add_plot(
        &mut s,
        Rect::from_coords(100.0, 100.0, 300.0, 250.0),
        WorldRect::new(-1.0, 1.0, -1.0, 1.0),
        vec![FunctionDef::explicit("sin(x)")],
    )
    .unwrap();
    let c1 = add_comment(&mut s, area, Point::new(110.0, 110.0), "title").unwrap();
    let c2 = add_comment(&mut s, area, Point::new(200.0, 200.0), "note").unwrap();
    let scales = PlotBinding::of(&s, area).unwrap().scales;
    (s, area, scales, [c1, c2])
}

fn corners(s: &Scene, id: ElementId) -> Rect {
    s.element(id).unwrap().bbox()
}

#[test]
fn moving_an_area_carries_its_scales_and_comments() {
    let (s, area, scales, comments) = plot_scene();
    let followers: Vec<ElementId> = scales.iter().chain(&comments).copied().collect();
    let before: Vec<Rect> = followers.iter().map(|&id| corners(&s, id)).collect();
    // Grab the area in a spot no comment covers.
    let out = replay(
        s.clone(),
        &[
            PointerEvent::Press { button: Button::Left, p: Point::new(150.0, 160.0) },
            PointerEvent::Move { p: Point::new(157.0, 160.0) },
            PointerEvent::Release,
        ],
    )
    .unwrap();
    let d = Point::new(7.0, 0.0);
    assert_eq!(corners(&out, area), corners(&s, area).translate(d));
    for (id, b) in followers.iter().zip(before) {
        assert_eq!(corners(&out, *id), b.translate(d), "{id}");
    }
}

#[test]
fn dragging_a_comment_moves_only_the_comment() {
    let (s, area, scales, [c1, _]) = plot_scene();
    let out = replay(
        s.clone(),
        &[
            PointerEvent::Press { button: Button::Left, p: Point::new(112.0, 112.0) },
            PointerEvent::Move { p: Point::new(112.0, 117.0) },
            PointerEvent::Release,
        ],
    )
    .unwrap();
    assert_eq!(corners(&out, c1), corners(&s, c1).translate(Point::new(0.0, 5.0)));
    assert_eq!(corners(&out, area), corners(&s, area));
    for id in scales {
        assert_eq!(corners(&out, id), corners(&s, id));
    }
}

#[test]
fn view_switch_restores_geometry_but_not_functions() {
    let (mut s, area, _, _) = plot_scene();
    s.capture_view("A");
    let geometry = |s: &Scene| s.elements().iter().map(|e| (e.id, e.bbox())).collect::<Vec<_>>();
    let captured = geometry(&s);
    s.move_element(area, Point::new(40.0, -30.0)).unwrap();
    let mut el = s.element(area).unwrap().clone();
    if let ElementKind::PlotArea(a) = &mut el.kind {
        a.functions = vec![FunctionDef::explicit("cos(x)"), FunctionDef::explicit("x")];
    }
    s.update(el).unwrap();
    s.apply_view("A").unwrap();
    let mut now = geometry(&s);
    let mut then = captured.clone();
    now.sort_by_key(|e| e.0);
    then.sort_by_key(|e| e.0);
    assert_eq!(now, then);
    assert_eq!(PlotBinding::of(&s, area).unwrap().functions.len(), 2);
    assert!(s.apply_view("missing").is_err());
}

fn lab(walls: Vec<Wall>, thickness: f64) -> LabyrinthEl {
    LabyrinthEl { walls, thickness }
}

fn spot(x: f64, y: f64, r: f64) -> SpotEl {
    SpotEl { center: Point::new(x, y), r, mode: SpotMode::Free }
}

fn wall(x0: f64, y0: f64, x1: f64, y1: f64) -> Wall {
    Wall { a: Point::new(x0, y0), b: Point::new(x1, y1) }
}

#[test]
fn spot_stops_in_front_of_a_wall() {
    let l = lab(vec![wall(-100.0, 0.0, 100.0, 0.0)], 2.0);
    let to = constrained_spot_move(&l, &spot(0.0, 20.0, 5.0), Point::new(0.0, -20.0));
    assert!((to.y - 6.0).abs() <= 0.1, "{to:?}");
    assert_eq!(to.x, 0.0);
    // Dense sampling of the travelled segment: every visited position is
    // clear, and the next step past the stop would not be.
    let need = 5.0 + 1.0;
    for i in 0..=1000 {
        let p = Point::new(0.0, 20.0).lerp(to, i as f64 / 1000.0);
        assert!(segment_distance(p, l.walls[0].a, l.walls[0].b) >= need);
    }
    let beyond = Point::new(to.x, to.y - SPOT_STEP_TOLERANCE);
    assert!(segment_distance(beyond, l.walls[0].a, l.walls[0].b) < need);
}

#[test]
fn unobstructed_and_identity_moves() {
    let l = lab(vec![wall(-100.0, 0.0, 100.0, 0.0)], 2.0);
    assert_eq!(constrained_spot_move(&l, &spot(0.0, 20.0, 5.0), Point::new(50.0, 60.0)), Point::new(50.0, 60.0));
    assert_eq!(constrained_spot_move(&l, &spot(0.0, 20.0, 5.0), Point::new(0.0, 20.0)), Point::new(0.0, 20.0));
}

#[test]
fn deleting_a_wall_takes_effect_on_the_next_move() {
    let mut s = Scene::default();
    let (l, sp) = add_maze(&mut s, vec![wall(-100.0, 0.0, 100.0, 0.0), wall(200.0, 0.0, 300.0, 0.0)], 2.0, Point::new(0.0, 20.0), 5.0)
        .unwrap();
    let drag = [
        PointerEvent::Press { button: Button::Left, p: Point::new(0.0, 20.0) },
        PointerEvent::Move { p: Point::new(0.0, -20.0) },
        PointerEvent::Release,
    ];
    let blocked = replay(s.clone(), &drag).unwrap();
    let ElementKind::Spot(b) = &blocked.element(sp).unwrap().kind else { unreachable!() };
    assert!((b.center.y - 6.0).abs() <= 0.1);
    remove_wall(&mut s, l, 0).unwrap();
    let free = replay(s, &drag).unwrap();
    let ElementKind::Spot(f) = &free.element(sp).unwrap().kind else { unreachable!() };
    assert_eq!(f.center, Point::new(0.0, -20.0));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// Maze spots keep their clearance and path spots stay on their paths
    /// through arbitrary event logs.
    #[test]
    fn spots_stay_safe(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = random_scene(&mut rng, &SceneGen { elements: 10, ..SceneGen::default() });
        let m = rng.gen_range(50..300);
        let evs = random_events(&mut rng, &s, m, &SceneGen::default().extent);
        let out = replay(s, &evs).unwrap();
        for el in out.elements() {
            let ElementKind::Spot(sp) = &el.kind else { continue };
            match sp.mode {
                SpotMode::Maze(l) => {
                    let ElementKind::Labyrinth(l) = &out.element(l).unwrap().kind else { unreachable!() };
                    for w in &l.walls {
                        let d = segment_distance(sp.center, w.a, w.b);
                        prop_assert!(d >= sp.r + l.thickness / 2.0 - SPOT_STEP_TOLERANCE, "{} < {}", d, sp.r + l.thickness / 2.0);
                    }
                }
                SpotMode::Path(_) => {
                    let (s, pts) = path_spot(&out, el).unwrap();
                    prop_assert!(polyline_distance(s.center, &pts) <= 1e-9);
                }
                SpotMode::Free => {}
            }
        }
    }
}

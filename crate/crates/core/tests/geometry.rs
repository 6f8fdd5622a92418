//! Geometry checked against the brute-force oracles in `testkit::oracle`.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use udscene::geometry::{
    bbox, bbox_piece, contains, dist_to_piece, project_to_polyline, rotate_about, wrap_angle, Point, Rect,
    SegmentPiece,
};
use udscene::testkit::oracle::{
    dense_projection, piece_distance, polyline_distance, sampled_bbox, shape_border_distance, shape_contains,
};
use udscene::testkit::{random_point, random_shape, BOUNDARY_BAND};

#[test]
fn containment_matches_ray_cast_outside_the_band() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let (mut checked, mut skipped) = (0, 0);
    for _ in 0..100 {
        let center = Point::new(rng.gen_range(100.0..900.0), rng.gen_range(100.0..700.0));
        let size = rng.gen_range(10.0..150.0);
        let shape = random_shape(&mut rng, center, size);
        let area = bbox(&shape).expand(20.0);
        for _ in 0..1000 {
            let p = random_point(&mut rng, &area);
            if shape_border_distance(&shape, p) < BOUNDARY_BAND {
                skipped += 1;
                continue;
            }
            assert_eq!(contains(&shape, p), shape_contains(&shape, p), "{shape:?} at {p:?}");
            checked += 1;
        }
    }
    assert!(checked > 90_000, "{checked} checked, {skipped} skipped");
}

#[test]
fn border_points_count_as_inside() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..50 {
        let shape = random_shape(&mut rng, Point::new(0.0, 0.0), 50.0);
        for piece in &shape.outer.pieces {
            assert!(contains(&shape, piece.start()));
            assert!(contains(&shape, piece.midpoint()));
        }
    }
}

#[test]
fn quarter_arc_bbox_matches_dense_sampling() {
    let arc = SegmentPiece::arc(Point::ORIGIN, 10.0, 0.0, FRAC_PI_2);
    assert_eq!(bbox_piece(&arc), Rect::from_coords(0.0, 0.0, 10.0, 10.0));
    let dense = sampled_bbox(&arc, 10_000);
    let exact = bbox_piece(&arc);
    for (a, b) in [(dense.min, exact.min), (dense.max, exact.max)] {
        assert!(a.dist(b) < 1e-6, "{dense:?} vs {exact:?}");
    }
}

#[test]
fn arc_bboxes_match_dense_sampling() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..500 {
        let arc = SegmentPiece::arc(
            Point::new(rng.gen_range(-100.0..100.0), rng.gen_range(-100.0..100.0)),
            rng.gen_range(1.0..100.0),
            rng.gen_range(-PI..PI),
            rng.gen_range(-TAU..TAU),
        );
        let exact = bbox_piece(&arc);
        let dense = sampled_bbox(&arc, 10_000);
        // Sampling can only fall short of the true extreme, by at most the
        // sagitta of one sample step.
        let slack = 1e-3;
        assert!(exact.min.x <= dense.min.x + 1e-9 && exact.min.x >= dense.min.x - slack, "{arc:?}");
        assert!(exact.min.y <= dense.min.y + 1e-9 && exact.min.y >= dense.min.y - slack, "{arc:?}");
        assert!(exact.max.x >= dense.max.x - 1e-9 && exact.max.x <= dense.max.x + slack, "{arc:?}");
        assert!(exact.max.y >= dense.max.y - 1e-9 && exact.max.y <= dense.max.y + slack, "{arc:?}");
    }
}

#[test]
fn exact_distances_agree_with_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..20_000 {
        let piece = if rng.gen_bool(0.5) {
            SegmentPiece::line(
                Point::new(rng.gen_range(-50.0..50.0), rng.gen_range(-50.0..50.0)),
                Point::new(rng.gen_range(-50.0..50.0), rng.gen_range(-50.0..50.0)),
            )
        } else {
            SegmentPiece::arc(
                Point::new(rng.gen_range(-20.0..20.0), rng.gen_range(-20.0..20.0)),
                rng.gen_range(1.0..40.0),
                rng.gen_range(-PI..PI),
                rng.gen_range(-TAU..TAU),
            )
        };
        let p = Point::new(rng.gen_range(-80.0..80.0), rng.gen_range(-80.0..80.0));
        assert!((dist_to_piece(p, &piece) - piece_distance(&piece, p)).abs() < 1e-9, "{piece:?} {p:?}");
    }
}

#[test]
fn projection_matches_dense_sampling() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    let mut compared = 0;
    for _ in 0..100 {
        let n = rng.gen_range(2..8);
        let pts: Vec<Point> = (0..n).map(|_| Point::new(rng.gen_range(0.0..100.0), rng.gen_range(0.0..100.0))).collect();
        for _ in 0..100 {
            let p = Point::new(rng.gen_range(-50.0..150.0), rng.gen_range(-50.0..150.0));
            let foot = project_to_polyline(p, &pts).foot;
            assert!(polyline_distance(foot, &pts) <= 1e-9);
            let dense = dense_projection(p, &pts, 10_000);
            // The closest sample can be no nearer than the true foot.
            assert!(p.dist(foot) <= p.dist(dense) + 1e-9);
            // Near-ties between segments may legitimately pick either foot.
            if (p.dist(foot) - p.dist(dense)).abs() < 1e-4 && foot.dist(dense) > 0.01 {
                continue;
            }
            assert!(foot.dist(dense) <= 0.01, "{p:?} {pts:?}: {foot:?} vs {dense:?}");
            compared += 1;
        }
    }
    assert!(compared > 9_000);
}

#[test]
fn shape_bbox_contains_sampled_contour() {
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    for _ in 0..200 {
        let size = rng.gen_range(5.0..200.0);
        let shape = random_shape(&mut rng, Point::new(0.0, 0.0), size);
        let b = bbox(&shape).expand(1e-9);
        for piece in &shape.outer.pieces {
            let s = sampled_bbox(piece, 1000);
            assert!(b.contains(s.min) && b.contains(s.max));
        }
    }
}

fn arb_point() -> impl Strategy<Value = Point> {
    (-1e3..1e3f64, -1e3..1e3f64).prop_map(|(x, y)| Point::new(x, y))
}

proptest! {
    #[test]
    fn rotation_preserves_distances(pts in prop::collection::vec(arb_point(), 2..12), pivot in arb_point(), theta in -10.0..10.0f64) {
        let rotated: Vec<Point> = pts.iter().map(|&p| rotate_about(p, pivot, theta)).collect();
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                prop_assert!((pts[i].dist(pts[j]) - rotated[i].dist(rotated[j])).abs() <= 1e-9);
            }
        }
    }

    #[test]
    fn wrap_angle_lands_in_half_open_interval(a in -100.0..100.0f64) {
        let w = wrap_angle(a);
        prop_assert!(w > -PI && w <= PI);
        prop_assert!(((a - w) / TAU - ((a - w) / TAU).round()).abs() < 1e-9);
    }

    #[test]
    fn translation_commutes_with_containment(seed in any::<u64>(), dx in -500.0..500.0f64, dy in -500.0..500.0f64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let shape = random_shape(&mut rng, Point::new(0.0, 0.0), 60.0);
        let d = Point::new(dx, dy);
        let moved = shape.translate(d);
        for _ in 0..50 {
            let p = random_point(&mut rng, &bbox(&shape).expand(10.0));
            if shape_border_distance(&shape, p) > 1e-6 {
                prop_assert_eq!(contains(&shape, p), contains(&moved, p + d));
            }
        }
    }
}

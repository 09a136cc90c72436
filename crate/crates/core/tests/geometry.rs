use proptest::prelude::*;

use wmsn::geometry::{distance, in_forward_region, segment_intersection, segments_cross, Point};

fn coord() -> impl Strategy<Value = f64> {
    -500.0f64..500.0
}

fn point() -> impl Strategy<Value = Point> {
    (coord(), coord()).prop_map(|(x, y)| Point::new(x, y))
}

fn rotate(p: Point, theta: f64) -> Point {
    let (s, c) = theta.sin_cos();
    Point::new(c * p.x - s * p.y, s * p.x + c * p.y)
}

/// Distance of `c` from the boundary line, scaled; membership is only
/// compared away from it so rounding cannot flip the answer.
fn margin(c: Point, s: Point, k: Point) -> f64 {
    (k - s).dot(c - s) / distance(k, s).max(1e-9)
}

proptest! {
    #[test]
    fn sink_and_sender_are_inside(s in point(), k in point()) {
        prop_assume!(distance(s, k) > 1e-6);
        prop_assert!(in_forward_region(k, s, k).unwrap());
        prop_assert!(in_forward_region(s, s, k).unwrap());
    }

    #[test]
    fn translation_invariant(c in point(), s in point(), k in point(), t in point()) {
        prop_assume!(distance(s, k) > 1e-3 && margin(c, s, k).abs() > 1e-6);
        prop_assert_eq!(
            in_forward_region(c, s, k).unwrap(),
            in_forward_region(c + t, s + t, k + t).unwrap()
        );
    }

    #[test]
    fn rotation_invariant(c in point(), s in point(), k in point(), theta in 0.0f64..std::f64::consts::TAU) {
        prop_assume!(distance(s, k) > 1e-3 && margin(c, s, k).abs() > 1e-6);
        prop_assert_eq!(
            in_forward_region(c, s, k).unwrap(),
            in_forward_region(rotate(c, theta), rotate(s, theta), rotate(k, theta)).unwrap()
        );
    }

    #[test]
    fn reflection_through_sender_flips_side(c in point(), s in point(), k in point()) {
        prop_assume!(distance(s, k) > 1e-3 && margin(c, s, k).abs() > 1e-6);
        let mirrored = s * 2.0 - c;
        prop_assert_ne!(in_forward_region(c, s, k).unwrap(), in_forward_region(mirrored, s, k).unwrap());
    }

    #[test]
    fn crossing_point_lies_on_both_segments(p1 in point(), p2 in point(), q1 in point(), q2 in point()) {
        if let Some(x) = segment_intersection(p1, p2, q1, q2) {
            let on = |a: Point, b: Point| (distance(a, x) + distance(x, b) - distance(a, b)).abs() < 1e-6 * (1.0 + distance(a, b));
            prop_assert!(on(p1, p2) && on(q1, q2));
        }
        prop_assert_eq!(segments_cross(p1, p2, q1, q2), segments_cross(q1, q2, p1, p2));
    }
}

#[test]
fn degenerate_ray_is_an_error() {
    let s = Point::new(1.0, 2.0);
    assert!(in_forward_region(Point::new(0.0, 0.0), s, s).is_err());
}

//! Planar geometry for node placement and next-hop region tests.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("sender and sink coincide at ({x}, {y}); the forward region is undefined")]
    DegenerateRay { x: f64, y: f64 },
}

/// A position on the deployment plane, in meters.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn dot(self, other: Point) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the 3D cross product.
    pub fn cross(self, other: Point) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn midpoint(self, other: Point) -> Point {
        Point::new((self.x + other.x) * 0.5, (self.y + other.y) * 0.5)
    }

    /// Bearing of `self - origin` in radians, in `(-pi, pi]`.
    pub fn bearing_from(self, origin: Point) -> f64 {
        (self.y - origin.y).atan2(self.x - origin.x)
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, rhs: Point) -> Point {
        Point::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, rhs: Point) -> Point {
        Point::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, k: f64) -> Point {
        Point::new(self.x * k, self.y * k)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

pub fn distance(a: Point, b: Point) -> f64 {
    (a.x - b.x).hypot(a.y - b.y)
}

pub fn distance_sq(a: Point, b: Point) -> f64 {
    (a - b).norm_sq()
}

/// Whether `candidate` lies in the closed half-plane that contains `sink`
/// and is bounded by the line through `sender` perpendicular to the
/// sender-to-sink ray. Points on that line count as inside.
pub fn in_forward_region(candidate: Point, sender: Point, sink: Point) -> Result<bool, GeometryError> {
    if sender == sink {
        return Err(GeometryError::DegenerateRay { x: sender.x, y: sender.y });
    }
    Ok((sink - sender).dot(candidate - sender) >= 0.0)
}

/// Proper or touching intersection point of segments `p1-p2` and `q1-q2`.
///
/// Collinear overlaps return `None`; callers only need a single crossing point.
pub fn segment_intersection(p1: Point, p2: Point, q1: Point, q2: Point) -> Option<Point> {
    let r = p2 - p1;
    let s = q2 - q1;
    let denom = r.cross(s);
    if denom == 0.0 {
        return None;
    }
    let qp = q1 - p1;
    let t = qp.cross(s) / denom;
    let u = qp.cross(r) / denom;
    if (0.0..=1.0).contains(&t) && (0.0..=1.0).contains(&u) {
        Some(p1 + r * t)
    } else {
        None
    }
}

/// True when the open segments `p1-p2` and `q1-q2` cross at a single interior
/// point. Shared endpoints do not count as a crossing.
pub fn segments_cross(p1: Point, p2: Point, q1: Point, q2: Point) -> bool {
    let d1 = (p2 - p1).cross(q1 - p1);
    let d2 = (p2 - p1).cross(q2 - p1);
    let d3 = (q2 - q1).cross(p1 - q1);
    let d4 = (q2 - q1).cross(p2 - q1);
    d1 * d2 < 0.0 && d3 * d4 < 0.0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn distance_examples() {
        assert_eq!(distance(Point::new(0.0, 0.0), Point::new(3.0, 4.0)), 5.0);
        assert_eq!(distance(Point::new(2.0, 2.0), Point::new(2.0, 2.0)), 0.0);
        let d = distance(Point::new(1.0, 0.0), Point::new(0.0, 1.0));
        assert!((d - std::f64::consts::SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn forward_region_examples() {
        let sender = Point::new(0.0, 0.0);
        let sink = Point::new(10.0, 0.0);
        assert!(in_forward_region(Point::new(5.0, 3.0), sender, sink).unwrap());
        assert!(!in_forward_region(Point::new(-1.0, 0.0), sender, sink).unwrap());
        assert!(in_forward_region(Point::new(0.0, 7.0), sender, sink).unwrap());
    }

    #[test]
    fn forward_region_rejects_degenerate_ray() {
        let p = Point::new(4.0, 4.0);
        assert_eq!(in_forward_region(Point::new(1.0, 1.0), p, p), Err(GeometryError::DegenerateRay { x: 4.0, y: 4.0 }));
    }

    #[test]
    fn crossing_segments() {
        let a = Point::new(0.0, 0.0);
        let b = Point::new(2.0, 2.0);
        let c = Point::new(0.0, 2.0);
        let d = Point::new(2.0, 0.0);
        assert!(segments_cross(a, b, c, d));
        assert_eq!(segment_intersection(a, b, c, d), Some(Point::new(1.0, 1.0)));
        // shared endpoint
        assert!(!segments_cross(a, b, a, d));
        // parallel
        assert_eq!(segment_intersection(a, c, d, b), None);
    }
}

use serde::{Deserialize, Serialize};
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

/// A point (or free vector) in the plane.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    #[inline]
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    /// Unit vector at polar angle `theta`.
    #[inline]
    pub fn polar(theta: f64) -> Self {
        Self::new(theta.cos(), theta.sin())
    }

    #[inline]
    pub fn dot(self, other: Point) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the 3-D cross product.
    #[inline]
    pub fn cross(self, other: Point) -> f64 {
        self.x * other.y - self.y * other.x
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    #[inline]
    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    #[inline]
    pub fn dist(self, other: Point) -> f64 {
        (self - other).norm()
    }

    /// Returns the unit vector, or `None` for (near) zero vectors.
    pub fn normalized(self) -> Option<Point> {
        let n = self.norm();
        if n > 1e-300 {
            Some(self * (1.0 / n))
        } else {
            None
        }
    }

    /// Counter-clockwise rotation by a right angle.
    #[inline]
    pub fn perp(self) -> Point {
        Point::new(-self.y, self.x)
    }

    #[inline]
    pub fn angle(self) -> f64 {
        self.y.atan2(self.x)
    }

    #[inline]
    pub fn lerp(self, other: Point, s: f64) -> Point {
        self + (other - self) * s
    }
}

impl Add for Point {
    type Output = Point;
    #[inline]
    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl AddAssign for Point {
    #[inline]
    fn add_assign(&mut self, o: Point) {
        self.x += o.x;
        self.y += o.y;
    }
}

impl Sub for Point {
    type Output = Point;
    #[inline]
    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    #[inline]
    fn mul(self, s: f64) -> Point {
        Point::new(self.x * s, self.y * s)
    }
}

impl Neg for Point {
    type Output = Point;
    #[inline]
    fn neg(self) -> Point {
        Point::new(-self.x, -self.y)
    }
}

/// Distance from `p` to the closed segment `[a, b]`.
pub fn point_segment_distance(p: Point, a: Point, b: Point) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sq();
    if len2 == 0.0 {
        return p.dist(a);
    }
    let s = ((p - a).dot(ab) / len2).clamp(0.0, 1.0);
    p.dist(a + ab * s)
}

/// Parameter `s >= 0` at which the ray `origin + s * dir` first meets the
/// segment `[a, b]`, if it does.
pub fn ray_segment_intersection(origin: Point, dir: Point, a: Point, b: Point) -> Option<f64> {
    let e = b - a;
    let denom = dir.cross(e);
    if denom.abs() < 1e-300 {
        return None;
    }
    let w = a - origin;
    let s = w.cross(e) / denom;
    let lambda = w.cross(dir) / denom;
    if s >= 0.0 && (-1e-12..=1.0 + 1e-12).contains(&lambda) {
        Some(s)
    } else {
        None
    }
}

/// True when the open segments `[p1, p2]` and `[q1, q2]` cross at a single
/// interior point. Touching endpoints and collinear overlaps are not crossings.
pub fn segments_cross(p1: Point, p2: Point, q1: Point, q2: Point) -> bool {
    let d1 = (p2 - p1).cross(q1 - p1);
    let d2 = (p2 - p1).cross(q2 - p1);
    let d3 = (q2 - q1).cross(p1 - q1);
    let d4 = (q2 - q1).cross(p2 - q1);
    let scale = (p2 - p1).norm() * (q2 - q1).norm();
    let eps = 1e-12 * scale.max(1e-300);
    ((d1 > eps && d2 < -eps) || (d1 < -eps && d2 > eps))
        && ((d3 > eps && d4 < -eps) || (d3 < -eps && d4 > eps))
}

/// Signed area of a closed polygon (positive when counter-clockwise).
pub fn polygon_area(points: &[Point]) -> f64 {
    let n = points.len();
    if n < 3 {
        return 0.0;
    }
    let mut acc = 0.0;
    for i in 0..n {
        acc += points[i].cross(points[(i + 1) % n]);
    }
    0.5 * acc
}

/// Total length of a closed polyline.
pub fn closed_length(points: &[Point]) -> f64 {
    let n = points.len();
    if n < 2 {
        return 0.0;
    }
    (0..n).map(|i| points[i].dist(points[(i + 1) % n])).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ray_hits_segment() {
        let s = ray_segment_intersection(
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(2.0, -1.0),
            Point::new(2.0, 1.0),
        );
        assert_eq!(s, Some(2.0));
        let miss = ray_segment_intersection(
            Point::new(0.0, 0.0),
            Point::new(-1.0, 0.0),
            Point::new(2.0, -1.0),
            Point::new(2.0, 1.0),
        );
        assert_eq!(miss, None);
    }

    #[test]
    fn crossing_excludes_touching() {
        let a = Point::new(0.0, 0.0);
        let b = Point::new(1.0, 1.0);
        assert!(segments_cross(a, b, Point::new(0.0, 1.0), Point::new(1.0, 0.0)));
        assert!(!segments_cross(a, b, b, Point::new(2.0, 0.0)));
    }

    #[test]
    fn unit_square_area() {
        let sq = [
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(1.0, 1.0),
            Point::new(0.0, 1.0),
        ];
        assert_eq!(polygon_area(&sq), 1.0);
        assert_eq!(closed_length(&sq), 4.0);
    }
}

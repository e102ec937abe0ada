use super::point::{point_segment_distance, Point};

/// Convex hull by Andrew's monotone chain, counter-clockwise, without
/// collinear points. Degenerate inputs return the distinct extreme points.
pub fn convex_hull(points: &[Point]) -> Vec<Point> {
    let mut pts: Vec<Point> = points.iter().copied().filter(|p| p.x.is_finite() && p.y.is_finite()).collect();
    pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let turn = |o: Point, a: Point, b: Point| (a - o).cross(b - o);
    let mut hull: Vec<Point> = Vec::with_capacity(2 * pts.len());
    for &p in &pts {
        while hull.len() >= 2 && turn(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(p);
    }
    let lower = hull.len() + 1;
    for &p in pts.iter().rev().skip(1) {
        while hull.len() >= lower && turn(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(p);
    }
    hull.pop();
    hull
}

/// Distance from `p` to the boundary of a closed polygon.
pub fn distance_to_polygon_boundary(poly: &[Point], p: Point) -> f64 {
    match poly.len() {
        0 => f64::INFINITY,
        1 => p.dist(poly[0]),
        m => (0..m)
            .map(|k| point_segment_distance(p, poly[k], poly[(k + 1) % m]))
            .fold(f64::INFINITY, f64::min),
    }
}

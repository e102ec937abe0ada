//! The convex core `C`: a closed convex body whose boundary is sampled by
//! arc length, with one outward unit normal per sample.
//!
//! Polygon vertices (and the two endpoints of a segment) carry a fan of
//! samples sharing the same point whose normals sweep the normal cone. Fan
//! interiors have zero arc-length weight but positive angular weight, so
//! quadratures over `∂C` stay uniform while every normal ray is represented.

use super::point::{point_segment_distance, polygon_area, ray_segment_intersection, Point};
use crate::error::{GnpError, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};

/// Default number of arc-length samples on `∂C`.
pub const DEFAULT_SAMPLES: usize = 512;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CoreKind {
    Disc { center: Point, radius: f64 },
    Polygon { vertices: Vec<Point> },
    Segment { a: Point, b: Point },
}

/// One boundary sample of the core.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoreSample {
    pub point: Point,
    /// Outward unit normal.
    pub normal: Point,
    /// Arc-length quadrature weight.
    pub weight: f64,
    /// Angular (curvature) quadrature weight; sums to `2π` over the boundary.
    pub turn: f64,
    /// Arc-length coordinate of `point`.
    pub arclength: f64,
}

#[derive(Clone, Debug)]
enum Piece {
    Edge {
        from: Point,
        to: Point,
        /// Sample indices at the subdivision nodes, endpoints included.
        nodes: Vec<usize>,
    },
    Fan {
        vertex: Point,
        /// Increasing node angles, `angles[0]` is the start of the fan.
        angles: Vec<f64>,
        nodes: Vec<usize>,
    },
}

/// Node angles of a vertex fan: `(vertex index, from, to, target spacing)`
/// to an increasing list starting at `from` and ending at `to`.
type FanRule<'a> = &'a dyn Fn(usize, f64, f64, f64) -> Vec<f64>;

fn uniform_fan(_: usize, from: f64, to: f64, dphi_target: f64) -> Vec<f64> {
    let nf = (((to - from) / dphi_target).ceil() as usize).max(1);
    (0..=nf).map(|j| from + (to - from) * j as f64 / nf as f64).collect()
}

/// Where a plane point sits relative to the normal-ray foliation of `C`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum RayLocation {
    /// Strictly inside `C`.
    Interior,
    /// On the normal ray interpolated between samples `i0` and `i1` with
    /// weight `lambda` on `i1`, at distance `r` from `∂C`.
    Ray {
        i0: usize,
        i1: usize,
        lambda: f64,
        r: f64,
    },
}

#[derive(Clone, Debug)]
pub struct ConvexBody {
    kind: CoreKind,
    samples: Vec<CoreSample>,
    perimeter: f64,
    area: f64,
    centroid: Point,
    pieces: Vec<Piece>,
}

impl ConvexBody {
    /// Disc sampled at `n` equally spaced angles starting from angle 0.
    pub fn disc(center: Point, radius: f64, n: usize) -> Result<Self> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(GnpError::InvalidCore(format!("disc radius {radius}")));
        }
        if n < 8 {
            return Err(GnpError::InvalidCore(format!("{n} samples is too few")));
        }
        let dtheta = TAU / n as f64;
        let samples = (0..n)
            .map(|i| {
                let theta = i as f64 * dtheta;
                let normal = Point::polar(theta);
                CoreSample {
                    point: center + normal * radius,
                    normal,
                    weight: radius * dtheta,
                    turn: dtheta,
                    arclength: radius * theta,
                }
            })
            .collect();
        Ok(Self {
            kind: CoreKind::Disc { center, radius },
            samples,
            perimeter: TAU * radius,
            area: PI * radius * radius,
            centroid: center,
            pieces: Vec::new(),
        })
    }

    /// Convex polygon with counter-clockwise vertices; `edge_samples`
    /// subdivisions are spread over the perimeter and `fan_samples` over the
    /// total turning angle `2π`.
    pub fn polygon(vertices: Vec<Point>, edge_samples: usize, fan_samples: usize) -> Result<Self> {
        if vertices.len() < 3 {
            return Err(GnpError::InvalidCore("polygon needs at least 3 vertices".into()));
        }
        let m = vertices.len();
        for k in 0..m {
            let e0 = vertices[(k + 1) % m] - vertices[k];
            let e1 = vertices[(k + 2) % m] - vertices[(k + 1) % m];
            if e0.cross(e1) <= 0.0 {
                return Err(GnpError::InvalidCore(format!(
                    "polygon is not strictly convex and counter-clockwise at vertex {}",
                    (k + 1) % m
                )));
            }
        }
        let area = polygon_area(&vertices);
        let centroid = polygon_centroid(&vertices, area);
        let kind = CoreKind::Polygon { vertices: vertices.clone() };
        Self::build_piecewise(kind, &vertices, edge_samples, fan_samples, area, centroid, &uniform_fan)
    }

    /// Degenerate core `[a, b]`, traversed on both sides with half-disc fans
    /// at the endpoints.
    pub fn segment(a: Point, b: Point, edge_samples: usize, fan_samples: usize) -> Result<Self> {
        Self::segment_with_fans(a, b, edge_samples, fan_samples, &uniform_fan)
    }

    /// Segment core whose endpoint fans add `extra` node angles (radians,
    /// in the fan's own range) to the uniform ones; used to resolve thin
    /// features seen from an endpoint.
    pub fn segment_refined(a: Point, b: Point, edge_samples: usize, fan_samples: usize, extra: &[f64]) -> Result<Self> {
        let rule = |k: usize, from: f64, to: f64, dphi: f64| {
            let mut angles = uniform_fan(k, from, to, dphi);
            for &phi in extra {
                let mut phi = phi;
                while phi < from {
                    phi += TAU;
                }
                while phi > from + TAU {
                    phi -= TAU;
                }
                if phi > from && phi < to {
                    angles.push(phi);
                }
            }
            angles.sort_by(f64::total_cmp);
            angles.dedup_by(|x, y| (*x - *y).abs() < 1e-12);
            angles
        };
        Self::segment_with_fans(a, b, edge_samples, fan_samples, &rule)
    }

    fn segment_with_fans(a: Point, b: Point, edge_samples: usize, fan_samples: usize, rule: FanRule) -> Result<Self> {
        if a.dist(b) <= 0.0 {
            return Err(GnpError::InvalidCore("segment endpoints coincide".into()));
        }
        let vertices = vec![a, b];
        let kind = CoreKind::Segment { a, b };
        Self::build_piecewise(kind, &vertices, edge_samples, fan_samples, 0.0, a.lerp(b, 0.5), rule)
    }

    fn build_piecewise(
        kind: CoreKind,
        vertices: &[Point],
        edge_samples: usize,
        fan_samples: usize,
        area: f64,
        centroid: Point,
        fan_rule: FanRule,
    ) -> Result<Self> {
        let m = vertices.len();
        let edge = |k: usize| (vertices[k], vertices[(k + 1) % m]);
        let lengths: Vec<f64> = (0..m).map(|k| edge(k).0.dist(edge(k).1)).collect();
        let perimeter: f64 = lengths.iter().sum();
        let ds = perimeter / edge_samples.max(m) as f64;
        let dphi_target = TAU / fan_samples.max(m) as f64;
        // outward normal angle of edge k
        let alpha: Vec<f64> = (0..m)
            .map(|k| {
                let (p, q) = edge(k);
                let e = q - p;
                Point::new(e.y, -e.x).angle()
            })
            .collect();

        let mut samples: Vec<CoreSample> = Vec::new();
        let mut pieces: Vec<Piece> = Vec::new();
        let mut arclength = 0.0;
        // index of the fan-start sample at vertex k, patched once known
        let mut fan_start_of = vec![usize::MAX; m];
        let mut edge_nodes: Vec<Vec<usize>> = vec![Vec::new(); m];

        for k in 0..m {
            let prev = (k + m - 1) % m;
            let from = alpha[prev];
            let mut to = alpha[k];
            while to < from {
                to += TAU;
            }
            if to - from < 1e-14 {
                to = from;
            }
            let angles = if to > from {
                fan_rule(k, from, to, dphi_target)
            } else {
                vec![from]
            };
            let nf = angles.len() - 1;
            let v = vertices[k];
            let mut fan_nodes = Vec::with_capacity(nf + 1);
            for (j, &phi) in angles.iter().enumerate() {
                let mut weight = 0.0;
                if j == 0 {
                    weight += 0.5 * lengths[prev] / subdivisions(lengths[prev], ds) as f64;
                }
                if j == nf {
                    weight += 0.5 * lengths[k] / subdivisions(lengths[k], ds) as f64;
                }
                let left = if j > 0 { phi - angles[j - 1] } else { 0.0 };
                let right = if j < nf { angles[j + 1] - phi } else { 0.0 };
                fan_nodes.push(samples.len());
                samples.push(CoreSample {
                    point: v,
                    normal: Point::polar(phi),
                    weight,
                    turn: 0.5 * (left + right),
                    arclength,
                });
            }
            fan_start_of[k] = fan_nodes[0];
            let fan_end = *fan_nodes.last().unwrap();
            pieces.push(Piece::Fan {
                vertex: v,
                angles,
                nodes: fan_nodes,
            });

            let (p, q) = edge(k);
            let n = subdivisions(lengths[k], ds);
            let normal = Point::polar(alpha[k]);
            let mut nodes = vec![fan_end];
            for j in 1..n {
                let s = j as f64 / n as f64;
                nodes.push(samples.len());
                samples.push(CoreSample {
                    point: p.lerp(q, s),
                    normal,
                    weight: lengths[k] / n as f64,
                    turn: 0.0,
                    arclength: arclength + s * lengths[k],
                });
            }
            edge_nodes[k] = nodes;
            arclength += lengths[k];
        }
        for k in 0..m {
            let mut nodes = std::mem::take(&mut edge_nodes[k]);
            nodes.push(fan_start_of[(k + 1) % m]);
            let (from, to) = edge(k);
            pieces.push(Piece::Edge { from, to, nodes });
        }

        Ok(Self {
            kind,
            samples,
            perimeter,
            area,
            centroid,
            pieces,
        })
    }

    pub fn kind(&self) -> &CoreKind {
        &self.kind
    }

    pub fn samples(&self) -> &[CoreSample] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Length of `∂C` (twice the length for a segment).
    pub fn perimeter(&self) -> f64 {
        self.perimeter
    }

    /// `|C|`.
    pub fn area(&self) -> f64 {
        self.area
    }

    pub fn centroid(&self) -> Point {
        self.centroid
    }

    /// Angular parameter of sample `i`, `2π s / |∂C|`.
    pub fn sample_angle(&self, i: usize) -> f64 {
        match self.kind {
            CoreKind::Disc { .. } => self.samples[i].normal.angle().rem_euclid(TAU),
            _ => TAU * self.samples[i].arclength / self.perimeter,
        }
    }

    /// Arc-length quadrature `∫_{∂C} g dσ` for per-sample values.
    pub fn integrate(&self, values: &[f64]) -> f64 {
        self.samples.iter().zip(values).map(|(s, v)| s.weight * v).sum()
    }

    /// Closed membership test for `C` (a segment has no interior but its
    /// points are members).
    pub fn contains(&self, p: Point) -> bool {
        self.distance(p) <= 1e-12
    }

    /// Euclidean distance from `p` to `C` (zero inside).
    pub fn distance(&self, p: Point) -> f64 {
        match &self.kind {
            CoreKind::Disc { center, radius } => (p.dist(*center) - radius).max(0.0),
            CoreKind::Segment { a, b } => point_segment_distance(p, *a, *b),
            CoreKind::Polygon { vertices } => {
                if polygon_strictly_contains(vertices, p) {
                    0.0
                } else {
                    let m = vertices.len();
                    (0..m)
                        .map(|k| point_segment_distance(p, vertices[k], vertices[(k + 1) % m]))
                        .fold(f64::INFINITY, f64::min)
                }
            }
        }
    }

    /// Signed distance to `∂C`: negative inside. For a segment this equals
    /// the unsigned distance.
    pub fn signed_distance(&self, p: Point) -> f64 {
        match &self.kind {
            CoreKind::Disc { center, radius } => p.dist(*center) - radius,
            CoreKind::Segment { .. } => self.distance(p),
            CoreKind::Polygon { vertices } => {
                let m = vertices.len();
                let edge_dist = (0..m)
                    .map(|k| point_segment_distance(p, vertices[k], vertices[(k + 1) % m]))
                    .fold(f64::INFINITY, f64::min);
                if polygon_strictly_contains(vertices, p) {
                    -edge_dist
                } else {
                    edge_dist
                }
            }
        }
    }

    /// Parameter `t >= 0` at which the ray `origin + t·dir` first meets `C`.
    pub fn ray_entry(&self, origin: Point, dir: Point) -> Option<f64> {
        match &self.kind {
            CoreKind::Disc { center, radius } => {
                let w = origin - *center;
                let a = dir.norm_sq();
                let b = 2.0 * w.dot(dir);
                let c = w.norm_sq() - radius * radius;
                if c <= 0.0 {
                    return Some(0.0);
                }
                let disc = b * b - 4.0 * a * c;
                if disc < 0.0 {
                    return None;
                }
                let t = (-b - disc.sqrt()) / (2.0 * a);
                (t >= 0.0).then_some(t)
            }
            CoreKind::Segment { a, b } => ray_segment_intersection(origin, dir, *a, *b),
            CoreKind::Polygon { vertices } => {
                // Cyrus-Beck clipping against the outward edge half-planes
                let m = vertices.len();
                let mut t_in: f64 = 0.0;
                let mut t_out = f64::INFINITY;
                for k in 0..m {
                    let p = vertices[k];
                    let e = vertices[(k + 1) % m] - p;
                    let n = Point::new(e.y, -e.x);
                    let num = n.dot(origin - p);
                    let den = n.dot(dir);
                    if den.abs() < 1e-300 {
                        if num > 0.0 {
                            return None;
                        }
                        continue;
                    }
                    let t = -num / den;
                    if den < 0.0 {
                        t_in = t_in.max(t);
                    } else {
                        t_out = t_out.min(t);
                    }
                }
                (t_in <= t_out).then_some(t_in)
            }
        }
    }

    /// Locates `p` on the normal-ray foliation of the exterior of `C`.
    pub fn locate(&self, p: Point) -> RayLocation {
        match &self.kind {
            CoreKind::Disc { center, radius } => {
                let w = p - *center;
                let dist = w.norm();
                if dist < *radius {
                    return RayLocation::Interior;
                }
                let n = self.samples.len();
                let u = w.angle().rem_euclid(TAU) / TAU * n as f64;
                let i0 = (u.floor() as usize).min(n - 1);
                RayLocation::Ray {
                    i0,
                    i1: (i0 + 1) % n,
                    lambda: u - i0 as f64,
                    r: dist - radius,
                }
            }
            CoreKind::Polygon { vertices } if polygon_strictly_contains(vertices, p) => {
                RayLocation::Interior
            }
            _ => self.locate_piecewise(p),
        }
    }

    fn locate_piecewise(&self, p: Point) -> RayLocation {
        let mut best: Option<(f64, usize, f64)> = None; // (distance, piece, param)
        for (k, piece) in self.pieces.iter().enumerate() {
            if let Piece::Edge { from, to, .. } = piece {
                let e = *to - *from;
                let len2 = e.norm_sq();
                let s = ((p - *from).dot(e) / len2).clamp(0.0, 1.0);
                let foot = *from + e * s;
                let dist = p.dist(foot);
                let outward = Point::new(e.y, -e.x);
                let on_outer_side = (p - *from).dot(outward) >= 0.0;
                let better = match best {
                    None => true,
                    Some((bd, _, _)) => dist < bd - 1e-15 || (dist <= bd + 1e-15 && on_outer_side),
                };
                if better {
                    best = Some((dist, k, s));
                }
            }
        }
        let (dist, k, s) = best.expect("piecewise core has edges");
        let (from, to, nodes) = match &self.pieces[k] {
            Piece::Edge { from, to, nodes } => (*from, *to, nodes),
            Piece::Fan { .. } => unreachable!(),
        };
        if s > 0.0 && s < 1.0 {
            let subdiv = nodes.len() - 1;
            let u = s * subdiv as f64;
            let j = (u.floor() as usize).min(subdiv - 1);
            return RayLocation::Ray {
                i0: nodes[j],
                i1: nodes[j + 1],
                lambda: u - j as f64,
                r: dist,
            };
        }
        let vertex = if s <= 0.0 { from } else { to };
        for piece in &self.pieces {
            if let Piece::Fan { vertex: v, angles, nodes } = piece {
                if v.dist(vertex) > 0.0 {
                    continue;
                }
                let from = angles[0];
                let nf = nodes.len() - 1;
                if nf == 0 {
                    return RayLocation::Ray {
                        i0: nodes[0],
                        i1: nodes[0],
                        lambda: 0.0,
                        r: dist,
                    };
                }
                let mut phi = (p - vertex).angle();
                while phi < from - 1e-12 {
                    phi += TAU;
                }
                while phi > from + TAU {
                    phi -= TAU;
                }
                let phi = phi.clamp(from, angles[nf]);
                let j = angles.partition_point(|a| *a <= phi).clamp(1, nf) - 1;
                let span = angles[j + 1] - angles[j];
                return RayLocation::Ray {
                    i0: nodes[j],
                    i1: nodes[j + 1],
                    lambda: ((phi - angles[j]) / span).clamp(0.0, 1.0),
                    r: dist,
                };
            }
        }
        unreachable!("every vertex carries a fan")
    }

    /// Closed polygon approximating `∂C` (distinct points only).
    pub fn outline(&self) -> Vec<Point> {
        match &self.kind {
            CoreKind::Disc { .. } => self.samples.iter().map(|s| s.point).collect(),
            CoreKind::Polygon { vertices } => vertices.clone(),
            CoreKind::Segment { a, b } => vec![*a, *b],
        }
    }

    /// Axis-aligned bounding box of `C` as `(min, max)`.
    pub fn bounds(&self) -> (Point, Point) {
        match &self.kind {
            CoreKind::Disc { center, radius } => (
                *center - Point::new(*radius, *radius),
                *center + Point::new(*radius, *radius),
            ),
            _ => bounds_of(self.outline().iter().copied()),
        }
    }
}

fn subdivisions(length: f64, ds: f64) -> usize {
    ((length / ds).round() as usize).max(1)
}

fn polygon_strictly_contains(vertices: &[Point], p: Point) -> bool {
    let m = vertices.len();
    (0..m).all(|k| {
        let a = vertices[k];
        let b = vertices[(k + 1) % m];
        (b - a).cross(p - a) > 0.0
    })
}

fn polygon_centroid(vertices: &[Point], area: f64) -> Point {
    let m = vertices.len();
    let mut c = Point::ORIGIN;
    for k in 0..m {
        let p = vertices[k];
        let q = vertices[(k + 1) % m];
        let w = p.cross(q);
        c += (p + q) * w;
    }
    c * (1.0 / (6.0 * area))
}

pub(crate) fn bounds_of(points: impl Iterator<Item = Point>) -> (Point, Point) {
    let mut lo = Point::new(f64::INFINITY, f64::INFINITY);
    let mut hi = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
    for p in points {
        lo.x = lo.x.min(p.x);
        lo.y = lo.y.min(p.y);
        hi.x = hi.x.max(p.x);
        hi.y = hi.y.max(p.y);
    }
    (lo, hi)
}

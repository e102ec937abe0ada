//! Marching squares on nodal data with linear interpolation along cell
//! edges. Saddle cells are resolved by the cell average.

use crate::geometry::Point;
use crate::grid::GridSpec;
use std::collections::HashMap;

/// Closed level lines of `{data > t}` oriented with the superlevel set on
/// the left, plus the area of the piecewise-linear superlevel set.
#[derive(Clone, Debug, Default)]
pub struct Contours {
    pub loops: Vec<Vec<Point>>,
    /// Chains that failed to close (only possible when `{data > t}` reaches
    /// the edge of the grid).
    pub open: Vec<Vec<Point>>,
    pub area: f64,
}

impl Contours {
    pub fn length(&self) -> f64 {
        self.segments().map(|(a, b)| a.dist(b)).sum()
    }

    /// Consecutive vertex pairs of every polyline.
    pub fn segments(&self) -> impl Iterator<Item = (Point, Point)> + '_ {
        let closed = self
            .loops
            .iter()
            .flat_map(|l| (0..l.len()).map(move |k| (l[k], l[(k + 1) % l.len()])));
        let open = self.open.iter().flat_map(|l| l.windows(2).map(|w| (w[0], w[1])));
        closed.chain(open)
    }

    pub fn vertices(&self) -> impl Iterator<Item = Point> + '_ {
        self.loops.iter().chain(&self.open).flatten().copied()
    }
}

struct Segment {
    from_edge: usize,
    to_edge: usize,
    from: Point,
    to: Point,
}

/// Global edge id: horizontal edges `(i, j)-(i+1, j)` are even, vertical
/// edges `(i, j)-(i, j+1)` odd.
fn edge_id(grid: &GridSpec, i: usize, j: usize, vertical: bool) -> usize {
    2 * grid.index(i, j) + usize::from(vertical)
}

fn crossing(grid: &GridSpec, data: &[f64], t: f64, edge: usize) -> Point {
    let (i, j) = grid.coords(edge / 2);
    let (a, b) = if edge % 2 == 0 {
        (grid.index(i, j), grid.index(i + 1, j))
    } else {
        (grid.index(i, j), grid.index(i, j + 1))
    };
    let s = ((t - data[a]) / (data[b] - data[a])).clamp(0.0, 1.0);
    grid.node_at(a).lerp(grid.node_at(b), s)
}

fn shoelace(poly: &[Point]) -> f64 {
    let n = poly.len();
    0.5 * (0..n).map(|k| poly[k].cross(poly[(k + 1) % n])).sum::<f64>()
}

pub fn marching_squares(grid: &GridSpec, data: &[f64], t: f64) -> Contours {
    let h2 = grid.h * grid.h;
    let mut area = 0.0;
    let mut segs = Vec::new();
    for j in 0..grid.ny.saturating_sub(1) {
        for i in 0..grid.nx.saturating_sub(1) {
            let corners = [grid.index(i, j), grid.index(i + 1, j), grid.index(i + 1, j + 1), grid.index(i, j + 1)];
            let vals = corners.map(|c| data[c]);
            let above = vals.map(|v| v > t);
            let count = above.iter().filter(|a| **a).count();
            if count == 0 {
                continue;
            }
            if count == 4 {
                area += h2;
                continue;
            }
            let edges = [
                edge_id(grid, i, j, false),
                edge_id(grid, i + 1, j, true),
                edge_id(grid, i, j + 1, false),
                edge_id(grid, i, j, true),
            ];
            // walk the corners counterclockwise, inserting edge crossings
            let mut poly = Vec::with_capacity(8);
            let mut marks = Vec::with_capacity(4); // (edge, is_exit, position in poly)
            for k in 0..4 {
                if above[k] {
                    poly.push(grid.node_at(corners[k]));
                }
                if above[k] != above[(k + 1) % 4] {
                    marks.push((edges[k], above[k], poly.len()));
                    poly.push(crossing(grid, data, t, edges[k]));
                }
            }
            let saddle = count == 2 && above[0] == above[2];
            let connected = !saddle || vals.iter().sum::<f64>() > 4.0 * t;
            let m = marks.len();
            for (q, &(edge, exit, pos)) in marks.iter().enumerate() {
                if !exit {
                    continue;
                }
                // a connected region pairs each exit with the next entry,
                // separated saddle corners with the previous one
                let (edge2, _, pos2) = if connected { marks[(q + 1) % m] } else { marks[(q + m - 1) % m] };
                segs.push(Segment {
                    from_edge: edge,
                    to_edge: edge2,
                    from: poly[pos],
                    to: poly[pos2],
                });
            }
            area += if connected {
                shoelace(&poly)
            } else {
                // two corner triangles
                marks
                    .iter()
                    .filter(|m| m.1)
                    .map(|&(_, _, pos)| {
                        let n = poly.len();
                        let corner = poly[(pos + n - 1) % n];
                        let exit = poly[pos];
                        let entry = poly[(pos + n - 2) % n];
                        0.5 * (exit - corner).cross(entry - corner).abs()
                    })
                    .sum()
            };
        }
    }
    let (loops, open) = link(segs);
    Contours { loops, open, area }
}

fn link(segs: Vec<Segment>) -> (Vec<Vec<Point>>, Vec<Vec<Point>>) {
    let by_start: HashMap<usize, usize> = segs.iter().enumerate().map(|(k, s)| (s.from_edge, k)).collect();
    let mut has_pred = vec![false; segs.len()];
    for s in &segs {
        if let Some(&k) = by_start.get(&s.to_edge) {
            has_pred[k] = true;
        }
    }
    let mut used = vec![false; segs.len()];
    let mut loops = Vec::new();
    let mut open = Vec::new();
    let follow = |start: usize, used: &mut Vec<bool>| {
        let mut pts = vec![segs[start].from];
        let mut k = start;
        loop {
            used[k] = true;
            match by_start.get(&segs[k].to_edge) {
                Some(&next) if next == start => return (pts, true),
                Some(&next) if !used[next] => {
                    pts.push(segs[next].from);
                    k = next;
                }
                _ => {
                    pts.push(segs[k].to);
                    return (pts, false);
                }
            }
        }
    };
    // open chains first, from their heads
    for start in 0..segs.len() {
        if !has_pred[start] && !used[start] {
            open.push(follow(start, &mut used).0);
        }
    }
    for start in 0..segs.len() {
        if !used[start] {
            let (pts, closed) = follow(start, &mut used);
            if closed {
                loops.push(pts);
            } else {
                open.push(pts);
            }
        }
    }
    (loops, open)
}

/// Even-odd point-in-polygon test against a set of closed loops.
pub fn inside_loops(loops: &[Vec<Point>], p: Point) -> bool {
    let mut inside = false;
    for l in loops {
        let n = l.len();
        for k in 0..n {
            let (a, b) = (l[k], l[(k + 1) % n]);
            if (a.y > p.y) != (b.y > p.y) {
                let x = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
                if p.x < x {
                    inside = !inside;
                }
            }
        }
    }
    inside
}

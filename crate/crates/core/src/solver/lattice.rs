//! Node classification, Shortley-Weller arm lengths and cell fractions for a
//! region on a Cartesian grid.

use crate::error::{GnpError, Result};
use crate::geometry::{Point, Region};
use crate::grid::{GridSpec, NodeMask};

/// Smallest admissible arm fraction.
pub const MIN_ARM: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NodeKind {
    /// Inside, all four arms full.
    Inside,
    /// Inside, at least one arm cut by the boundary.
    Cut,
    /// Outside, 4-adjacent to an inside node (first extension layer).
    Ghost1,
    /// Outside, 4-adjacent to a first-layer node.
    Ghost2,
    Outside,
}

impl NodeKind {
    #[inline]
    pub fn is_inside(self) -> bool {
        matches!(self, NodeKind::Inside | NodeKind::Cut)
    }

    /// Inside or in the extension band.
    #[inline]
    pub fn in_support(self) -> bool {
        !matches!(self, NodeKind::Outside)
    }

    pub fn label(self) -> &'static str {
        match self {
            NodeKind::Inside => "inside",
            NodeKind::Cut => "boundary",
            _ => "outside",
        }
    }
}

/// Directions `-x, +x, -y, +y`.
pub const DIRS: [(i64, i64); 4] = [(-1, 0), (1, 0), (0, -1), (0, 1)];

#[inline]
pub fn opposite(dir: usize) -> usize {
    dir ^ 1
}

#[derive(Clone, Debug)]
pub struct Lattice {
    pub grid: GridSpec,
    pub kind: Vec<NodeKind>,
    /// Arm fractions in `(0, 1]` per direction for inside nodes.
    pub arms: Vec<[f64; 4]>,
    /// Unknown number per node (`u32::MAX` if not an unknown).
    pub unknown: Vec<u32>,
    /// Node index per unknown.
    pub nodes: Vec<usize>,
    /// Fraction of the node's cell inside the region.
    pub frac: Vec<f64>,
}

impl Lattice {
    /// Classifies every node of `grid` against `region`. The outermost ring
    /// of nodes must lie outside.
    pub fn new(region: &impl Region, grid: GridSpec) -> Result<Self> {
        let n = grid.len();
        let inside: Vec<bool> = (0..n).map(|i| region.contains(grid.node_at(i))).collect();
        for idx in 0..n {
            let (i, j) = grid.coords(idx);
            if inside[idx] && (i == 0 || j == 0 || i + 1 == grid.nx || j + 1 == grid.ny) {
                return Err(GnpError::Config("grid does not cover the domain".into()));
            }
        }
        let mut kind = vec![NodeKind::Outside; n];
        let mut arms = vec![[1.0; 4]; n];
        for idx in 0..n {
            if !inside[idx] {
                continue;
            }
            let p = grid.node_at(idx);
            let mut cut = false;
            for (d, _) in DIRS.iter().enumerate() {
                let nb = neighbor(&grid, idx, d).expect("inside nodes are interior");
                if !inside[nb] {
                    arms[idx][d] = boundary_fraction(region, p, grid.node_at(nb));
                    cut = true;
                }
            }
            kind[idx] = if cut { NodeKind::Cut } else { NodeKind::Inside };
        }
        for idx in 0..n {
            if kind[idx] == NodeKind::Outside
                && (0..4).any(|d| neighbor(&grid, idx, d).is_some_and(|nb| kind[nb].is_inside()))
            {
                kind[idx] = NodeKind::Ghost1;
            }
        }
        for idx in 0..n {
            if kind[idx] == NodeKind::Outside
                && (0..4).any(|d| neighbor(&grid, idx, d).is_some_and(|nb| kind[nb] == NodeKind::Ghost1))
            {
                kind[idx] = NodeKind::Ghost2;
            }
        }
        let mut unknown = vec![u32::MAX; n];
        let mut nodes = Vec::new();
        for idx in 0..n {
            if inside[idx] {
                unknown[idx] = nodes.len() as u32;
                nodes.push(idx);
            }
        }
        let frac = (0..n)
            .map(|idx| {
                let mixed = neighbors8(&grid, idx).any(|nb| inside[nb] != inside[idx]);
                if mixed {
                    cell_fraction(region, grid.node_at(idx), grid.h)
                } else if inside[idx] {
                    1.0
                } else {
                    0.0
                }
            })
            .collect();
        Ok(Self {
            grid,
            kind,
            arms,
            unknown,
            nodes,
            frac,
        })
    }

    /// Every node inside with full arms; derivatives at the border of the
    /// grid become one-sided. For tests on prescribed fields.
    pub fn unmasked(grid: GridSpec) -> Self {
        let n = grid.len();
        Self {
            grid,
            kind: vec![NodeKind::Inside; n],
            arms: vec![[1.0; 4]; n],
            unknown: (0..n as u32).collect(),
            nodes: (0..n).collect(),
            frac: vec![1.0; n],
        }
    }

    pub fn unknowns(&self) -> usize {
        self.nodes.len()
    }

    #[inline]
    pub fn neighbor(&self, idx: usize, dir: usize) -> Option<usize> {
        neighbor(&self.grid, idx, dir)
    }

    pub fn mask(&self) -> NodeMask {
        NodeMask {
            grid: self.grid,
            inside: self.kind.iter().map(|k| k.is_inside()).collect(),
        }
    }

    /// `|Ω|` from cell fractions.
    pub fn area(&self) -> f64 {
        self.frac.iter().sum::<f64>() * self.grid.h * self.grid.h
    }
}

#[inline]
pub fn neighbor(grid: &GridSpec, idx: usize, dir: usize) -> Option<usize> {
    let (i, j) = grid.coords(idx);
    let (di, dj) = DIRS[dir];
    let ni = i as i64 + di;
    let nj = j as i64 + dj;
    if ni < 0 || nj < 0 || ni >= grid.nx as i64 || nj >= grid.ny as i64 {
        None
    } else {
        Some(grid.index(ni as usize, nj as usize))
    }
}

fn neighbors8(grid: &GridSpec, idx: usize) -> impl Iterator<Item = usize> + '_ {
    let (i, j) = grid.coords(idx);
    (-1i64..=1).flat_map(move |dj| {
        (-1i64..=1).filter_map(move |di| {
            let (ni, nj) = (i as i64 + di, j as i64 + dj);
            if (di == 0 && dj == 0) || ni < 0 || nj < 0 || ni >= grid.nx as i64 || nj >= grid.ny as i64 {
                None
            } else {
                Some(grid.index(ni as usize, nj as usize))
            }
        })
    })
}

/// Fraction along `[p_in, p_out]` where membership switches, by bisection.
fn boundary_fraction(region: &impl Region, p_in: Point, p_out: Point) -> f64 {
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if region.contains(p_in.lerp(p_out, mid)) {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-14 {
            break;
        }
    }
    (0.5 * (lo + hi)).max(MIN_ARM)
}

/// 4×4 subsampled fraction of the cell of side `h` centred at `p`.
fn cell_fraction(region: &impl Region, p: Point, h: f64) -> f64 {
    let mut count = 0;
    for a in 0..4 {
        for b in 0..4 {
            let q = p + Point::new((a as f64 + 0.5) / 4.0 - 0.5, (b as f64 + 0.5) / 4.0 - 0.5) * h;
            if region.contains(q) {
                count += 1;
            }
        }
    }
    count as f64 / 16.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{make_domain, ConvexBody, ThicknessProfile};

    #[test]
    fn arms_match_circle_intersections() {
        let core = ConvexBody::disc(Point::ORIGIN, 0.5, 512).unwrap();
        let dom = make_domain(core.clone(), ThicknessProfile::constant(&core, 0.5).unwrap()).unwrap();
        let grid = dom.grid(0.1, 3).unwrap();
        let lat = Lattice::new(&dom, grid).unwrap();
        // node (0.9, 0) has its +x arm cut at x = 1 (up to polygonal sampling)
        let i = ((0.9 - grid.origin.x) / grid.h).round() as usize;
        let j = ((0.0 - grid.origin.y) / grid.h).round() as usize;
        let idx = grid.index(i, j);
        assert_eq!(lat.kind[idx], NodeKind::Cut);
        assert!((lat.arms[idx][1] - 1.0).abs() < 1e-9);
        let area = lat.area();
        assert!((area - std::f64::consts::PI).abs() < 0.02, "{area}");
        let idx2 = grid.index(i + 2, j);
        assert_eq!(lat.kind[idx2], NodeKind::Ghost2);
    }
}

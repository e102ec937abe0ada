//! Uniform Cartesian node lattice shared by domains, fields and masks.

use crate::error::{GnpError, Result};
use crate::geometry::Point;
use serde::{Deserialize, Serialize};

/// Nodes sit at `origin + (i h, j h)` for `0 <= i < nx`, `0 <= j < ny`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub origin: Point,
    pub h: f64,
    pub nx: usize,
    pub ny: usize,
}

impl GridSpec {
    /// Smallest lattice-aligned grid (origin on integer multiples of `h`)
    /// covering `[lo, hi]` plus `margin` extra nodes on every side. Grids
    /// built with the same `h` share nodes, so masks and fields on them are
    /// directly comparable after [`GridSpec::union`].
    pub fn covering(lo: Point, hi: Point, h: f64, margin: usize) -> Result<Self> {
        if !(h > 0.0) || !h.is_finite() {
            return Err(GnpError::Config(format!("grid spacing {h} must be positive")));
        }
        let m = margin as i64;
        let i0 = (lo.x / h).floor() as i64 - m;
        let j0 = (lo.y / h).floor() as i64 - m;
        let i1 = (hi.x / h).ceil() as i64 + m;
        let j1 = (hi.y / h).ceil() as i64 + m;
        let nx = (i1 - i0 + 1) as usize;
        let ny = (j1 - j0 + 1) as usize;
        if nx.saturating_mul(ny) > 64_000_000 {
            return Err(GnpError::Config(format!("grid of {nx}x{ny} nodes is too large")));
        }
        Ok(Self {
            origin: Point::new(i0 as f64 * h, j0 as f64 * h),
            h,
            nx,
            ny,
        })
    }

    /// Smallest aligned grid containing both.
    pub fn union(&self, other: &GridSpec) -> Result<Self> {
        if (self.h - other.h).abs() > 1e-15 * self.h {
            return Err(GnpError::GridMismatch(format!("spacings {} and {}", self.h, other.h)));
        }
        let lo = Point::new(self.origin.x.min(other.origin.x), self.origin.y.min(other.origin.y));
        let hi = Point::new(
            self.max_corner().x.max(other.max_corner().x),
            self.max_corner().y.max(other.max_corner().y),
        );
        Self::covering(lo, hi, self.h, 0)
    }

    pub fn max_corner(&self) -> Point {
        self.node(self.nx - 1, self.ny - 1)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }

    #[inline]
    pub fn coords(&self, idx: usize) -> (usize, usize) {
        (idx % self.nx, idx / self.nx)
    }

    #[inline]
    pub fn node(&self, i: usize, j: usize) -> Point {
        Point::new(
            self.origin.x + i as f64 * self.h,
            self.origin.y + j as f64 * self.h,
        )
    }

    #[inline]
    pub fn node_at(&self, idx: usize) -> Point {
        let (i, j) = self.coords(idx);
        self.node(i, j)
    }

    /// Cell containing `p` and the local coordinates in `[0, 1]²`, or `None`
    /// when `p` is outside the node hull.
    pub fn locate(&self, p: Point) -> Option<(usize, usize, f64, f64)> {
        let fx = (p.x - self.origin.x) / self.h;
        let fy = (p.y - self.origin.y) / self.h;
        if !(fx >= 0.0 && fy >= 0.0) {
            return None;
        }
        let i = fx.floor() as usize;
        let j = fy.floor() as usize;
        if i + 1 >= self.nx || j + 1 >= self.ny {
            if i + 1 == self.nx && fx == i as f64 && j + 1 < self.ny {
                return Some((i - 1, j, 1.0, fy - j as f64));
            }
            if j + 1 == self.ny && fy == j as f64 && i + 1 < self.nx {
                return Some((i, j - 1, fx - i as f64, 1.0));
            }
            return None;
        }
        Some((i, j, fx - i as f64, fy - j as f64))
    }

    /// Offset of this grid's node `(0,0)` inside `outer`, if aligned.
    pub fn offset_in(&self, outer: &GridSpec) -> Result<(usize, usize)> {
        if (self.h - outer.h).abs() > 1e-15 * self.h {
            return Err(GnpError::GridMismatch(format!("spacings {} and {}", self.h, outer.h)));
        }
        let di = (self.origin.x - outer.origin.x) / self.h;
        let dj = (self.origin.y - outer.origin.y) / self.h;
        let (ri, rj) = (di.round(), dj.round());
        if (di - ri).abs() > 1e-6 || (dj - rj).abs() > 1e-6 || ri < 0.0 || rj < 0.0 {
            return Err(GnpError::GridMismatch("grids are not lattice-aligned".into()));
        }
        let (oi, oj) = (ri as usize, rj as usize);
        if oi + self.nx > outer.nx || oj + self.ny > outer.ny {
            return Err(GnpError::GridMismatch("grid does not fit inside the outer grid".into()));
        }
        Ok((oi, oj))
    }
}

/// Boolean node mask on a grid; each node stands for an `h × h` cell.
#[derive(Clone, Debug, PartialEq)]
pub struct NodeMask {
    pub grid: GridSpec,
    pub inside: Vec<bool>,
}

impl NodeMask {
    pub fn from_fn(grid: GridSpec, f: impl Fn(Point) -> bool) -> Self {
        let inside = (0..grid.len()).map(|idx| f(grid.node_at(idx))).collect();
        Self { grid, inside }
    }

    pub fn count(&self) -> usize {
        self.inside.iter().filter(|b| **b).count()
    }

    /// Cell-count area.
    pub fn area(&self) -> f64 {
        self.count() as f64 * self.grid.h * self.grid.h
    }

    /// Re-expresses the mask on a larger aligned grid.
    pub fn embed(&self, outer: &GridSpec) -> Result<NodeMask> {
        let (oi, oj) = self.grid.offset_in(outer)?;
        let mut inside = vec![false; outer.len()];
        for j in 0..self.grid.ny {
            for i in 0..self.grid.nx {
                inside[outer.index(i + oi, j + oj)] = self.inside[self.grid.index(i, j)];
            }
        }
        Ok(NodeMask { grid: *outer, inside })
    }

    /// Nodes set in `self` but not in `other` (same grid required).
    pub fn count_not_in(&self, other: &NodeMask) -> Result<usize> {
        self.require_same_grid(other)?;
        Ok(self
            .inside
            .iter()
            .zip(&other.inside)
            .filter(|(a, b)| **a && !**b)
            .count())
    }

    fn require_same_grid(&self, other: &NodeMask) -> Result<()> {
        if self.grid != other.grid {
            return Err(GnpError::GridMismatch(format!("{:?} vs {:?}", self.grid, other.grid)));
        }
        Ok(())
    }

    /// Cell-count area of the symmetric difference.
    pub fn symmetric_difference_area(&self, other: &NodeMask) -> Result<f64> {
        self.require_same_grid(other)?;
        let n = self
            .inside
            .iter()
            .zip(&other.inside)
            .filter(|(a, b)| a != b)
            .count();
        Ok(n as f64 * self.grid.h * self.grid.h)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn covering_is_aligned() {
        let g = GridSpec::covering(Point::new(-1.03, -0.51), Point::new(1.0, 0.5), 0.25, 1).unwrap();
        assert_eq!(g.origin, Point::new(-1.5, -1.0));
        assert!(g.max_corner().x >= 1.0 + 0.25 - 1e-12);
        let other = GridSpec::covering(Point::new(0.0, 0.0), Point::new(3.0, 3.0), 0.25, 0).unwrap();
        let u = g.union(&other).unwrap();
        assert!(g.offset_in(&u).is_ok());
        assert!(other.offset_in(&u).is_ok());
    }

    #[test]
    fn locate_and_bounds() {
        let g = GridSpec::covering(Point::new(0.0, 0.0), Point::new(1.0, 1.0), 0.5, 0).unwrap();
        assert_eq!(g.nx, 3);
        assert_eq!(g.locate(Point::new(0.75, 0.25)), Some((1, 0, 0.5, 0.5)));
        assert_eq!(g.locate(Point::new(1.0, 0.25)), Some((1, 0, 1.0, 0.5)));
        assert_eq!(g.locate(Point::new(-0.1, 0.25)), None);
    }
}

use super::convex::{bounds_of, ConvexBody, RayLocation};
use super::point::{segments_cross, Point};
use super::profile::ThicknessProfile;
use crate::error::{GnpError, Result};
use crate::grid::{GridSpec, NodeMask};

/// Anything with a point-membership test.
pub trait Region {
    fn contains(&self, p: Point) -> bool;
}

/// `Ω = int(C) ∪ {c + rν(c) : 0 <= r < d(c)}` for a core `C` and a thickness
/// profile `d`.
#[derive(Clone, Debug)]
pub struct GnpDomain {
    core: ConvexBody,
    profile: ThicknessProfile,
    outer: Vec<Point>,
    bbox: (Point, Point),
}

impl GnpDomain {
    /// Builds the domain and checks that the induced outer curve
    /// `c + d(c)ν(c)` has no proper self-crossings.
    pub fn new(core: ConvexBody, profile: ThicknessProfile) -> Result<Self> {
        if core.len() != profile.len() {
            return Err(GnpError::SampleMismatch {
                core: core.len(),
                profile: profile.len(),
            });
        }
        let outer: Vec<Point> = core
            .samples()
            .iter()
            .zip(profile.values())
            .map(|(s, d)| s.point + s.normal * *d)
            .collect();
        check_simple(&outer)?;
        let (clo, chi) = core.bounds();
        let (olo, ohi) = bounds_of(outer.iter().copied());
        let bbox = (
            Point::new(clo.x.min(olo.x), clo.y.min(olo.y)),
            Point::new(chi.x.max(ohi.x), chi.y.max(ohi.y)),
        );
        Ok(Self {
            core,
            profile,
            outer,
            bbox,
        })
    }

    pub fn core(&self) -> &ConvexBody {
        &self.core
    }

    pub fn profile(&self) -> &ThicknessProfile {
        &self.profile
    }

    /// Outer points `c_i + d_i ν_i`, one per core sample (repeats allowed
    /// where `d` vanishes on a fan).
    pub fn outer_boundary(&self) -> &[Point] {
        &self.outer
    }

    /// Axis-aligned bounding box `(min, max)`.
    pub fn bounding_box(&self) -> (Point, Point) {
        self.bbox
    }

    /// True when `d` vanishes somewhere, so `∂Ω` touches `∂C`.
    pub fn touches_core(&self) -> bool {
        self.profile.min() <= 0.0
    }

    /// Same core with a different profile.
    pub fn with_profile(&self, profile: ThicknessProfile) -> Result<Self> {
        Self::new(self.core.clone(), profile)
    }

    /// `|Ω|` from the sampled shell area plus `|C|`.
    pub fn area(&self) -> f64 {
        self.core.area() + self.profile.shell_area(&self.core)
    }

    /// Thickness interpolated along the normal ray through `p`, with the
    /// distance from `∂C`; `None` inside `C`.
    pub fn ray_through(&self, p: Point) -> Option<(f64, f64)> {
        match self.core.locate(p) {
            RayLocation::Interior => None,
            RayLocation::Ray { i0, i1, lambda, r } => Some((self.profile.interpolate(i0, i1, lambda), r)),
        }
    }

    /// Grid covering the domain with `margin` spare nodes on every side.
    pub fn grid(&self, h: f64, margin: usize) -> Result<GridSpec> {
        GridSpec::covering(self.bbox.0, self.bbox.1, h, margin)
    }

    pub fn mask(&self, grid: &GridSpec) -> NodeMask {
        NodeMask::from_fn(*grid, |p| self.contains(p))
    }

    /// Star-shapedness with respect to every point of `C`, tested on segments
    /// `[c, x]` at `samples` points each.
    pub fn is_star_shaped(&self, samples: usize) -> bool {
        let xs: Vec<Point> = self
            .core
            .samples()
            .iter()
            .zip(self.profile.values())
            .map(|(s, d)| s.point + s.normal * (0.99 * d))
            .collect();
        is_star_shaped(self, &self.core, &xs, samples)
    }
}

impl Region for GnpDomain {
    fn contains(&self, p: Point) -> bool {
        match self.ray_through(p) {
            None => true,
            Some((d, r)) => r < d,
        }
    }
}

/// Shorthand for [`GnpDomain::new`].
pub fn make_domain(core: ConvexBody, profile: ThicknessProfile) -> Result<GnpDomain> {
    GnpDomain::new(core, profile)
}

fn check_simple(outer: &[Point]) -> Result<()> {
    // drop zero-length edges, remembering original indices
    let n = outer.len();
    let edges: Vec<(usize, Point, Point)> = (0..n)
        .map(|i| (i, outer[i], outer[(i + 1) % n]))
        .filter(|(_, a, b)| a.dist(*b) > 0.0)
        .collect();
    let boxes: Vec<(Point, Point)> = edges
        .iter()
        .map(|(_, a, b)| bounds_of([*a, *b].into_iter()))
        .collect();
    for i in 0..edges.len() {
        for j in i + 2..edges.len() {
            if i == 0 && j == edges.len() - 1 {
                continue;
            }
            let (bi, bj) = (boxes[i], boxes[j]);
            if bi.1.x < bj.0.x || bj.1.x < bi.0.x || bi.1.y < bj.0.y || bj.1.y < bi.0.y {
                continue;
            }
            let (_, p1, p2) = edges[i];
            let (_, q1, q2) = edges[j];
            if segments_cross(p1, p2, q1, q2) {
                return Err(GnpError::NonSimpleBoundary {
                    first: edges[i].0,
                    second: edges[j].0,
                });
            }
        }
    }
    Ok(())
}

/// Checks that `[c, x]` lies in `region` for every test point `x` and every
/// `c` from a subsample of `∂C` plus its centroid, probing `samples` points
/// per segment. Up to `samples` test points are used.
pub fn is_star_shaped(region: &impl Region, core: &ConvexBody, xs: &[Point], samples: usize) -> bool {
    let samples = samples.max(2);
    let stride = |len: usize, want: usize| (len / want.max(1)).max(1);
    let mut centers: Vec<Point> = core
        .samples()
        .iter()
        .step_by(stride(core.len(), 24))
        .map(|s| s.point)
        .collect();
    centers.push(core.centroid());
    xs.iter().step_by(stride(xs.len(), samples)).all(|&x| {
        !region.contains(x)
            || centers.iter().all(|&c| {
                (1..samples).all(|k| region.contains(c.lerp(x, k as f64 / samples as f64)))
            })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::TAU;

    fn annulus() -> GnpDomain {
        let core = ConvexBody::disc(Point::ORIGIN, 0.5, 256).unwrap();
        let prof = ThicknessProfile::constant(&core, 0.5).unwrap();
        make_domain(core, prof).unwrap()
    }

    #[test]
    fn concentric_membership() {
        let dom = annulus();
        assert!(dom.contains(Point::ORIGIN));
        assert!(dom.contains(Point::new(0.9, 0.0)));
        assert!(dom.contains(Point::new(0.99, 0.0)));
        assert!(!dom.contains(Point::new(1.5, 0.0)));
        assert!(dom.is_star_shaped(100));
    }

    #[test]
    fn sample_mismatch_is_rejected() {
        let core = ConvexBody::disc(Point::ORIGIN, 0.5, 64).unwrap();
        let prof = ThicknessProfile::new(vec![0.3; 65]).unwrap();
        assert_eq!(
            make_domain(core, prof).unwrap_err(),
            GnpError::SampleMismatch { core: 64, profile: 65 }
        );
    }

    #[test]
    fn bowtie_is_not_simple() {
        let bowtie = [
            Point::new(0.0, 0.0),
            Point::new(1.0, 1.0),
            Point::new(1.0, 0.0),
            Point::new(0.0, 1.0),
        ];
        assert!(matches!(check_simple(&bowtie), Err(GnpError::NonSimpleBoundary { .. })));
        let square = [
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(1.0, 1.0),
            Point::new(0.0, 1.0),
        ];
        assert!(check_simple(&square).is_ok());
    }

    #[test]
    fn narrow_notch_breaks_star_shape() {
        let core = ConvexBody::disc(Point::ORIGIN, 0.5, 256).unwrap();
        let prof = ThicknessProfile::from_fn(&core, |_, s| {
            let th = s.normal.angle().rem_euclid(TAU);
            if (th - 1.0).abs() < 0.05 {
                0.05
            } else {
                1.0
            }
        })
        .unwrap();
        let dom = make_domain(core, prof).unwrap();
        assert!(!dom.is_star_shaped(100));
    }

    #[test]
    fn segment_core_points() {
        let core = crate::geometry::tails_core(128, 64, 20.0).unwrap();
        let prof = ThicknessProfile::semicircle_with_tails(&core, 20.0).unwrap();
        let dom = make_domain(core, prof).unwrap();
        assert!(dom.touches_core());
        assert!(dom.contains(Point::new(0.0, 0.5)));
        assert!(!dom.contains(Point::new(0.0, -0.1)));
        assert!(dom.contains(Point::new(5.0, 0.1)));
        assert!(!dom.contains(Point::new(5.0, 0.2)));
    }
}

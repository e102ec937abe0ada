use super::contour::{inside_loops, marching_squares, Contours};
use crate::error::{GnpError, Result};
use crate::geometry::{GnpDomain, Point, Region};
use crate::grid::NodeMask;
use crate::parallel::par_map;
use crate::solver::ScalarField;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SliceOptions {
    /// Levels above `(1 − eps_crit)·max u` are refused.
    pub eps_crit: f64,
    /// Slices with fewer cells than this are degenerate.
    pub min_cells: f64,
    /// Gradient floor relative to `max |∇u|`.
    pub grad_floor_rel: f64,
}

impl Default for SliceOptions {
    fn default() -> Self {
        Self {
            eps_crit: 0.02,
            min_cells: 4.0,
            grad_floor_rel: 1e-6,
        }
    }
}

impl SliceOptions {
    /// No critical-value guard (for level quadratures up to `max u`).
    pub fn unguarded() -> Self {
        Self {
            eps_crit: 0.0,
            ..Self::default()
        }
    }
}

/// The superlevel set `Ω^t = {u > t}` and its level line `Γ^t`.
#[derive(Clone, Debug)]
pub struct LevelSetSlice {
    pub t: f64,
    pub contours: Contours,
    pub area: f64,
    pub perimeter: f64,
    /// `d_t(c_i)` per core sample; `None` where the ray misses the level.
    pub thickness: Vec<Option<f64>>,
    /// `|∇u|` at the contour vertices.
    pub grad_on_contour: Vec<f64>,
    /// Nodes with `u > t`.
    pub mask: NodeMask,
}

impl LevelSetSlice {
    pub fn components(&self) -> usize {
        self.contours.loops.len() + self.contours.open.len()
    }

    /// `∫_{Γ^t} φ dσ` by the midpoint rule on contour segments.
    pub fn line_integral(&self, phi: impl Fn(Point) -> f64) -> f64 {
        self.contours
            .segments()
            .map(|(a, b)| a.dist(b) * phi(a.lerp(b, 0.5)))
            .sum()
    }

    pub fn contains(&self, p: Point) -> bool {
        inside_loops(&self.contours.loops, p)
    }

    pub fn defined_thickness(&self) -> impl Iterator<Item = f64> + '_ {
        self.thickness.iter().flatten().copied()
    }

    pub fn min_thickness(&self) -> Option<f64> {
        self.defined_thickness().reduce(f64::min)
    }

    pub fn max_thickness(&self) -> Option<f64> {
        self.defined_thickness().reduce(f64::max)
    }
}

/// `{u > t}` under bilinear interpolation.
pub struct Superlevel<'a> {
    pub field: &'a ScalarField,
    pub t: f64,
}

impl Region for Superlevel<'_> {
    fn contains(&self, p: Point) -> bool {
        self.field.sample(p) > self.t
    }
}

/// Largest admissible level.
pub fn level_limit(field: &ScalarField, opts: &SliceOptions) -> f64 {
    (1.0 - opts.eps_crit) * field.max_value()
}

pub fn extract_slice(field: &ScalarField, domain: &GnpDomain, t: f64) -> Result<LevelSetSlice> {
    extract_slice_with(field, domain, t, &SliceOptions::default())
}

pub fn extract_slice_with(field: &ScalarField, domain: &GnpDomain, t: f64, opts: &SliceOptions) -> Result<LevelSetSlice> {
    let limit = level_limit(field, opts);
    if !(t >= 0.0 && t < limit) {
        return Err(GnpError::LevelOutOfRange { t, limit });
    }
    let grid = field.grid();
    let contours = marching_squares(grid, field.extended(), t);
    let area = contours.area;
    if area < opts.min_cells * grid.h * grid.h {
        return Err(GnpError::DegenerateSlice { t, area });
    }
    let perimeter = contours.length();
    let grad = field.gradient();
    let grad_on_contour = contours.vertices().map(|p| grad.magnitude(p)).collect();
    let thickness = (0..domain.core().len())
        .map(|i| ray_level(field, domain, i, t).ok())
        .collect();
    let mask = NodeMask {
        grid: *grid,
        inside: field.extended().iter().map(|v| *v > t).collect(),
    };
    Ok(LevelSetSlice {
        t,
        contours,
        area,
        perimeter,
        thickness,
        grad_on_contour,
        mask,
    })
}

/// Slices at several levels, computed concurrently, in input order.
pub fn extract_slices(
    field: &ScalarField,
    domain: &GnpDomain,
    levels: &[f64],
    opts: &SliceOptions,
) -> Vec<Result<LevelSetSlice>> {
    par_map(levels, |&t| extract_slice_with(field, domain, t, opts))
}

/// `d_t(c_i) = sup{r > 0 : u(c_i + r ν_i) > t}` by a downward scan from
/// beyond `d(c_i)` and bisection.
pub fn ray_level(field: &ScalarField, domain: &GnpDomain, index: usize, t: f64) -> Result<f64> {
    let s = &domain.core().samples()[index];
    let u = |r: f64| field.sample(s.point + s.normal * r);
    if u(0.0) <= t {
        return Err(GnpError::RayMisses { index, t });
    }
    let h = field.h();
    let step = 0.5 * h;
    let mut hi = domain.profile().values()[index] + 2.0 * h;
    let mut lo = hi;
    while lo > 0.0 {
        lo = (hi - step).max(0.0);
        if u(lo) > t {
            break;
        }
        hi = lo;
    }
    for _ in 0..60 {
        if hi - lo <= 1e-12 {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if u(mid) > t {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// `d_t(c)` for ascending levels.
pub fn thickness_curve(field: &ScalarField, domain: &GnpDomain, index: usize, levels: &[f64]) -> Result<Vec<f64>> {
    if levels.windows(2).any(|w| w[1] < w[0]) {
        return Err(GnpError::Config("levels must be sorted ascending".into()));
    }
    let max = field.max_value();
    if let Some(&t) = levels.iter().find(|t| !(**t >= 0.0 && **t < max)) {
        return Err(GnpError::LevelOutOfRange { t, limit: max });
    }
    levels.iter().map(|&t| ray_level(field, domain, index, t)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{make_domain, ConvexBody, ThicknessProfile};
    use crate::solver::{solve_poisson, SourceSpec};
    use std::f64::consts::PI;

    fn radial(h: f64) -> (GnpDomain, ScalarField) {
        let core = ConvexBody::disc(Point::ORIGIN, 0.5, 128).unwrap();
        let dom = make_domain(core.clone(), ThicknessProfile::constant(&core, 0.5).unwrap()).unwrap();
        let u = solve_poisson(&dom, &SourceSpec::constant(1.0), h).unwrap();
        (dom, u)
    }

    #[test]
    fn radial_slice_geometry() {
        let (dom, u) = radial(1.0 / 64.0);
        let s = extract_slice(&u, &dom, 0.04).unwrap();
        let rt = (-0.32f64).exp();
        assert_eq!(s.components(), 1);
        assert!((s.perimeter - 2.0 * PI * rt).abs() < 5e-3, "{}", s.perimeter);
        assert!((s.area - PI * rt * rt).abs() < 5e-3, "{}", s.area);
        for d in &s.thickness {
            assert!((d.unwrap() - (rt - 0.5)).abs() < 2e-3);
        }
        let zero = extract_slice(&u, &dom, 0.0).unwrap();
        for d in zero.defined_thickness() {
            assert!((d - 0.5).abs() < 1e-3, "{d}");
        }
    }

    #[test]
    fn level_guards() {
        let (dom, u) = radial(1.0 / 32.0);
        let max = u.max_value();
        assert!(matches!(extract_slice(&u, &dom, max), Err(GnpError::LevelOutOfRange { .. })));
        assert!(matches!(extract_slice(&u, &dom, -0.1), Err(GnpError::LevelOutOfRange { .. })));
        assert!(matches!(
            extract_slice_with(&u, &dom, max * 0.99999, &SliceOptions::unguarded()),
            Err(GnpError::DegenerateSlice { .. })
        ));
        assert!(matches!(ray_level(&u, &dom, 0, 0.1), Err(GnpError::RayMisses { .. })));
        let curve = thickness_curve(&u, &dom, 3, &[0.0, 0.01, 0.02, 0.04]).unwrap();
        assert!(curve.windows(2).all(|w| w[1] < w[0]));
        assert!(thickness_curve(&u, &dom, 3, &[0.02, 0.01]).is_err());
    }
}

use super::slice::{extract_slice, extract_slices, ray_level, LevelSetSlice, SliceOptions, Superlevel};
use crate::error::{GnpError, Result};
use crate::geometry::{is_star_shaped, ConvexBody, GnpDomain, Point};
use crate::solver::{bilinear, ScalarField, SourceSpec};
use serde::Serialize;

fn rel_err(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

/// `max |∇u|` times the relative floor.
pub fn grad_floor(field: &ScalarField, opts: &SliceOptions) -> f64 {
    opts.grad_floor_rel * field.gradient().max_magnitude()
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct OdeCheck {
    /// `(d_{t+δt} − d_t)/δt`.
    pub lhs: f64,
    /// `−1/|∇u|` at `c + d_t ν`.
    pub rhs: f64,
    pub rel_err: f64,
    /// `|∇u| · lhs`, which should be `−1`.
    pub flux_product: f64,
}

pub fn check_thickness_ode(field: &ScalarField, domain: &GnpDomain, index: usize, t: f64, dt: f64) -> Result<OdeCheck> {
    let d0 = ray_level(field, domain, index, t)?;
    let d1 = ray_level(field, domain, index, t + dt)?;
    let s = &domain.core().samples()[index];
    let g = field.gradient().magnitude(s.point + s.normal * d0);
    let floor = grad_floor(field, &SliceOptions::default());
    if g < floor {
        return Err(GnpError::VanishingGradient { value: g, floor });
    }
    let lhs = (d1 - d0) / dt;
    let rhs = -1.0 / g;
    Ok(OdeCheck {
        lhs,
        rhs,
        rel_err: rel_err(lhs, rhs),
        flux_product: g * lhs,
    })
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct EstimateCheck {
    pub d_reconstructed: f64,
    pub d_geometric: f64,
    pub rel_err: f64,
}

/// `d(c) = ∫₀^{u(c)} ds / |∇u(c + d_s ν)|` by the trapezoid rule.
pub fn check_estimate_d(field: &ScalarField, domain: &GnpDomain, index: usize, n_steps: usize) -> Result<EstimateCheck> {
    let n_steps = n_steps.max(1);
    let s = &domain.core().samples()[index];
    let top = field.sample(s.point);
    let grad = field.gradient();
    let floor = grad_floor(field, &SliceOptions::default());
    let ds = top / n_steps as f64;
    let mut acc = 0.0;
    for k in 0..=n_steps {
        let level = k as f64 * ds;
        let r = if k == n_steps { 0.0 } else { ray_level(field, domain, index, level)? };
        let g = grad.magnitude(s.point + s.normal * r);
        if g < floor {
            return Err(GnpError::VanishingGradient { value: g, floor });
        }
        let w = if k == 0 || k == n_steps { 0.5 } else { 1.0 };
        acc += w / g;
    }
    let d_reconstructed = acc * ds;
    let d_geometric = domain.profile().values()[index];
    Ok(EstimateCheck {
        d_reconstructed,
        d_geometric,
        rel_err: rel_err(d_reconstructed, d_geometric),
    })
}

/// Data entering the split form of the curvature.
#[derive(Clone, Copy, Debug)]
pub enum Companion<'a> {
    /// Level lines of `u` with `−Δu = f`.
    Source { source: &'a SourceSpec, core: &'a ConvexBody },
    /// Level lines of `v` with `−Δv = u`.
    Field(&'a ScalarField),
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct CurvatureSample {
    pub point: Point,
    /// `−div(∇w/|∇w|)`, positive on convex level lines.
    pub kappa: f64,
    /// `−Δw/|∇w|` from the equation (`f/|∇u|` or `u/|∇v|`).
    pub term1: f64,
    /// `∇²w(∇w, ∇w)/|∇w|³`.
    pub term2: f64,
}

impl CurvatureSample {
    pub fn split_form(&self) -> f64 {
        self.term1 + self.term2
    }
}

/// Curvature at every vertex of `slice`, extracted from `field`.
pub fn curvature_on_slice(field: &ScalarField, slice: &LevelSetSlice, companion: Companion) -> Result<Vec<CurvatureSample>> {
    let grad = field.gradient();
    let (div, hess) = grad.curvature_terms();
    let floor = grad_floor(field, &SliceOptions::default());
    slice
        .contours
        .vertices()
        .map(|p| {
            let g = grad.magnitude(p);
            if g < floor {
                return Err(GnpError::VanishingGradient { value: g, floor });
            }
            let rhs = match companion {
                Companion::Source { source, core } => source.value(p, core),
                Companion::Field(u) => u.sample(p),
            };
            Ok(CurvatureSample {
                point: p,
                kappa: -bilinear(grad.grid(), div, p),
                term1: rhs / g,
                term2: bilinear(grad.grid(), hess, p),
            })
        })
        .collect()
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct DetachmentCheck {
    /// `d(c) − d_t(c)`.
    pub lhs: f64,
    /// `t / |∇u|` at the boundary foot `c + d(c) ν`.
    pub rhs: f64,
    pub rel_err: f64,
}

pub fn check_first_order_detachment(
    field: &ScalarField,
    domain: &GnpDomain,
    index: usize,
    t_small: f64,
) -> Result<DetachmentCheck> {
    let limit = 0.1 * field.max_value();
    if !(t_small >= 0.0 && t_small <= limit) {
        return Err(GnpError::LevelOutOfRange { t: t_small, limit });
    }
    let s = &domain.core().samples()[index];
    let d = domain.profile().values()[index];
    let g = field.gradient().magnitude(s.point + s.normal * d);
    let floor = grad_floor(field, &SliceOptions::default());
    if g < floor {
        return Err(GnpError::VanishingGradient { value: g, floor });
    }
    if t_small == 0.0 {
        return Ok(DetachmentCheck {
            lhs: 0.0,
            rhs: 0.0,
            rel_err: 0.0,
        });
    }
    let lhs = d - ray_level(field, domain, index, t_small)?;
    let rhs = t_small / g;
    Ok(DetachmentCheck {
        lhs,
        rhs,
        rel_err: rel_err(lhs, rhs),
    })
}

/// Level grid for quadratures over `t`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LevelGrid {
    /// Midpoints of `n` equal subintervals of `[0, max]`.
    #[default]
    Uniform,
    /// Subintervals holding equal area of `Ω`.
    EqualArea,
}

/// Quadrature levels and weights over `[0, max u]`.
pub fn quadrature_levels(field: &ScalarField, n: usize, grid: LevelGrid) -> Vec<(f64, f64)> {
    let max = field.max_value();
    let n = n.max(1);
    let bounds: Vec<f64> = match grid {
        LevelGrid::Uniform => (0..=n).map(|k| max * k as f64 / n as f64).collect(),
        LevelGrid::EqualArea => {
            let lat = field.lattice();
            let mut vals: Vec<(f64, f64)> = lat
                .nodes
                .iter()
                .map(|&i| (field.values()[i], lat.frac[i]))
                .collect();
            vals.sort_by(|a, b| a.0.total_cmp(&b.0));
            let total: f64 = vals.iter().map(|v| v.1).sum();
            let mut out = vec![0.0];
            let mut acc = 0.0;
            let mut k = 1;
            for (v, w) in vals {
                acc += w;
                while k < n && acc >= total * k as f64 / n as f64 {
                    out.push(v.max(*out.last().unwrap_or(&0.0)));
                    k += 1;
                }
            }
            while out.len() < n {
                out.push(max);
            }
            out.push(max);
            out
        }
    };
    bounds
        .windows(2)
        .filter(|w| w[1] > w[0])
        .map(|w| (0.5 * (w[0] + w[1]), w[1] - w[0]))
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityCheck {
    pub name: &'static str,
    pub lhs: f64,
    pub rhs: f64,
    pub rel_err: f64,
    pub skipped_levels: usize,
    /// Total width in `t` of the skipped levels.
    pub skipped_measure: f64,
}

fn level_integral(
    field: &ScalarField,
    domain: &GnpDomain,
    levels: &[(f64, f64)],
    integrand: impl Fn(&LevelSetSlice) -> f64 + Sync,
) -> (f64, usize, f64) {
    let opts = SliceOptions::unguarded();
    let ts: Vec<f64> = levels.iter().map(|l| l.0).collect();
    let slices = extract_slices(field, domain, &ts, &opts);
    let mut acc = 0.0;
    let (mut skipped, mut measure) = (0, 0.0);
    for (slice, &(_, w)) in slices.iter().zip(levels) {
        match slice {
            Ok(s) => acc += w * integrand(s),
            Err(_) => {
                skipped += 1;
                measure += w;
            }
        }
    }
    (acc, skipped, measure)
}

/// The co-area identities: (i) `∫|∇u| = ∫|Γ^t| dt`, (ii) `∫f = ∫∫_{Γ^t} f/|∇u|`,
/// and with `v` (iii) `∫u = ∫∫_{Γ_v^s} u/|∇v|`.
pub fn check_coarea(
    u: &ScalarField,
    v: Option<&ScalarField>,
    domain: &GnpDomain,
    source: &SourceSpec,
    n_levels: usize,
    grid: LevelGrid,
) -> Result<Vec<IdentityCheck>> {
    if n_levels < 50 {
        return Err(GnpError::Config(format!("co-area checks need at least 50 levels, got {n_levels}")));
    }
    let mut out = Vec::new();
    let identity = |name, lhs: f64, (rhs, skipped, measure): (f64, usize, f64)| IdentityCheck {
        name,
        lhs,
        rhs,
        rel_err: rel_err(lhs, rhs),
        skipped_levels: skipped,
        skipped_measure: measure,
    };
    let gu = u.gradient();
    let levels = quadrature_levels(u, n_levels, grid);
    out.push(identity(
        "grad_norm",
        gu.integral_of_magnitude(),
        level_integral(u, domain, &levels, |s| s.perimeter),
    ));
    let core = domain.core();
    out.push(identity(
        "source",
        source.total_mass(core),
        level_integral(u, domain, &levels, |s| {
            s.line_integral(|p| {
                let g = gu.magnitude(p);
                if g > 0.0 {
                    source.value(p, core) / g
                } else {
                    0.0
                }
            })
        }),
    ));
    if let Some(v) = v {
        let gv = v.gradient();
        let levels = quadrature_levels(v, n_levels, grid);
        out.push(identity(
            "biharmonic",
            u.integral(),
            level_integral(v, domain, &levels, |s| {
                s.line_integral(|p| {
                    let g = gv.magnitude(p);
                    if g > 0.0 {
                        u.sample(p) / g
                    } else {
                        0.0
                    }
                })
            }),
        ));
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct GreenCheck {
    pub t: f64,
    /// `∫_{Γ^t} |∇u| dσ`.
    pub flux: f64,
    /// `∫_{Ω^t} f`.
    pub source_mass: f64,
    pub rel_err: f64,
    pub perimeter: f64,
    pub max_grad: f64,
    /// `|Γ^t| ≥ ∫_{Ω^t} f / max_{Γ^t} |∇u|`.
    pub inequality_holds: bool,
}

/// `∫_{Ω^t} f` over the grid cells, splitting cut cells by the contour.
fn source_mass_above(field: &ScalarField, domain: &GnpDomain, source: &SourceSpec, t: f64) -> f64 {
    let grid = field.grid();
    let data = field.extended();
    let h = grid.h;
    let core = domain.core();
    let mut acc = 0.0;
    for j in 0..grid.ny - 1 {
        for i in 0..grid.nx - 1 {
            let corners = [grid.index(i, j), grid.index(i + 1, j), grid.index(i + 1, j + 1), grid.index(i, j + 1)];
            let above = corners.iter().filter(|c| data[**c] > t).count();
            if above == 0 {
                continue;
            }
            let center = grid.node(i, j) + Point::new(0.5 * h, 0.5 * h);
            if above == 4 {
                acc += source.cell_average(center, h, core) * h * h;
            } else {
                // 8×8 subsampling of the bilinear superlevel set
                let mut sub = 0.0;
                for a in 0..8 {
                    for b in 0..8 {
                        let q = grid.node(i, j) + Point::new((a as f64 + 0.5) / 8.0, (b as f64 + 0.5) / 8.0) * h;
                        if field.sample(q) > t {
                            sub += source.value(q, core);
                        }
                    }
                }
                acc += sub / 64.0 * h * h;
            }
        }
    }
    acc
}

pub fn check_green_per_slice(field: &ScalarField, domain: &GnpDomain, source: &SourceSpec, t: f64) -> Result<GreenCheck> {
    let slice = extract_slice(field, domain, t)?;
    let grad = field.gradient();
    let flux = slice.line_integral(|p| grad.magnitude(p));
    let source_mass = source_mass_above(field, domain, source, t);
    let max_grad = slice.grad_on_contour.iter().copied().fold(0.0, f64::max);
    Ok(GreenCheck {
        t,
        flux,
        source_mass,
        rel_err: rel_err(flux, source_mass),
        perimeter: slice.perimeter,
        max_grad,
        inequality_holds: max_grad > 0.0 && slice.perimeter >= source_mass / max_grad * (1.0 - 1e-9),
    })
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct InclusionCheck {
    /// `t < min_{∂C} u`.
    pub below_core_minimum: bool,
    /// Every core sample lies inside the extracted `Γ^t`.
    pub core_inside_contours: bool,
    pub min_on_core: f64,
}

impl InclusionCheck {
    pub fn consistent(&self) -> bool {
        self.below_core_minimum == self.core_inside_contours
    }
}

pub fn check_strict_inclusion(field: &ScalarField, domain: &GnpDomain, t: f64) -> Result<InclusionCheck> {
    let slice = extract_slice(field, domain, t)?;
    let core = domain.core();
    let min_on_core = core
        .samples()
        .iter()
        .map(|s| field.sample(s.point))
        .fold(f64::INFINITY, f64::min);
    Ok(InclusionCheck {
        below_core_minimum: t < min_on_core,
        core_inside_contours: core.samples().iter().all(|s| slice.contains(s.point)),
        min_on_core,
    })
}

/// Violations of the level-set structure between consecutive slices of one
/// field (levels ascending).
#[derive(Clone, Copy, Debug, Default, Serialize)]
pub struct StructureViolations {
    pub nesting: usize,
    pub monotonicity: usize,
    pub exceeds_profile: usize,
    pub not_star_shaped: usize,
    pub slices: usize,
}

impl StructureViolations {
    pub fn total(&self) -> usize {
        self.nesting + self.monotonicity + self.exceeds_profile + self.not_star_shaped
    }
}

pub fn check_structure(field: &ScalarField, domain: &GnpDomain, slices: &[LevelSetSlice]) -> Result<StructureViolations> {
    let mut out = StructureViolations {
        slices: slices.len(),
        ..Default::default()
    };
    let d = domain.profile().values();
    let tol = 1e-9;
    for (k, s) in slices.iter().enumerate() {
        for (i, dt) in s.thickness.iter().enumerate() {
            if dt.is_some_and(|v| v > d[i] + field.h() * 0.5) {
                out.exceeds_profile += 1;
            }
        }
        if k > 0 {
            let prev = &slices[k - 1];
            if s.t <= prev.t {
                return Err(GnpError::Config("slices must have ascending levels".into()));
            }
            out.nesting += s.mask.count_not_in(&prev.mask)?;
            for (a, b) in prev.thickness.iter().zip(&s.thickness) {
                if let (Some(a), Some(b)) = (a, b) {
                    if *b > *a + tol {
                        out.monotonicity += 1;
                    }
                }
            }
        }
        if s.thickness.iter().all(Option::is_some) {
            let core = domain.core();
            let xs: Vec<Point> = core
                .samples()
                .iter()
                .zip(&s.thickness)
                .map(|(c, dt)| c.point + c.normal * (0.99 * dt.unwrap_or(0.0)))
                .collect();
            let region = Superlevel { field, t: s.t };
            if !is_star_shaped(&region, core, &xs, 64) {
                out.not_star_shaped += 1;
            }
        }
    }
    Ok(out)
}

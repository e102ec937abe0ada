use super::quadrature::gauss_legendre;
use crate::error::{GnpError, Result};
use crate::geometry::{GnpDomain, ThicknessProfile};
use crate::solver::{Discretization, ScalarField, SourceSpec, GRID_MARGIN};
use serde::Serialize;

const RAY_POINTS: usize = 64;

#[derive(Clone, Copy, Debug, Serialize)]
pub struct EnergyRecord {
    pub energy: f64,
    pub epsilon: f64,
    pub energy_plus: f64,
    pub energy_minus: f64,
    /// `(E(d + εδd) − E(d − εδd)) / 2ε`.
    pub variation_lhs: f64,
    /// `∫_{∂C} g² δd dσ` with `g = |∇u||∇v|` on `∂Ω`.
    pub variation_rhs: f64,
    pub ratio: f64,
}

/// `E(d) = ∫_{∂C} ∫₀^{d(c)} (½|∇u|² + ½|∇v|² − f u) dr dσ(c)` with 64 Gauss
/// points per ray.
pub fn energy(u: &ScalarField, v: &ScalarField, domain: &GnpDomain, source: &SourceSpec) -> f64 {
    let gl = gauss_legendre(RAY_POINTS);
    let (gu, gv) = (u.gradient(), v.gradient());
    let core = domain.core();
    core.samples()
        .iter()
        .zip(domain.profile().values())
        .filter(|(s, d)| s.weight > 0.0 && **d > 0.0)
        .map(|(s, &d)| {
            let ray: f64 = gl
                .iter()
                .map(|&(x, w)| {
                    let p = s.point + s.normal * (0.5 * d * (x + 1.0));
                    let (a, b) = (gu.magnitude(p), gv.magnitude(p));
                    w * (0.5 * a * a + 0.5 * b * b - source.value(p, core) * u.sample(p))
                })
                .sum();
            s.weight * 0.5 * d * ray
        })
        .sum()
}

fn solve_pair(domain: &GnpDomain, source: &SourceSpec, disc: &Discretization) -> Result<(ScalarField, ScalarField)> {
    disc.solve_biharmonic(domain, source)
}

/// Central difference of `E` along `δd`, with both perturbed domains solved
/// on one common grid, against the boundary pairing `∫ g² δd`.
pub fn energy_and_variation(
    domain: &GnpDomain,
    source: &SourceSpec,
    delta: &[f64],
    epsilon: f64,
    h: f64,
) -> Result<EnergyRecord> {
    if !(epsilon > 0.0) {
        return Err(GnpError::Config(format!("epsilon must be positive, got {epsilon}")));
    }
    let base = Discretization::new(domain, h)?;
    let (u, v) = solve_pair(domain, source, &base)?;
    let e0 = energy(&u, &v, domain, source);
    let (gu, gv) = (u.gradient(), v.gradient());
    let core = domain.core();
    let g2: Vec<f64> = core
        .samples()
        .iter()
        .zip(domain.profile().values())
        .zip(delta)
        .map(|((s, d), dd)| {
            let x = s.point + s.normal * *d;
            (gu.magnitude(x) * gv.magnitude(x)).powi(2) * dd
        })
        .collect();
    let variation_rhs = core.integrate(&g2);
    let moved = |sign: f64| -> Result<GnpDomain> {
        domain.with_profile(ThicknessProfile::perturbed(domain.profile(), delta, sign * epsilon)?)
    };
    let (plus, minus) = (moved(1.0)?, moved(-1.0)?);
    let grid = plus.grid(h, GRID_MARGIN)?.union(&minus.grid(h, GRID_MARGIN)?)?;
    let on = |d: &GnpDomain| -> Result<f64> {
        let disc = Discretization::on_grid(d, grid)?;
        let (u, v) = solve_pair(d, source, &disc)?;
        Ok(energy(&u, &v, d, source))
    };
    let (energy_plus, energy_minus) = (on(&plus)?, on(&minus)?);
    let variation_lhs = (energy_plus - energy_minus) / (2.0 * epsilon);
    Ok(EnergyRecord {
        energy: e0,
        epsilon,
        energy_plus,
        energy_minus,
        variation_lhs,
        variation_rhs,
        ratio: if variation_rhs != 0.0 { variation_lhs / variation_rhs } else { f64::NAN },
    })
}

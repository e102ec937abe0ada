use crate::error::{GnpError, Result};
use crate::geometry::{ConvexBody, GnpDomain, ThicknessProfile};
use super::families::{FourierFamily, Normalization};
use crate::geometry::make_domain;
use crate::parallel::par_map;
use crate::solver::{Discretization, ScalarField, SourceSpec, EIGEN_TOL};
use serde::Serialize;
use std::io::Write;

/// Which side must win.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Relation {
    /// `lhs ≤ rhs + tol`
    #[serde(rename = "<=")]
    AtMost,
    /// `lhs > rhs`
    #[serde(rename = ">")]
    Exceeds,
}

#[derive(Clone, Debug, Serialize)]
pub struct InequalityReport {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub relation: Relation,
    pub satisfied: bool,
    /// Positive when the inequality holds with room to spare.
    pub slack: f64,
    pub equality_expected: bool,
    pub h: Option<f64>,
    pub seed: Option<u64>,
}

impl InequalityReport {
    pub fn new(name: impl Into<String>, lhs: f64, rhs: f64, relation: Relation, tol: f64) -> Self {
        let (slack, satisfied) = match relation {
            Relation::AtMost => (rhs - lhs, lhs <= rhs + tol),
            Relation::Exceeds => (lhs - rhs, lhs > rhs),
        };
        Self {
            name: name.into(),
            lhs,
            rhs,
            relation,
            satisfied,
            slack,
            equality_expected: false,
            h: None,
            seed: None,
        }
    }

    pub fn with_h(mut self, h: f64) -> Self {
        self.h = Some(h);
        self
    }

    pub fn with_seed(mut self, seed: Option<u64>) -> Self {
        self.seed = seed;
        self
    }
}

pub fn write_reports_json(reports: &[InequalityReport], out: impl Write) -> Result<()> {
    serde_json::to_writer_pretty(out, reports)?;
    Ok(())
}

/// `∫_{∂C} g dσ` with arc-length weights.
fn boundary_integral(core: &ConvexBody, g: &[f64]) -> Result<f64> {
    if g.len() != core.len() {
        return Err(GnpError::SampleMismatch {
            core: core.len(),
            profile: g.len(),
        });
    }
    Ok(core.integrate(g))
}

/// `∫_C f > ∫_{∂C} g`.
pub fn check_condition_cs(source: &SourceSpec, core: &ConvexBody, g: &[f64]) -> Result<InequalityReport> {
    if let Some(v) = g.iter().find(|v| !(**v > 0.0)) {
        return Err(GnpError::Config(format!("boundary datum g must be positive, found {v}")));
    }
    let lhs = source.total_mass(core);
    let rhs = boundary_integral(core, g)?;
    Ok(InequalityReport::new("CS", lhs, rhs, Relation::Exceeds, 0.0))
}

/// Integrals that enter the biharmonic existence condition. No predicate is
/// formed from them.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct CbComponents {
    pub int_f_core: f64,
    pub int_u: f64,
    pub int_sqrt_g_core: f64,
}

pub fn cb_components(source: &SourceSpec, core: &ConvexBody, u: &ScalarField, g: &[f64]) -> Result<CbComponents> {
    let sqrt_g: Vec<f64> = g.iter().map(|v| v.max(0.0).sqrt()).collect();
    Ok(CbComponents {
        int_f_core: source.total_mass(core),
        int_u: u.integral(),
        int_sqrt_g_core: boundary_integral(core, &sqrt_g)?,
    })
}

/// `|∇u|` at the outer end `c + d(c) ν(c)` of every core ray.
pub fn boundary_gradient(u: &ScalarField, domain: &GnpDomain) -> Vec<f64> {
    let grad = u.gradient();
    domain
        .core()
        .samples()
        .iter()
        .zip(domain.profile().values())
        .map(|(s, d)| grad.magnitude(s.point + s.normal * *d))
        .collect()
}

/// Whether strict inclusion at a small level and the integral condition on
/// the measured boundary gradient occur together.
#[derive(Clone, Debug, Serialize)]
pub struct FundamentalLink {
    pub t: f64,
    pub strict_inclusion: bool,
    pub cs: InequalityReport,
}

impl FundamentalLink {
    /// Strict inclusion without the integral condition contradicts the link.
    pub fn consistent(&self) -> bool {
        !self.strict_inclusion || self.cs.satisfied
    }
}

pub fn fundamental_link(u: &ScalarField, domain: &GnpDomain, source: &SourceSpec, t: f64) -> Result<FundamentalLink> {
    let min_on_core = domain
        .core()
        .samples()
        .iter()
        .map(|s| u.sample(s.point))
        .fold(f64::INFINITY, f64::min);
    let g: Vec<f64> = boundary_gradient(u, domain).iter().map(|v| v.max(f64::MIN_POSITIVE)).collect();
    Ok(FundamentalLink {
        t,
        strict_inclusion: t < min_on_core,
        cs: check_condition_cs(source, domain.core(), &g)?,
    })
}

/// Constant thickness with the same shell area: the literal `A/|∂C|` and
/// the root of `Σ (w d + κ d²/2) = A`, which accounts for the curvature of
/// `∂C`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct SteinerThickness {
    pub shell_area: f64,
    pub literal: f64,
    pub exact: f64,
}

pub fn steiner_from_area(core: &ConvexBody, shell_area: f64) -> Result<SteinerThickness> {
    if !(shell_area > 0.0) {
        return Err(GnpError::EmptyShell);
    }
    let p: f64 = core.samples().iter().map(|s| s.weight).sum();
    let half_turn: f64 = 0.5 * core.samples().iter().map(|s| s.turn).sum::<f64>();
    let exact = if half_turn > 0.0 {
        (-p + (p * p + 4.0 * half_turn * shell_area).sqrt()) / (2.0 * half_turn)
    } else {
        shell_area / p
    };
    Ok(SteinerThickness {
        shell_area,
        literal: shell_area / p,
        exact,
    })
}

pub fn steiner_symmetrize(domain: &GnpDomain) -> Result<SteinerThickness> {
    steiner_from_area(domain.core(), domain.profile().shell_area(domain.core()))
}

/// The equal-area constant-profile domain `Ω*`.
pub fn symmetrized_domain(domain: &GnpDomain) -> Result<GnpDomain> {
    let d = steiner_symmetrize(domain)?.exact;
    domain.with_profile(ThicknessProfile::constant(domain.core(), d)?)
}

/// `λ₁(Ω*) ≤ λ₁(Ω)`, stated as `lhs = λ₁(Ω*)`, `rhs = λ₁(Ω)`.
pub fn check_faber_krahn(domain: &GnpDomain, h: f64) -> Result<InequalityReport> {
    let sym = symmetrized_domain(domain)?;
    let lambda = Discretization::new(domain, h)?.eigen_lambda1()?.lambda;
    let lambda_sym = Discretization::new(&sym, h)?.eigen_lambda1()?.lambda;
    let tol = 2.0 * EIGEN_TOL * lambda;
    let mut r = InequalityReport::new("faber_krahn", lambda_sym, lambda, Relation::AtMost, tol).with_h(h);
    r.equality_expected = domain.profile().is_constant(1e-12);
    Ok(r)
}

/// `∫u ≤ (|∂C|/2) ∫_{∂C} d dσ` (plane case `N = 2`).
pub fn check_upper_bound_u(u: &ScalarField, domain: &GnpDomain) -> Result<InequalityReport> {
    let core = domain.core();
    let rhs = 0.5 * core.perimeter() * core.integrate(domain.profile().values());
    let mut r = InequalityReport::new("upper_bound_u", u.integral(), rhs, Relation::AtMost, 0.0).with_h(u.h());
    r.equality_expected = domain.profile().is_constant(1e-12);
    Ok(r)
}

/// `∫v ≤ (|∂C|/4) ∫_{∂C} d² dσ` (plane case `N = 2`).
pub fn check_payne_rayner(v: &ScalarField, domain: &GnpDomain) -> Result<InequalityReport> {
    let core = domain.core();
    let d2: Vec<f64> = domain.profile().values().iter().map(|d| d * d).collect();
    let rhs = 0.25 * core.perimeter() * core.integrate(&d2);
    let mut r = InequalityReport::new("payne_rayner", v.integral(), rhs, Relation::AtMost, 0.0).with_h(v.h());
    r.equality_expected = domain.profile().is_constant(1e-12);
    Ok(r)
}

/// Reports for the constant profile and `count` Fourier members over one
/// core, labelled. Members are matched to the constant profile on the
/// right-hand side of each bound: mean thickness for the upper bound and
/// Faber-Krahn, mean square thickness for Payne-Rayner.
pub fn family_inequalities(
    core: &ConvexBody,
    d0: f64,
    seed: u64,
    count: usize,
    source: &SourceSpec,
    h: f64,
) -> Result<Vec<(String, InequalityReport)>> {
    let family = FourierFamily::new(d0, seed);
    let constant = make_domain(core.clone(), ThicknessProfile::constant(core, d0)?)?;
    let mut jobs: Vec<(String, GnpDomain, Normalization)> =
        vec![("constant".into(), constant, Normalization::MeanThickness)];
    for norm in [Normalization::MeanThickness, Normalization::MeanSquareThickness] {
        for (k, m) in family.members(core, count, norm)?.into_iter().enumerate() {
            jobs.push((format!("member {k} ({norm:?})"), m, norm));
        }
    }
    let seed = Some(seed);
    let per_domain = par_map(&jobs, |(_, dom, norm)| -> Result<Vec<InequalityReport>> {
        let (u, v) = Discretization::new(dom, h)?.solve_biharmonic(dom, source)?;
        let constant = dom.profile().is_constant(1e-12);
        let mut out = Vec::new();
        if constant || *norm == Normalization::MeanThickness {
            out.push(check_faber_krahn(dom, h)?);
            out.push(check_upper_bound_u(&u, dom)?);
        }
        if constant || *norm == Normalization::MeanSquareThickness {
            out.push(check_payne_rayner(&v, dom)?);
        }
        Ok(out.into_iter().map(|r| r.with_seed(seed)).collect())
    });
    let mut out = Vec::new();
    for ((label, _, _), reports) in jobs.iter().zip(per_domain) {
        out.extend(reports?.into_iter().map(|r| (label.clone(), r)));
    }
    Ok(out)
}

/// Constant-profile slack and the smallest slack among the members, per
/// bound.
pub fn constant_slack_is_minimal(reports: &[(String, InequalityReport)], name: &str) -> Option<(f64, f64, bool)> {
    let of = |constant: bool| reports.iter().filter(move |(_, r)| r.name == name && r.equality_expected == constant);
    let c = of(true).next()?.1.slack;
    let min = of(false).map(|(_, r)| r.slack).fold(f64::INFINITY, f64::min);
    Some((c, min, c <= min))
}

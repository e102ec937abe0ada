//! Sequences `Ω_n → Ω` in the class of domains over a fixed core, and the
//! stability of level sets, thickness functions and boundary measures along
//! them.

use crate::error::{GnpError, Result};
use crate::geometry::{measure_report, polyline_hausdorff, GnpDomain, MeasureReport, TauOptions, ThicknessProfile};
use crate::grid::GridSpec;
use crate::levelsets::{extract_slice, ray_level, LevelSetSlice};
use crate::parallel::par_map;
use crate::solver::{Discretization, ScalarField, SourceSpec, GRID_MARGIN};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::io::Write;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Generator {
    /// `d_n = d (1 + 1/n)`.
    Dilation,
    /// `d_n = d + cos(kθ)/n`.
    Fourier { k: u32 },
}

impl Generator {
    pub fn name(&self) -> String {
        match self {
            Generator::Dilation => "dilation".into(),
            Generator::Fourier { k } => format!("fourier_k{k}"),
        }
    }

    /// `δ_n` on the core samples.
    pub fn delta(&self, base: &GnpDomain, n: u32) -> Vec<f64> {
        let n = n as f64;
        match self {
            Generator::Dilation => base.profile().values().iter().map(|d| d / n).collect(),
            Generator::Fourier { k } => (0..base.core().len())
                .map(|i| (*k as f64 * base.core().sample_angle(i)).cos() / n)
                .collect(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct DomainSequence {
    pub base: GnpDomain,
    pub generator: Generator,
    pub n_list: Vec<u32>,
}

fn sup_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// The domains `Ω_n` for every `n` in the list.
pub fn realize_sequence(seq: &DomainSequence) -> Result<Vec<GnpDomain>> {
    if seq.n_list.iter().any(|n| *n == 0) {
        return Err(GnpError::Config("sequence indices must be positive".into()));
    }
    let deltas: Vec<Vec<f64>> = seq.n_list.iter().map(|&n| seq.generator.delta(&seq.base, n)).collect();
    for (k, w) in deltas.windows(2).enumerate() {
        if sup_norm(&w[1]) >= sup_norm(&w[0]) {
            return Err(GnpError::SequenceMember {
                index: k + 1,
                reason: "perturbation size does not decrease along the index list".into(),
            });
        }
    }
    deltas
        .iter()
        .enumerate()
        .map(|(index, delta)| {
            ThicknessProfile::perturbed(seq.base.profile(), delta, 1.0)
                .and_then(|p| seq.base.with_profile(p))
                .map_err(|e| GnpError::SequenceMember {
                    index,
                    reason: e.to_string(),
                })
        })
        .collect()
}

#[derive(Clone, Copy, Debug, Default, Serialize)]
pub struct ConvergenceRow {
    pub n: u32,
    pub dh_domains: f64,
    pub dh_levelset: Option<f64>,
    pub sym_diff_area: Option<f64>,
    /// `‖1_{Ω_n^t} − 1_{Ω^t}‖_{L¹}`
    pub l1: Option<f64>,
    pub l2: Option<f64>,
    pub sup_dt: Option<f64>,
    pub sup_tau: Option<f64>,
    pub gamma_diff: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConvergenceReport {
    pub family: String,
    pub seed: Option<u64>,
    pub t: Option<f64>,
    pub h: Option<f64>,
    pub n_list: Vec<u32>,
    /// `t < min_{∂C} u` for the limit, so `sup_dt` is over all of `∂C`.
    pub uniform: Option<bool>,
    pub rows: Vec<ConvergenceRow>,
    pub notes: Vec<String>,
}

/// Named report columns.
pub const COLUMNS: [&str; 8] = [
    "dh_domains",
    "dh_levelset",
    "sym_diff_area",
    "l1",
    "l2",
    "sup_dt",
    "sup_tau",
    "gamma_diff",
];

impl ConvergenceRow {
    pub fn column(&self, name: &str) -> Option<f64> {
        match name {
            "dh_domains" => Some(self.dh_domains),
            "dh_levelset" => self.dh_levelset,
            "sym_diff_area" => self.sym_diff_area,
            "l1" => self.l1,
            "l2" => self.l2,
            "sup_dt" => self.sup_dt,
            "sup_tau" => self.sup_tau,
            "gamma_diff" => self.gamma_diff,
            _ => None,
        }
    }
}

impl ConvergenceReport {
    pub fn column(&self, name: &str) -> Vec<Option<f64>> {
        self.rows.iter().map(|r| r.column(name)).collect()
    }

    /// `Some(ok)` per filled column.
    pub fn monotone_tails(&self, tol: f64) -> Vec<(&'static str, bool)> {
        COLUMNS
            .iter()
            .filter_map(|&c| {
                let vals: Option<Vec<f64>> = self.column(c).into_iter().collect();
                vals.map(|v| (c, monotone_tail(&v, 3, tol)))
            })
            .collect()
    }

    pub fn write_csv(&self, out: impl Write) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        for r in &self.rows {
            w.serialize(r)?;
        }
        w.flush()?;
        Ok(())
    }

    /// Family, seed and run parameters.
    pub fn write_sidecar(&self, out: impl Write) -> Result<()> {
        #[derive(Serialize)]
        struct Sidecar<'a> {
            family: &'a str,
            seed: Option<u64>,
            t: Option<f64>,
            h: Option<f64>,
            n_list: &'a [u32],
            uniform: Option<bool>,
            monotone_tail: Vec<(&'static str, bool)>,
            notes: &'a [String],
        }
        serde_json::to_writer_pretty(
            out,
            &Sidecar {
                family: &self.family,
                seed: self.seed,
                t: self.t,
                h: self.h,
                n_list: &self.n_list,
                uniform: self.uniform,
                monotone_tail: self.monotone_tails(0.0),
                notes: &self.notes,
            },
        )?;
        Ok(())
    }
}

/// The last `len` entries do not increase (up to `tol`).
pub fn monotone_tail(values: &[f64], len: usize, tol: f64) -> bool {
    let start = values.len().saturating_sub(len);
    values[start..].windows(2).all(|w| w[1] <= w[0] + tol)
}

fn tau_by_index(m: &MeasureReport) -> HashMap<usize, Vec<f64>> {
    let mut map: HashMap<usize, Vec<f64>> = HashMap::new();
    for s in m.tau_samples.iter().filter(|s| !s.in_collar && s.weight > 0.0) {
        if let Some(t) = s.tau {
            map.entry(s.index).or_default().push(t);
        }
    }
    map
}

/// Matched by core index and by position within the fan of each index.
fn tau_difference(a: &MeasureReport, b: &MeasureReport) -> Option<f64> {
    let (a, b) = (tau_by_index(a), tau_by_index(b));
    let mut sup: Option<f64> = None;
    for (i, x) in &a {
        let Some(y) = b.get(i) else { continue };
        if x.len() != y.len() {
            continue;
        }
        for (p, q) in x.iter().zip(y) {
            sup = Some(sup.unwrap_or(0.0).max((p - q).abs()));
        }
    }
    sup
}

fn geometry_rows(seq: &DomainSequence, domains: &[GnpDomain]) -> Result<Vec<ConvergenceRow>> {
    let opts = TauOptions::default();
    let base = measure_report(&seq.base, &opts, None)?;
    let rows = par_map(domains, |d| -> Result<ConvergenceRow> {
        let m = measure_report(d, &opts, None)?;
        Ok(ConvergenceRow {
            dh_domains: polyline_hausdorff(&[d.outer_boundary().to_vec()], &[seq.base.outer_boundary().to_vec()])?,
            sup_tau: tau_difference(&m, &base),
            gamma_diff: Some((m.gamma - base.gamma).abs()),
            ..Default::default()
        })
    });
    rows.into_iter()
        .zip(&seq.n_list)
        .map(|(r, &n)| r.map(|r| ConvergenceRow { n, ..r }))
        .collect()
}

/// `sup|τ_n − τ|` away from the contact collar and `|γ_n − γ|`.
pub fn measure_convergence_run(seq: &DomainSequence) -> Result<ConvergenceReport> {
    let domains = realize_sequence(seq)?;
    Ok(ConvergenceReport {
        family: seq.generator.name(),
        seed: None,
        t: None,
        h: None,
        n_list: seq.n_list.clone(),
        uniform: None,
        rows: geometry_rows(seq, &domains)?,
        notes: Vec::new(),
    })
}

/// One grid holding every member and the limit.
pub fn common_grid(domains: &[&GnpDomain], h: f64) -> Result<GridSpec> {
    let mut grid = domains[0].grid(h, GRID_MARGIN)?;
    for d in &domains[1..] {
        grid = grid.union(&d.grid(h, GRID_MARGIN)?)?;
    }
    Ok(grid)
}

struct Solved {
    field: ScalarField,
    slice: LevelSetSlice,
}

fn solve_and_slice(domain: &GnpDomain, grid: GridSpec, source: &SourceSpec, t: f64) -> Result<Solved> {
    let field = Discretization::on_grid(domain, grid)?.solve_poisson(domain, source)?;
    let slice = extract_slice(&field, domain, t)?;
    Ok(Solved { field, slice })
}

/// Level-set, thickness and measure columns for every member, all solved
/// on one grid.
pub fn convergence_run(seq: &DomainSequence, source: &SourceSpec, t: f64, h: f64) -> Result<ConvergenceReport> {
    let domains = realize_sequence(seq)?;
    let mut all: Vec<&GnpDomain> = domains.iter().collect();
    all.push(&seq.base);
    let grid = common_grid(&all, h)?;
    let limit = solve_and_slice(&seq.base, grid, source, t)?;
    let core = seq.base.core();
    let min_on_core = core
        .samples()
        .iter()
        .map(|s| limit.field.sample(s.point))
        .fold(f64::INFINITY, f64::min);
    let uniform = t < min_on_core;
    let mut notes = Vec::new();
    // rays where the limit reaches level t; all of them when uniform
    let rays: Vec<usize> = (0..core.len()).filter(|&i| limit.slice.thickness[i].is_some()).collect();
    if !uniform {
        notes.push(format!(
            "t = {t} is not below min u on the core boundary ({min_on_core:.6}); sup_dt is over {} of {} rays",
            rays.len(),
            core.len()
        ));
    }
    let mut rows = geometry_rows(seq, &domains)?;
    let solved = par_map(&domains, |d| solve_and_slice(d, grid, source, t));
    for ((row, s), d) in rows.iter_mut().zip(solved).zip(&domains) {
        let s = s.map_err(|e| GnpError::SequenceMember {
            index: row.n as usize,
            reason: e.to_string(),
        })?;
        let sym = s.slice.mask.symmetric_difference_area(&limit.slice.mask)?;
        row.dh_levelset = Some(polyline_hausdorff(&s.slice.contours.loops, &limit.slice.contours.loops)?);
        row.sym_diff_area = Some(sym);
        row.l1 = Some(sym);
        row.l2 = Some(sym.sqrt());
        let mut sup = 0.0f64;
        for &i in &rays {
            let a = ray_level(&s.field, d, i, t).map_err(|e| GnpError::SequenceMember {
                index: row.n as usize,
                reason: e.to_string(),
            })?;
            sup = sup.max((a - limit.slice.thickness[i].unwrap_or(0.0)).abs());
        }
        row.sup_dt = Some(sup);
    }
    Ok(ConvergenceReport {
        family: seq.generator.name(),
        seed: None,
        t: Some(t),
        h: Some(h),
        n_list: seq.n_list.clone(),
        uniform: Some(uniform),
        rows,
        notes,
    })
}

/// Hausdorff and `L^p` convergence of `Ω_n^t`.
pub fn levelset_convergence_run(seq: &DomainSequence, source: &SourceSpec, t: f64, h: f64) -> Result<ConvergenceReport> {
    convergence_run(seq, source, t, h)
}

/// Convergence of `d_t^n → d_t` along the core rays.
pub fn thickness_convergence_run(seq: &DomainSequence, source: &SourceSpec, t: f64, h: f64) -> Result<ConvergenceReport> {
    convergence_run(seq, source, t, h)
}

#[derive(Clone, Debug, Serialize)]
pub struct ComparisonReport {
    /// `max (u₁ − u₂)` over the small domain.
    pub max_excess_u: f64,
    pub max_excess_v: f64,
    /// Contour vertices of `Γ₁^t` with `u₂ < t − ε_h`.
    pub level_violations: usize,
    /// Core rays with `d₁ > d₂ + h` (outer ends of the solved fields).
    pub thickness_violations: usize,
    pub tolerance: f64,
    pub t: f64,
}

impl ComparisonReport {
    pub fn holds(&self) -> bool {
        self.max_excess_u <= self.tolerance
            && self.max_excess_v <= self.tolerance
            && self.level_violations == 0
            && self.thickness_violations == 0
    }
}

/// Ordering of solutions on nested domains, both solved on one grid.
pub fn comparison_run(
    small: &GnpDomain,
    large: &GnpDomain,
    source: &SourceSpec,
    t: f64,
    h: f64,
) -> Result<ComparisonReport> {
    let grid = common_grid(&[small, large], h)?;
    let d1 = Discretization::on_grid(small, grid)?;
    let d2 = Discretization::on_grid(large, grid)?;
    let outside = d1.lattice().mask().count_not_in(&d2.lattice().mask())?;
    if outside > 0 {
        return Err(GnpError::InclusionViolated { violations: outside });
    }
    let (u1, v1) = d1.solve_biharmonic(small, source)?;
    let (u2, v2) = d2.solve_biharmonic(large, source)?;
    let tolerance = 1e-8 * u2.max_value().max(1.0);
    let excess = |a: &ScalarField, b: &ScalarField| {
        d1.lattice()
            .nodes
            .iter()
            .map(|&i| a.values()[i] - b.values()[i])
            .fold(f64::NEG_INFINITY, f64::max)
    };
    let slice = extract_slice(&u1, small, t)?;
    let level_violations = slice.contours.vertices().filter(|p| u2.sample(*p) < t - tolerance).count();
    let thickness_violations = (0..small.core().len())
        .filter(|&i| match (ray_level(&u1, small, i, 0.0), ray_level(&u2, large, i, 0.0)) {
            (Ok(a), Ok(b)) => a > b + h,
            _ => false,
        })
        .count();
    Ok(ComparisonReport {
        max_excess_u: excess(&u1, &u2),
        max_excess_v: excess(&v1, &v2),
        level_violations,
        thickness_violations,
        tolerance,
        t,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{make_domain, ConvexBody, Point};

    fn concentric(d: f64) -> GnpDomain {
        let core = ConvexBody::disc(Point::ORIGIN, 0.5, 256).unwrap();
        make_domain(core.clone(), ThicknessProfile::constant(&core, d).unwrap()).unwrap()
    }

    #[test]
    fn generators() {
        let base = concentric(0.5);
        let seq = DomainSequence {
            base: base.clone(),
            generator: Generator::Dilation,
            n_list: vec![10],
        };
        let d = realize_sequence(&seq).unwrap();
        assert!((d[0].profile().max() - 0.55).abs() < 1e-12);
        let four = Generator::Fourier { k: 2 };
        assert!((sup_norm(&four.delta(&base, 100)) - 0.01).abs() < 1e-12);
        let bad = DomainSequence {
            base,
            generator: Generator::Dilation,
            n_list: vec![16, 8],
        };
        assert!(matches!(realize_sequence(&bad), Err(GnpError::SequenceMember { .. })));
    }

    #[test]
    fn dilation_measures() {
        let seq = DomainSequence {
            base: concentric(0.5),
            generator: Generator::Dilation,
            n_list: vec![8, 16, 32, 64],
        };
        let rep = measure_convergence_run(&seq).unwrap();
        for r in &rep.rows {
            assert!((r.sup_tau.unwrap() - 0.5 / r.n as f64).abs() < 1e-9);
            assert_eq!(r.gamma_diff, Some(0.0));
        }
        assert!(rep.monotone_tails(0.0).iter().all(|c| c.1));
    }

    #[test]
    fn tails() {
        assert!(monotone_tail(&[5.0, 1.0, 0.5, 0.5], 3, 0.0));
        assert!(!monotone_tail(&[1.0, 0.5, 0.6], 3, 0.0));
        assert!(monotone_tail(&[1.0, 0.5, 0.6], 3, 0.2));
    }

    #[test]
    fn nested_discs_compare() {
        let small = concentric(0.4);
        let large = concentric(0.5);
        let rep = comparison_run(&small, &large, &SourceSpec::constant(1.0), 0.02, 1.0 / 32.0).unwrap();
        assert!(rep.holds(), "{rep:?}");
        assert!(matches!(
            comparison_run(&large, &small, &SourceSpec::constant(1.0), 0.02, 1.0 / 32.0),
            Err(GnpError::InclusionViolated { .. })
        ));
    }
}

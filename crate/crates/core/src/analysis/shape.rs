use crate::error::Result;
use crate::geometry::{measure_report, GnpDomain, MeasureReport, TauOptions};
use serde::Serialize;

#[derive(Clone, Copy, Debug, Serialize)]
pub struct ShapeFunctionals {
    /// `‖τ‖_{L¹(∂Ω)}`.
    pub j1_l1: f64,
    pub j1_l2: f64,
    pub j1_linf: f64,
    /// `γ(Ω)`.
    pub j2: f64,
}

pub fn shape_functionals_from(report: &MeasureReport) -> ShapeFunctionals {
    let taus: Vec<(f64, f64)> = report
        .defined_tau(false)
        .map(|s| (s.tau.unwrap_or(0.0), s.weight))
        .collect();
    ShapeFunctionals {
        j1_l1: taus.iter().map(|(t, w)| t.abs() * w).sum(),
        j1_l2: taus.iter().map(|(t, w)| t * t * w).sum::<f64>().sqrt(),
        j1_linf: taus.iter().map(|(t, _)| t.abs()).fold(0.0, f64::max),
        j2: report.gamma,
    }
}

pub fn shape_functionals(domain: &GnpDomain) -> Result<ShapeFunctionals> {
    Ok(shape_functionals_from(&measure_report(domain, &TauOptions::default(), None)?))
}

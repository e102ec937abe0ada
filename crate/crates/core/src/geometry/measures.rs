//! Boundary thickness `τ_Ω` along inner normals of `∂Ω` and the convexity
//! gap `γ(Ω)`.

use super::domain::GnpDomain;
use super::hull::{convex_hull, distance_to_polygon_boundary};
use super::point::{ray_segment_intersection, Point};
use crate::error::Result;
use serde::{Deserialize, Serialize};
use std::io::Write;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TauOptions {
    /// Adjacent edge normals turning by more than this (radians) mark a kink.
    pub kink_angle: f64,
    /// Samples within this fraction of `|∂Ω|` (geodesically) from a contact
    /// point with `∂C` are excluded from Lipschitz and convergence sups.
    pub collar_fraction: f64,
}

impl Default for TauOptions {
    fn default() -> Self {
        Self {
            kink_angle: 60f64.to_radians(),
            collar_fraction: 0.1,
        }
    }
}

/// Half-space `{x : (x − point)·normal > 0}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HalfSpace {
    pub point: Point,
    pub normal: Point,
}

impl HalfSpace {
    pub fn contains(&self, x: Point) -> bool {
        (x - self.point).dot(self.normal) > 0.0
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TauSample {
    /// Core sample index the boundary point belongs to.
    pub index: usize,
    pub point: Point,
    /// Arc length along the outer polyline.
    pub arclength: f64,
    /// `None` at kinks or where the inner normal is undefined.
    pub tau: Option<f64>,
    pub dist_to_core: f64,
    /// Inside the contact collar.
    pub in_collar: bool,
    /// Arc-length quadrature weight on `∂Ω`.
    pub weight: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasureReport {
    pub tau_samples: Vec<TauSample>,
    pub gamma: f64,
    /// Counter-clockwise vertices of `conv(Ω)`.
    pub hull: Vec<Point>,
    pub notes: Vec<String>,
}

impl MeasureReport {
    /// Defined τ values, optionally skipping the contact collar.
    pub fn defined_tau(&self, skip_collar: bool) -> impl Iterator<Item = &TauSample> {
        self.tau_samples
            .iter()
            .filter(move |s| s.tau.is_some() && !(skip_collar && s.in_collar))
    }

    pub fn undefined_count(&self) -> usize {
        self.tau_samples.iter().filter(|s| s.tau.is_none()).count()
    }
}

/// Outer polyline with consecutive duplicates collapsed: distinct points and
/// for every original sample the index of its distinct point.
fn distinct_outline(outer: &[Point]) -> (Vec<Point>, Vec<usize>) {
    let mut pts: Vec<Point> = Vec::with_capacity(outer.len());
    let mut owner = Vec::with_capacity(outer.len());
    for p in outer {
        if pts.last().is_none_or(|q| q.dist(*p) > 0.0) {
            pts.push(*p);
        }
        owner.push(pts.len() - 1);
    }
    if pts.len() > 1 && pts[0].dist(*pts.last().unwrap()) == 0.0 {
        pts.pop();
        let last = pts.len();
        for o in owner.iter_mut() {
            if *o == last {
                *o = 0;
            }
        }
    }
    (pts, owner)
}

/// `τ_Ω` at every outer sample plus `γ(Ω)` over `∂Ω \ C` (or its part in
/// `half_space`).
pub fn measure_report(domain: &GnpDomain, opts: &TauOptions, half_space: Option<&HalfSpace>) -> Result<MeasureReport> {
    let core = domain.core();
    let outer = domain.outer_boundary();
    let d = domain.profile().values();
    let (pts, owner) = distinct_outline(outer);
    let m = pts.len();
    let edge_len: Vec<f64> = (0..m).map(|k| pts[k].dist(pts[(k + 1) % m])).collect();
    let mut cum = vec![0.0; m + 1];
    for k in 0..m {
        cum[k + 1] = cum[k] + edge_len[k];
    }
    let perimeter = cum[m];
    let mut notes = Vec::new();

    // geodesic distance to the nearest contact point, on the distinct outline
    let contacts: Vec<f64> = (0..outer.len())
        .filter(|&i| d[i] <= 0.0)
        .map(|i| cum[owner[i]])
        .collect();
    let collar = opts.collar_fraction * perimeter;
    let in_collar = |s: f64| {
        contacts.iter().any(|&c| {
            let delta = (s - c).abs();
            delta.min(perimeter - delta) < collar
        })
    };

    let cos_kink = opts.kink_angle.cos();
    let mut tau_samples = Vec::with_capacity(outer.len());
    let mut last_owner = usize::MAX;
    for (i, &x) in outer.iter().enumerate() {
        let k = owner[i];
        let arclength = cum[k];
        let weight = if k == last_owner {
            0.0
        } else {
            0.5 * (edge_len[k] + edge_len[(k + m - 1) % m])
        };
        last_owner = k;
        let dist_to_core = core.distance(x);
        let tau = if d[i] <= 0.0 {
            Some(0.0)
        } else if m < 3 {
            None
        } else {
            inner_normal(&pts, k, cos_kink).and_then(|n| thickness_along(domain, &pts, k, x, n))
        };
        tau_samples.push(TauSample {
            index: i,
            point: x,
            arclength,
            tau,
            dist_to_core,
            in_collar: in_collar(arclength),
            weight,
        });
    }
    let undefined = tau_samples.iter().filter(|s| s.tau.is_none()).count();
    if undefined > 0 {
        notes.push(format!("{undefined} samples at kinks have undefined thickness"));
    }

    let mut hull_input: Vec<Point> = pts.clone();
    hull_input.extend(core.outline());
    let hull = convex_hull(&hull_input);
    let (lo, hi) = domain.bounding_box();
    let snap = 1e-12 * (hi - lo).norm().max(1.0);
    let mut gamma: f64 = 0.0;
    for (i, &x) in outer.iter().enumerate() {
        if d[i] <= 0.0 || half_space.is_some_and(|hs| !hs.contains(x)) {
            continue;
        }
        let gap = distance_to_polygon_boundary(&hull, x);
        if gap > snap {
            gamma = gamma.max(gap / (1.0 + core.distance(x)));
        }
    }
    if let Some(hs) = half_space {
        notes.push(format!(
            "gamma restricted to half-space through ({}, {}) with normal ({}, {})",
            hs.point.x, hs.point.y, hs.normal.x, hs.normal.y
        ));
    }
    Ok(MeasureReport {
        tau_samples,
        gamma,
        hull,
        notes,
    })
}

/// Averaged inward normal at distinct vertex `k` of a counter-clockwise
/// polyline, or `None` at a kink.
fn inner_normal(pts: &[Point], k: usize, cos_kink: f64) -> Option<Point> {
    let m = pts.len();
    let prev = pts[(k + m - 1) % m];
    let next = pts[(k + 1) % m];
    let n0 = (pts[k] - prev).perp().normalized()?;
    let n1 = (next - pts[k]).perp().normalized()?;
    if n0.dot(n1) < cos_kink {
        return None;
    }
    (n0 + n1).normalized()
}

/// Length of the maximal segment `x + s n` inside `Ω \ C`: the first exit
/// through the outer polyline or the entry into `C`, whichever comes first.
fn thickness_along(domain: &GnpDomain, pts: &[Point], k: usize, x: Point, n: Point) -> Option<f64> {
    let m = pts.len();
    let mut exit = f64::INFINITY;
    for j in 0..m {
        if j == k || (j + 1) % m == k {
            continue;
        }
        if let Some(s) = ray_segment_intersection(x, n, pts[j], pts[(j + 1) % m]) {
            if s > 1e-12 {
                exit = exit.min(s);
            }
        }
    }
    let entry = domain.core().ray_entry(x, n).unwrap_or(f64::INFINITY);
    let tau = exit.min(entry);
    tau.is_finite().then_some(tau)
}

/// `τ_Ω` and `γ` with default options over all of `∂Ω \ C`.
pub fn thickness_tau(domain: &GnpDomain) -> Result<MeasureReport> {
    measure_report(domain, &TauOptions::default(), None)
}

/// `γ(Ω)` over all of `∂Ω \ C`.
pub fn convexity_gap(domain: &GnpDomain) -> Result<f64> {
    Ok(measure_report(domain, &TauOptions::default(), None)?.gamma)
}

/// Largest difference quotient of τ between adjacent defined samples outside
/// the contact collar, with geodesic (arc-length) denominators.
pub fn lipschitz_constant_tau(report: &MeasureReport) -> f64 {
    let pts: Vec<&TauSample> = report
        .tau_samples
        .iter()
        .filter(|s| s.weight > 0.0)
        .collect();
    let m = pts.len();
    let total: f64 = pts.iter().map(|s| s.weight).sum();
    let mut lip: f64 = 0.0;
    for k in 0..m {
        let (a, b) = (pts[k], pts[(k + 1) % m]);
        if a.in_collar || b.in_collar {
            continue;
        }
        let (Some(ta), Some(tb)) = (a.tau, b.tau) else { continue };
        let mut ds = (b.arclength - a.arclength).abs();
        ds = ds.min(total - ds);
        if ds > 0.0 {
            lip = lip.max((ta - tb).abs() / ds);
        }
    }
    lip
}

/// τ table with columns `s, x, y, tau` (empty `tau` where undefined).
pub fn write_tau_csv(report: &MeasureReport, out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["s", "x", "y", "tau"])?;
    for s in &report.tau_samples {
        w.write_record([
            format!("{:.12e}", s.arclength),
            format!("{:.12e}", s.point.x),
            format!("{:.12e}", s.point.y),
            s.tau.map(|t| format!("{t:.12e}")).unwrap_or_default(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{make_domain, ConvexBody, ThicknessProfile};

    fn annulus(n: usize) -> GnpDomain {
        let core = ConvexBody::disc(Point::ORIGIN, 0.5, n).unwrap();
        let prof = ThicknessProfile::constant(&core, 0.5).unwrap();
        make_domain(core, prof).unwrap()
    }

    #[test]
    fn concentric_tau_and_gap() {
        let rep = thickness_tau(&annulus(256)).unwrap();
        assert_eq!(rep.gamma, 0.0);
        for s in &rep.tau_samples {
            assert!((s.tau.unwrap() - 0.5).abs() < 1e-12);
            assert!(s.tau.unwrap() >= s.dist_to_core - 1e-12);
        }
        assert!(lipschitz_constant_tau(&rep) < 1e-9);
    }

    #[test]
    fn square_core_constant_profile_is_convex() {
        let core = ConvexBody::polygon(
            vec![
                Point::new(-1.0, -1.0),
                Point::new(1.0, -1.0),
                Point::new(1.0, 1.0),
                Point::new(-1.0, 1.0),
            ],
            128,
            64,
        )
        .unwrap();
        let prof = ThicknessProfile::constant(&core, 0.3).unwrap();
        let dom = make_domain(core, prof).unwrap();
        let rep = thickness_tau(&dom).unwrap();
        assert_eq!(rep.gamma, 0.0);
        assert_eq!(rep.undefined_count(), 0);
        for s in &rep.tau_samples {
            assert!((s.tau.unwrap() - 0.3).abs() < 1e-3, "{s:?}");
        }
    }

    #[test]
    fn single_dent_gap() {
        let core = ConvexBody::disc(Point::ORIGIN, 0.5, 256).unwrap();
        let delta = 0.05;
        let prof = ThicknessProfile::from_fn(&core, |i, _| if i == 40 { 0.5 - delta } else { 0.5 }).unwrap();
        let dom = make_domain(core, prof).unwrap();
        let rep = thickness_tau(&dom).unwrap();
        // the dent sits inside the chord of its neighbours by δ minus the sagitta
        let sagitta = 1.0 - (std::f64::consts::TAU / 256.0).cos();
        let expected = (delta - sagitta) / (1.0 + 0.5 - delta);
        assert!((rep.gamma - expected).abs() < 1e-9, "{} vs {}", rep.gamma, expected);
        let hs = HalfSpace {
            point: Point::ORIGIN,
            normal: -dom.outer_boundary()[40],
        };
        let rep_h = measure_report(&dom, &TauOptions::default(), Some(&hs)).unwrap();
        assert_eq!(rep_h.gamma, 0.0);
    }

    #[test]
    fn contact_samples_have_zero_tau() {
        let core = ConvexBody::disc(Point::ORIGIN, 0.5, 128).unwrap();
        let prof = ThicknessProfile::from_fn(&core, |i, _| if i < 64 { 0.3 } else { 0.0 }).unwrap();
        let dom = make_domain(core, prof).unwrap();
        let rep = thickness_tau(&dom).unwrap();
        for s in &rep.tau_samples[64..] {
            assert_eq!(s.tau, Some(0.0));
        }
        let mut buf = Vec::new();
        write_tau_csv(&rep, &mut buf).unwrap();
        assert!(String::from_utf8(buf).unwrap().starts_with("s,x,y,tau\n"));
    }
}

use crate::error::{GnpError, Result};
use crate::geometry::{ConvexBody, Point};
use serde::{Deserialize, Serialize};

/// Source density `f >= 0`, forced to vanish outside `C`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SourceSpec {
    /// `f = f0` on `C`.
    ConstantOnC { f0: f64 },
    /// `f(x) = table(|x − centroid(C)|)` on `C`, linear between the
    /// `(radius, value)` knots and constant beyond the last one.
    Radial { knots: Vec<(f64, f64)> },
}

impl SourceSpec {
    pub fn constant(f0: f64) -> Self {
        SourceSpec::ConstantOnC { f0 }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            SourceSpec::ConstantOnC { f0 } if !(*f0 >= 0.0 && f0.is_finite()) => {
                Err(GnpError::Config(format!("source density {f0} must be finite and nonnegative")))
            }
            SourceSpec::Radial { knots } => {
                if knots.is_empty() {
                    return Err(GnpError::Config("radial source needs at least one knot".into()));
                }
                if knots.windows(2).any(|w| w[1].0 <= w[0].0) {
                    return Err(GnpError::Config("radial source knots must increase".into()));
                }
                if knots.iter().any(|(_, v)| !(*v >= 0.0 && v.is_finite())) {
                    return Err(GnpError::Config("radial source values must be nonnegative".into()));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// Density ignoring the support restriction.
    fn raw(&self, p: Point, core: &ConvexBody) -> f64 {
        match self {
            SourceSpec::ConstantOnC { f0 } => *f0,
            SourceSpec::Radial { knots } => {
                let r = p.dist(core.centroid());
                match knots.iter().position(|k| k.0 >= r) {
                    Some(0) => knots[0].1,
                    Some(j) => {
                        let (r0, v0) = knots[j - 1];
                        let (r1, v1) = knots[j];
                        v0 + (v1 - v0) * (r - r0) / (r1 - r0)
                    }
                    None => knots[knots.len() - 1].1,
                }
            }
        }
    }

    /// `f(p)`, zero outside `C`.
    pub fn value(&self, p: Point, core: &ConvexBody) -> f64 {
        if core.contains(p) {
            self.raw(p, core)
        } else {
            0.0
        }
    }

    /// Average of `f` over the square cell of side `h` centred at `p`. Cells
    /// meeting `∂C` are split 4×4 and each subcell cut by the tangent line
    /// of `∂C`.
    pub fn cell_average(&self, p: Point, h: f64, core: &ConvexBody) -> f64 {
        let sd = core.signed_distance(p);
        if sd > 0.75 * h {
            return 0.0;
        }
        if sd < -0.75 * h && matches!(self, SourceSpec::ConstantOnC { .. }) {
            return self.raw(p, core);
        }
        let s = 0.25 * h;
        let mut acc = 0.0;
        for a in 0..4 {
            for b in 0..4 {
                let q = p + Point::new((a as f64 + 0.5) / 4.0 - 0.5, (b as f64 + 0.5) / 4.0 - 0.5) * h;
                let frac = inside_fraction(core, q, s);
                if frac > 0.0 {
                    acc += frac * self.raw(q, core);
                }
            }
        }
        acc / 16.0
    }

    /// `∫_C f`, exact for constant densities, otherwise by the same cell
    /// quadrature on a fine lattice.
    pub fn total_mass(&self, core: &ConvexBody) -> f64 {
        match self {
            SourceSpec::ConstantOnC { f0 } => f0 * core.area(),
            SourceSpec::Radial { .. } => {
                let (lo, hi) = core.bounds();
                let h = (hi - lo).norm() / 400.0;
                let nx = ((hi.x - lo.x) / h).ceil() as usize + 1;
                let ny = ((hi.y - lo.y) / h).ceil() as usize + 1;
                let mut acc = 0.0;
                for j in 0..ny {
                    for i in 0..nx {
                        let p = lo + Point::new((i as f64 + 0.5) * h, (j as f64 + 0.5) * h);
                        acc += self.cell_average(p, h, core);
                    }
                }
                acc * h * h
            }
        }
    }

    /// Same source scaled by `s`.
    pub fn scaled(&self, s: f64) -> Self {
        match self {
            SourceSpec::ConstantOnC { f0 } => SourceSpec::ConstantOnC { f0: f0 * s },
            SourceSpec::Radial { knots } => SourceSpec::Radial {
                knots: knots.iter().map(|(r, v)| (*r, v * s)).collect(),
            },
        }
    }
}

/// Fraction of the square of side `s` centred at `q` on the inner side of
/// the tangent line to `∂C` nearest `q`.
fn inside_fraction(core: &ConvexBody, q: Point, s: f64) -> f64 {
    let sd = core.signed_distance(q);
    let half_diag = std::f64::consts::FRAC_1_SQRT_2 * s;
    if sd >= half_diag {
        return 0.0;
    }
    if sd <= -half_diag {
        return 1.0;
    }
    let e = 1e-6 * s;
    let gx = core.signed_distance(q + Point::new(e, 0.0)) - core.signed_distance(q - Point::new(e, 0.0));
    let gy = core.signed_distance(q + Point::new(0.0, e)) - core.signed_distance(q - Point::new(0.0, e));
    let g = (gx * gx + gy * gy).sqrt();
    if g == 0.0 {
        return if sd < 0.0 { 1.0 } else { 0.0 };
    }
    // area of {(x, y) in [0,1]²: a x + b y <= t}
    let (a, b) = ((gx / g).abs() * s, (gy / g).abs() * s);
    let t = 0.5 * (a + b) - sd;
    half_plane_fraction(a, b, t)
}

fn half_plane_fraction(a: f64, b: f64, t: f64) -> f64 {
    let (a, b) = if a < b { (b, a) } else { (a, b) };
    if b < 1e-9 * a {
        return (t / a).clamp(0.0, 1.0);
    }
    let r = |x: f64| x.max(0.0).powi(2);
    ((r(t) - r(t - a) - r(t - b) + r(t - a - b)) / (2.0 * a * b)).clamp(0.0, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn support_is_the_core() {
        let core = ConvexBody::disc(Point::ORIGIN, 0.5, 64).unwrap();
        let f = SourceSpec::constant(2.0);
        assert_eq!(f.value(Point::new(0.6, 0.0), &core), 0.0);
        assert_eq!(f.value(Point::new(0.4, 0.0), &core), 2.0);
        assert!((f.total_mass(&core) - 0.5 * PI).abs() < 1e-12);
        let radial = SourceSpec::Radial {
            knots: vec![(0.0, 1.0), (1.0, 1.0)],
        };
        assert!((radial.total_mass(&core) - 0.25 * PI).abs() < 1e-3);
        assert!(SourceSpec::constant(-1.0).validate().is_err());
        // cell averages recover the mass up to an O(h²) curvature term
        let h = 1.0 / 64.0;
        let mut mass = 0.0;
        for j in -40..=40 {
            for i in -40..=40 {
                mass += f.cell_average(Point::new(i as f64 * h + 0.003, j as f64 * h), h, &core) * h * h;
            }
        }
        assert!((mass - 0.5 * PI).abs() < 2e-5, "{}", mass - 0.5 * PI);
    }

    #[test]
    fn half_plane_fraction_limits() {
        assert!((half_plane_fraction(1.0, 1.0, 1.0) - 0.5).abs() < 1e-15);
        assert!((half_plane_fraction(1.0, 0.0, 0.25) - 0.25).abs() < 1e-15);
        assert_eq!(half_plane_fraction(1.0, 0.5, 2.0), 1.0);
        assert_eq!(half_plane_fraction(1.0, 0.5, -0.1), 0.0);
    }
}

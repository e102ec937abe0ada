use super::convex::{ConvexBody, CoreKind, CoreSample};
use super::point::Point;
use crate::error::{GnpError, Result};
use std::f64::consts::PI;

/// Thickness function `d: ∂C → [0, ∞)` sampled on the core boundary samples.
#[derive(Clone, Debug, PartialEq)]
pub struct ThicknessProfile {
    values: Vec<f64>,
}

/// One cosine mode `amplitude · cos(k θ + phase)` of a Fourier profile.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct FourierMode {
    pub k: u32,
    pub amplitude: f64,
    #[serde(default)]
    pub phase: f64,
}

/// Core `[-1, 1] × {0}` for [`ThicknessProfile::semicircle_with_tails`], with
/// endpoint fans refined toward the thin tails (`tail_nodes` extra angles per
/// endpoint, geometrically spaced in `x − 1`).
pub fn tails_core(samples: usize, tail_nodes: usize, x_max: f64) -> Result<ConvexBody> {
    let mut extra = vec![-1e-9, PI + 1e-9];
    let span = (x_max - 1.0).max(1e-3);
    let n = tail_nodes.max(2);
    for j in 0..n {
        let dx = 1e-3 * (span / 1e-3).powf(j as f64 / (n - 1) as f64);
        let y = 1.0 / (2.0 + dx);
        extra.push(y.atan2(dx));
        extra.push(PI - y.atan2(dx));
    }
    ConvexBody::segment_refined(Point::new(-1.0, 0.0), Point::new(1.0, 0.0), samples / 2, samples / 2, &extra)
}

impl ThicknessProfile {
    /// Wraps raw values, checking nonnegativity and that some value is positive.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some((i, v)) = values.iter().enumerate().find(|(_, v)| !v.is_finite() || **v < 0.0) {
            return Err(GnpError::InvalidProfile(format!("value {v} at sample {i}")));
        }
        if !values.iter().any(|v| *v > 0.0) {
            return Err(GnpError::InvalidProfile(
                "profile vanishes identically; the domain would be int(C)".into(),
            ));
        }
        Ok(Self { values })
    }

    pub fn constant(core: &ConvexBody, d: f64) -> Result<Self> {
        Self::new(vec![d; core.len()])
    }

    pub fn from_fn(core: &ConvexBody, mut f: impl FnMut(usize, &CoreSample) -> f64) -> Result<Self> {
        Self::new(core.samples().iter().enumerate().map(|(i, s)| f(i, s)).collect())
    }

    /// `d(θ) = d0 + Σ a_k cos(kθ + φ_k)` with θ the angular sample parameter.
    pub fn fourier(core: &ConvexBody, d0: f64, modes: &[FourierMode]) -> Result<Self> {
        Self::from_fn(core, |i, _| {
            let theta = core.sample_angle(i);
            d0 + modes
                .iter()
                .map(|m| m.amplitude * (m.k as f64 * theta + m.phase).cos())
                .sum::<f64>()
        })
    }

    /// Upper semicircle over the segment `[-1, 1] × {0}` continued by the
    /// tails `y = 1/(1 + |x|)` for `1 <= |x| <= x_max`, nothing below the axis.
    /// The core must be that segment.
    pub fn semicircle_with_tails(core: &ConvexBody, x_max: f64) -> Result<Self> {
        match core.kind() {
            CoreKind::Segment { a, b }
                if a.dist(Point::new(-1.0, 0.0)) < 1e-12 && b.dist(Point::new(1.0, 0.0)) < 1e-12 => {}
            _ => {
                return Err(GnpError::InvalidProfile(
                    "semicircle-with-tails profile needs the core [-1,1]x{0} (from (-1,0) to (1,0))".into(),
                ))
            }
        }
        if !(x_max > 1.0) {
            return Err(GnpError::InvalidProfile(format!("x_max {x_max} must exceed 1")));
        }
        Self::from_fn(core, |_, s| {
            let n = s.normal;
            let p = s.point;
            if s.turn == 0.0 {
                // side samples
                return if n.y > 0.5 { (1.0 - p.x * p.x).max(0.0).sqrt() } else { 0.0 };
            }
            // fan sample at an endpoint: ray p + r (cos φ, sin φ)
            let outward = n.x * p.x.signum();
            let up = n.y;
            if up < -1e-14 {
                return 0.0;
            }
            if up <= 1e-14 {
                return x_max - 1.0;
            }
            if outward <= 1e-14 {
                // straight up from the endpoint: r·sinφ·2 = 1
                return 0.5 / up;
            }
            // r·up·(2 + r·outward) = 1
            let qa = outward * up;
            let qb = 2.0 * up;
            let r_curve = (-qb + (qb * qb + 4.0 * qa).sqrt()) / (2.0 * qa);
            r_curve.min((x_max - 1.0) / outward)
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// True when all values agree to `tol`.
    pub fn is_constant(&self, tol: f64) -> bool {
        self.max() - self.min() <= tol
    }

    /// Applies `f` to every value.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(self.values.iter().map(|v| f(*v)).collect())
    }

    /// Pointwise `self + scale·delta`.
    pub fn perturbed(&self, delta: &[f64], scale: f64) -> Result<Self> {
        if delta.len() != self.values.len() {
            return Err(GnpError::SampleMismatch {
                core: self.values.len(),
                profile: delta.len(),
            });
        }
        Self::new(self.values.iter().zip(delta).map(|(v, d)| v + scale * d).collect())
    }

    /// Exact area of the shell `Ω \ C`, `∫ (d + κ d²/2) dσ`.
    pub fn shell_area(&self, core: &ConvexBody) -> f64 {
        core.samples()
            .iter()
            .zip(&self.values)
            .map(|(s, d)| s.weight * d + 0.5 * s.turn * d * d)
            .sum()
    }

    /// Linear interpolation between two samples.
    #[inline]
    pub fn interpolate(&self, i0: usize, i1: usize, lambda: f64) -> f64 {
        self.values[i0] * (1.0 - lambda) + self.values[i1] * lambda
    }
}

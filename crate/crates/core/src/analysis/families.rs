use crate::error::{GnpError, Result};
use crate::geometry::{ConvexBody, FourierMode, GnpDomain, ThicknessProfile};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

/// Quantity held fixed across a perturbation family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    /// `∫_{∂C} d dσ`
    MeanThickness,
    /// `∫_{∂C} d² dσ`
    MeanSquareThickness,
    /// `|Ω \ C|`
    ShellArea,
}

impl Normalization {
    fn evaluate(self, core: &ConvexBody, d: &[f64]) -> f64 {
        match self {
            Normalization::MeanThickness => core.integrate(d),
            Normalization::MeanSquareThickness => {
                core.integrate(&d.iter().map(|v| v * v).collect::<Vec<_>>())
            }
            Normalization::ShellArea => core
                .samples()
                .iter()
                .zip(d)
                .map(|(s, v)| s.weight * v + 0.5 * s.turn * v * v)
                .sum(),
        }
    }
}

/// `d = d0 + Σ_{k=1..4} a_k cos(kθ + φ_k)` with `|a_k|` uniform in
/// `[amplitude/2, amplitude]` and uniform phases, one RNG stream per member.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FourierFamily {
    pub d0: f64,
    pub amplitude: f64,
    pub max_k: u32,
    pub seed: u64,
}

impl FourierFamily {
    /// Amplitude `0.1 d0`, so `‖a‖_∞ ≤ 0.4 d0` for the summed modes.
    pub fn new(d0: f64, seed: u64) -> Self {
        Self {
            d0,
            amplitude: 0.1 * d0,
            max_k: 4,
            seed,
        }
    }

    pub fn modes(&self, index: usize) -> Vec<FourierMode> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed.wrapping_add(index as u64));
        (1..=self.max_k)
            .map(|k| FourierMode {
                k,
                amplitude: rng.random_range(0.5 * self.amplitude..=self.amplitude),
                phase: rng.random_range(0.0..TAU),
            })
            .collect()
    }

    pub fn profile(&self, core: &ConvexBody, index: usize) -> Result<ThicknessProfile> {
        ThicknessProfile::fourier(core, self.d0, &self.modes(index))
    }

    /// Member `index`, shifted by a constant so that `norm` matches the
    /// constant profile `d0`.
    pub fn member(&self, core: &ConvexBody, index: usize, norm: Normalization) -> Result<GnpDomain> {
        let raw = self.profile(core, index)?;
        let target = norm.evaluate(core, &vec![self.d0; core.len()]);
        let profile = shift_to_match(core, &raw, norm, target)?;
        crate::geometry::make_domain(core.clone(), profile)
    }

    pub fn members(&self, core: &ConvexBody, count: usize, norm: Normalization) -> Result<Vec<GnpDomain>> {
        (0..count).map(|i| self.member(core, i, norm)).collect()
    }
}

/// `d + c` with the constant `c` found by bisection so that `norm` equals
/// `target`, keeping the profile nonnegative.
pub fn shift_to_match(core: &ConvexBody, profile: &ThicknessProfile, norm: Normalization, target: f64) -> Result<ThicknessProfile> {
    let d = profile.values();
    let at = |c: f64| norm.evaluate(core, &d.iter().map(|v| v + c).collect::<Vec<_>>());
    let mut lo = -profile.min();
    if at(lo) > target {
        return Err(GnpError::InvalidProfile(format!(
            "no nonnegative shift reaches {norm:?} = {target}"
        )));
    }
    let mut hi = lo.abs().max(1.0);
    while at(hi) < target {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if at(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-15 * hi.abs().max(1.0) {
            break;
        }
    }
    profile.map(|v| v + 0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point;

    #[test]
    fn members_are_seeded_and_normalized() {
        let core = ConvexBody::disc(Point::ORIGIN, 0.5, 256).unwrap();
        let fam = FourierFamily::new(0.5, 7);
        assert_eq!(fam.modes(3), fam.modes(3));
        assert_ne!(fam.modes(3), fam.modes(4));
        for m in fam.modes(0) {
            assert!(m.amplitude >= 0.025 && m.amplitude <= 0.05);
        }
        for norm in [Normalization::MeanThickness, Normalization::MeanSquareThickness, Normalization::ShellArea] {
            let dom = fam.member(&core, 2, norm).unwrap();
            let want = norm.evaluate(&core, &vec![0.5; core.len()]);
            let got = norm.evaluate(&core, dom.profile().values());
            assert!((want - got).abs() < 1e-12 * want, "{norm:?}");
        }
    }
}

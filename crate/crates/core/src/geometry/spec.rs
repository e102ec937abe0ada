//! JSON description of a domain: `{core, profile, samples, x_max}`.

use super::convex::{ConvexBody, DEFAULT_SAMPLES};
use super::domain::GnpDomain;
use super::point::Point;
use super::profile::{tails_core, FourierMode, ThicknessProfile};
use crate::error::{GnpError, Result};
use serde::{Deserialize, Serialize};
use std::path::Path;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "snake_case")]
pub enum CoreSpec {
    Disc { center: [f64; 2], radius: f64 },
    Polygon { vertices: Vec<[f64; 2]> },
    Segment { a: [f64; 2], b: [f64; 2] },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "snake_case")]
pub enum ProfileSpec {
    Constant {
        value: f64,
    },
    Fourier {
        d0: f64,
        modes: Vec<FourierMode>,
    },
    /// One value per core sample.
    Table {
        values: Vec<f64>,
    },
    /// Semicircle over `[-1, 1]` with the tails `y = 1/(1 + |x|)`.
    #[serde(rename = "example_10_3")]
    SemicircleTails,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DomainSpec {
    pub core: CoreSpec,
    pub profile: ProfileSpec,
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default = "default_x_max")]
    pub x_max: f64,
}

fn default_samples() -> usize {
    DEFAULT_SAMPLES
}

fn default_x_max() -> f64 {
    20.0
}

fn pt(a: [f64; 2]) -> Point {
    Point::new(a[0], a[1])
}

impl DomainSpec {
    /// Concentric annulus setup: disc core of radius `a`, constant thickness `d`.
    pub fn concentric(a: f64, d: f64) -> Self {
        Self {
            core: CoreSpec::Disc {
                center: [0.0, 0.0],
                radius: a,
            },
            profile: ProfileSpec::Constant { value: d },
            samples: DEFAULT_SAMPLES,
            x_max: default_x_max(),
        }
    }

    /// The semicircle-with-tails domain over the segment `[-1, 1] × {0}`.
    pub fn semicircle_tails() -> Self {
        Self {
            core: CoreSpec::Segment {
                a: [-1.0, 0.0],
                b: [1.0, 0.0],
            },
            profile: ProfileSpec::SemicircleTails,
            samples: DEFAULT_SAMPLES,
            x_max: default_x_max(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text)
    }

    pub fn build_core(&self) -> Result<ConvexBody> {
        if self.samples < 8 {
            return Err(GnpError::Config(format!("samples = {} is too small", self.samples)));
        }
        match &self.core {
            CoreSpec::Disc { center, radius } => ConvexBody::disc(pt(*center), *radius, self.samples),
            CoreSpec::Polygon { vertices } => ConvexBody::polygon(
                vertices.iter().copied().map(pt).collect(),
                self.samples * 3 / 4,
                self.samples / 4,
            ),
            CoreSpec::Segment { a, b } if self.profile == ProfileSpec::SemicircleTails => {
                if pt(*a) != Point::new(-1.0, 0.0) || pt(*b) != Point::new(1.0, 0.0) {
                    return Err(GnpError::Config("example_10_3 needs the segment from (-1,0) to (1,0)".into()));
                }
                tails_core(self.samples, self.samples / 4, self.x_max)
            }
            CoreSpec::Segment { a, b } => ConvexBody::segment(pt(*a), pt(*b), self.samples / 2, self.samples / 2),
        }
    }

    pub fn build(&self) -> Result<GnpDomain> {
        let core = self.build_core()?;
        let profile = match &self.profile {
            ProfileSpec::Constant { value } => ThicknessProfile::constant(&core, *value)?,
            ProfileSpec::Fourier { d0, modes } => ThicknessProfile::fourier(&core, *d0, modes)?,
            ProfileSpec::Table { values } => ThicknessProfile::new(values.clone())?,
            ProfileSpec::SemicircleTails => ThicknessProfile::semicircle_with_tails(&core, self.x_max)?,
        };
        GnpDomain::new(core, profile)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_documented_layout() {
        let text = r#"{
            "core": {"kind": "disc", "params": {"center": [0, 0], "radius": 0.5}},
            "profile": {"kind": "fourier", "params": {"d0": 0.5, "modes": [{"k": 2, "amplitude": 0.1}]}},
            "samples": 256
        }"#;
        let spec = DomainSpec::from_json(text).unwrap();
        assert_eq!(spec.x_max, 20.0);
        let dom = spec.build().unwrap();
        assert_eq!(dom.core().len(), 256);
        assert!((dom.profile().max() - 0.6).abs() < 1e-12);

        let ex = r#"{"core": {"kind": "segment", "params": {"a": [-1, 0], "b": [1, 0]}},
                     "profile": {"kind": "example_10_3"}, "x_max": 10}"#;
        let spec = DomainSpec::from_json(ex).unwrap();
        let built = spec.build();
        assert!(built.is_ok(), "{built:?}");
        let mx = built.unwrap().profile().max();
        // the longest ray reaches x = 10 slightly above the axis
        assert!((9.0..9.01).contains(&mx), "{mx}");
    }

    #[test]
    fn round_trip() {
        let spec = DomainSpec::concentric(0.5, 0.5);
        let text = serde_json::to_string(&spec).unwrap();
        assert_eq!(DomainSpec::from_json(&text).unwrap(), spec);
    }
}

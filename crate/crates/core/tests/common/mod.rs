#![allow(dead_code)]

pub mod oracle;

use gnplab::geometry::{make_domain, ConvexBody, GnpDomain, Point, ThicknessProfile};

pub const A: f64 = 0.5;
pub const D: f64 = 0.5;

/// Disc core of radius 0.5 with constant thickness 0.5.
pub fn radial_domain(samples: usize) -> GnpDomain {
    let core = ConvexBody::disc(Point::ORIGIN, A, samples).unwrap();
    make_domain(core.clone(), ThicknessProfile::constant(&core, D).unwrap()).unwrap()
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

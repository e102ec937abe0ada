//! The quadrature oracle against the closed-form radial torsion function.

mod common;

use common::oracle::RadialOracle;
use std::f64::consts::PI;

fn closed_u(a: f64, big_r: f64, r: f64) -> f64 {
    if r >= a {
        0.5 * a * a * (big_r / r).ln()
    } else {
        0.5 * a * a * (big_r / a).ln() + 0.25 * (a * a - r * r)
    }
}

#[test]
fn matches_closed_form() {
    let o = RadialOracle::new(0.5, 1.0);
    for k in 0..=20 {
        let r = k as f64 / 20.0;
        assert!((o.u(r) - closed_u(0.5, 1.0, r)).abs() < 1e-10, "r = {r}");
    }
    assert!((o.grad_u(1.0) - 0.125).abs() < 1e-10);
    assert!((o.int_grad_u() - PI / 6.0).abs() < 1e-9);
    for t in [0.01, 0.02, 0.04, 0.08] {
        assert!((o.level_radius(t) - (-8.0 * t as f64).exp()).abs() < 1e-9);
    }
}

#[test]
fn reference_integrals() {
    let o = RadialOracle::new(0.5, 1.0);
    assert!((o.u(0.0) - 0.14914339757).abs() < 1e-9);
    assert!((o.v(0.0) - 0.0236595813259).abs() < 1e-9);
    assert!((o.grad_v(1.0) - 0.02734375).abs() < 1e-9);
    assert!((o.int_u() - 0.171805848243).abs() < 1e-9);
    assert!((o.int_v() - 0.0309352792224).abs() < 1e-9);
}

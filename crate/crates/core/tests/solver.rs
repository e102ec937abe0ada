//! Solver against the radial quadrature oracle at desk resolution.

mod common;

use common::oracle::RadialOracle;
use common::{radial_domain, rel, A, D};
use gnplab::solver::{eigen_lambda1, Discretization, SourceSpec};

#[test]
fn torsion_and_biharmonic_match_oracle() {
    let dom = radial_domain(256);
    let oracle = RadialOracle::new(A, A + D);
    let (u, v) = Discretization::new(&dom, 1.0 / 64.0)
        .unwrap()
        .solve_biharmonic(&dom, &SourceSpec::constant(1.0))
        .unwrap();
    let lat = u.lattice();
    let (mut eu, mut ev) = (0.0f64, 0.0f64);
    for &i in &lat.nodes {
        let r = lat.grid.node_at(i).norm();
        eu = eu.max((u.values()[i] - oracle.u(r)).abs());
        ev = ev.max((v.values()[i] - oracle.v(r)).abs());
    }
    assert!(eu < 1e-4 * oracle.max_u() * 10.0, "{eu}");
    assert!(ev < 1e-3 * oracle.v(0.0), "{ev}");
    assert!(rel(u.integral(), oracle.int_u()) < 1e-3);
    assert!(rel(v.integral(), oracle.int_v()) < 1e-3);
    // gradient on the outer circle is first order but close
    let g = u.gradient().magnitude(gnplab::geometry::Point::new(1.0, 0.0));
    assert!(rel(g, oracle.grad_u(1.0)) < 0.02, "{g}");
}

#[test]
fn unit_disc_eigenvalue() {
    let (lambda, phi) = eigen_lambda1(&radial_domain(256), 1.0 / 64.0).unwrap();
    let j01 = 2.404825557695773f64;
    assert!(rel(lambda, j01 * j01) < 2e-3, "{lambda}");
    assert!(phi.min_inside() >= 0.0);
}

//! Level-set geometry of the radial torsion function against the oracle.

mod common;

use common::oracle::RadialOracle;
use common::{radial_domain, rel, A, D};
use gnplab::levelsets::{
    check_coarea, check_first_order_detachment, check_strict_inclusion, extract_slice, extract_slices, thickness_curve,
    LevelGrid, SliceOptions,
};
use gnplab::solver::{solve_biharmonic_system, SourceSpec};
use std::f64::consts::PI;

#[test]
fn slices_follow_the_oracle_radii() {
    let dom = radial_domain(256);
    let oracle = RadialOracle::new(A, A + D);
    let (u, v) = solve_biharmonic_system(&dom, &SourceSpec::constant(1.0), 1.0 / 64.0).unwrap();
    let levels = [0.01, 0.02, 0.04, 0.08, 0.12];
    for (t, s) in levels.iter().zip(extract_slices(&u, &dom, &levels, &SliceOptions::default())) {
        let s = s.unwrap();
        let r = oracle.level_radius(*t);
        assert!(rel(s.perimeter, 2.0 * PI * r) < 5e-3, "t = {t}");
        assert!(rel(s.area, PI * r * r) < 5e-3, "t = {t}");
        if *t < oracle.u(A) {
            assert!((s.max_thickness().unwrap() - oracle.thickness(*t)).abs() < 2e-3);
        } else {
            // the level line lies inside the core
            assert_eq!(s.max_thickness(), None);
        }
    }
    let d = thickness_curve(&u, &dom, 0, &levels[..4]).unwrap();
    assert!(d.windows(2).all(|w| w[1] < w[0]));
    assert!(check_strict_inclusion(&u, &dom, 0.04).unwrap().consistent());
    let det = check_first_order_detachment(&u, &dom, 0, 0.005).unwrap();
    assert!(det.rel_err < 0.05, "{det:?}");
    for c in check_coarea(&u, Some(&v), &dom, &SourceSpec::constant(1.0), 60, LevelGrid::EqualArea).unwrap() {
        assert!(c.rel_err < 0.03, "{c:?}");
    }
    assert!(extract_slice(&u, &dom, oracle.max_u()).is_err());
}

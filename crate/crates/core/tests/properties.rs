//! Properties over random Fourier profiles on a disc core.

use gnplab::geometry::{make_domain, thickness_tau, ConvexBody, FourierMode, Point, ThicknessProfile};
use proptest::prelude::*;

fn modes() -> impl Strategy<Value = Vec<FourierMode>> {
    prop::collection::vec((1u32..6, 0.0f64..0.08, 0.0f64..std::f64::consts::TAU), 1..4)
        .prop_map(|v| v.into_iter().map(|(k, amplitude, phase)| FourierMode { k, amplitude, phase }).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn tau_bounds_and_gap(modes in modes(), d0 in 0.3f64..0.6) {
        let core = ConvexBody::disc(Point::ORIGIN, 0.5, 128).unwrap();
        let dom = make_domain(core.clone(), ThicknessProfile::fourier(&core, d0, &modes).unwrap()).unwrap();
        let rep = thickness_tau(&dom).unwrap();
        prop_assert!(rep.gamma >= 0.0 && rep.gamma < 1.0);
        for s in rep.defined_tau(false) {
            prop_assert!(s.tau.unwrap() >= s.dist_to_core - 1e-9);
        }
        prop_assert!(dom.is_star_shaped(16));
    }

    #[test]
    fn perturbation_is_additive(modes in modes(), eps in 0.0f64..0.1) {
        let core = ConvexBody::disc(Point::ORIGIN, 0.5, 64).unwrap();
        let base = ThicknessProfile::fourier(&core, 0.5, &modes).unwrap();
        let delta = vec![1.0; core.len()];
        let p = base.perturbed(&delta, eps).unwrap();
        for (a, b) in p.values().iter().zip(base.values()) {
            prop_assert!((a - b - eps).abs() < 1e-15);
        }
    }
}

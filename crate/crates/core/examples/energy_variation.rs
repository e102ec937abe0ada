//! Energy of the coupled system as a function of the thickness profile and
//! its central-difference variation along uniform thickening.

use gnplab::analysis::energy_and_variation;
use gnplab::geometry::{make_domain, ConvexBody, Point, ThicknessProfile};
use gnplab::solver::SourceSpec;

fn main() -> gnplab::Result<()> {
    let core = ConvexBody::disc(Point::ORIGIN, 0.5, 256)?;
    let domain = make_domain(core.clone(), ThicknessProfile::constant(&core, 0.5)?)?;
    let delta = vec![1.0; core.len()];
    for eps in [1e-3, 5e-4] {
        let r = energy_and_variation(&domain, &SourceSpec::constant(1.0), &delta, eps, 1.0 / 128.0)?;
        println!(
            "eps {eps:.0e}: E {:.8e}  dE (central) {:.6e}  boundary pairing {:.6e}  ratio {:.4}",
            r.energy, r.variation_lhs, r.variation_rhs, r.ratio
        );
    }
    Ok(())
}

//! `|∇u||∇v|` on level lines of `u` for the coupled system, on the
//! concentric shell and on a perturbed one.

use gnplab::analysis::{bernoulli_slice_data, FourierFamily, Normalization};
use gnplab::geometry::{make_domain, ConvexBody, Point, ThicknessProfile};
use gnplab::solver::{solve_biharmonic_system, SourceSpec};

fn main() -> gnplab::Result<()> {
    let core = ConvexBody::disc(Point::ORIGIN, 0.5, 256)?;
    let domains = [
        ("concentric", make_domain(core.clone(), ThicknessProfile::constant(&core, 0.5)?)?),
        ("perturbed", FourierFamily::new(0.5, 1).member(&core, 0, Normalization::MeanThickness)?),
    ];
    for (name, domain) in &domains {
        let (u, v) = solve_biharmonic_system(domain, &SourceSpec::constant(1.0), 1.0 / 128.0)?;
        for t in [0.0, 0.02, 0.04] {
            let b = bernoulli_slice_data(&u, &v, domain, t)?;
            let (lo, hi) = b.samples.iter().fold((f64::INFINITY, 0.0f64), |(l, h), s| (l.min(s.g), h.max(s.g)));
            println!("{name:<10} t = {t:.2}: g_t in [{lo:.5e}, {hi:.5e}]  spread {:.4}", b.spread);
        }
    }
    Ok(())
}

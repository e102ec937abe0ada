//! Curvature of the level lines of `u` and `v` on the concentric shell,
//! directly and in split form, against `1/r`.

use gnplab::geometry::{make_domain, ConvexBody, Point, ThicknessProfile};
use gnplab::levelsets::{curvature_on_slice, extract_slice, write_curvature_table, Companion};
use gnplab::solver::{solve_biharmonic_system, SourceSpec};

fn main() -> gnplab::Result<()> {
    let core = ConvexBody::disc(Point::ORIGIN, 0.5, 512)?;
    let domain = make_domain(core.clone(), ThicknessProfile::constant(&core, 0.5)?)?;
    let f = SourceSpec::constant(1.0);
    let (u, v) = solve_biharmonic_system(&domain, &f, 1.0 / 128.0)?;
    let mut table = Vec::new();
    for t in [0.01, 0.03, 0.05, 0.07] {
        let slice = extract_slice(&u, &domain, t)?;
        let samples = curvature_on_slice(&u, &slice, Companion::Source { source: &f, core: &core })?;
        let mean = samples.iter().map(|s| s.kappa).sum::<f64>() / samples.len() as f64;
        let split = samples.iter().map(|s| (s.split_form() - s.kappa).abs()).fold(0.0, f64::max);
        println!("u = {t}: mean kappa {mean:.5}  1/r_t {:.5}  max |split - kappa| {split:.2e}", (8.0 * t).exp());
        table.push((t, samples));
    }
    let s = 0.5 * v.max_value();
    let slice = extract_slice(&v, &domain, s)?;
    let samples = curvature_on_slice(&v, &slice, Companion::Field(&u))?;
    let mean = samples.iter().map(|c| c.kappa).sum::<f64>() / samples.len() as f64;
    println!("v = {s:.5}: mean kappa {mean:.5}  1/r {:.5}", 2.0 * std::f64::consts::PI / slice.perimeter);
    let mut out = std::io::stdout().lock();
    if std::env::args().any(|a| a == "--csv") {
        write_curvature_table(&table, &mut out)?;
    }
    Ok(())
}

//! Torsion and coupled biharmonic solves on a disc core with a constant
//! shell, compared with the closed-form radial solution.

use gnplab::geometry::{make_domain, ConvexBody, Point, ThicknessProfile};
use gnplab::solver::{Discretization, SourceSpec};
use std::time::Instant;

fn main() -> gnplab::Result<()> {
    let (a, d) = (0.5, 0.5);
    let core = ConvexBody::disc(Point::ORIGIN, a, 1024)?;
    let profile = ThicknessProfile::constant(&core, d)?;
    let domain = make_domain(core, profile)?;
    let r = a + d;
    // u = (a²/2) ln(R/r) + (R² − a²)/4 ... evaluated at the centre
    let u0 = 0.5 * a * a * (r / a).ln() + (a * a) / 4.0;
    let mut prev: Option<f64> = None;
    for k in [32u32, 64, 128, 256] {
        let h = 1.0 / k as f64;
        let start = Instant::now();
        let disc = Discretization::new(&domain, h)?;
        let (u, v) = disc.solve_biharmonic(&domain, &SourceSpec::constant(1.0))?;
        let err = (u.sample(Point::ORIGIN) - u0).abs();
        let ratio = prev.map_or(f64::NAN, |p| p / err);
        println!(
            "h = 1/{k:<4} unknowns {:>7}  u(0) {:.10}  err {err:.3e}  ratio {ratio:.2}  v(0) {:.10}  iters {}+{}  {:.2}s",
            disc.lattice().unknowns(),
            u.sample(Point::ORIGIN),
            v.sample(Point::ORIGIN),
            u.iterations,
            v.iterations,
            start.elapsed().as_secs_f64()
        );
        prev = Some(err);
    }
    Ok(())
}

//! Ordering of solutions and level sets on nested domains over one core.

use gnplab::analysis::{FourierFamily, Normalization};
use gnplab::convergence::comparison_run;
use gnplab::geometry::{ConvexBody, Point};
use gnplab::solver::SourceSpec;

fn main() -> gnplab::Result<()> {
    let core = ConvexBody::disc(Point::ORIGIN, 0.5, 256)?;
    let small = FourierFamily::new(0.4, 5).member(&core, 0, Normalization::MeanThickness)?;
    let large = small.with_profile(small.profile().map(|d| d + 0.1)?)?;
    let r = comparison_run(&small, &large, &SourceSpec::constant(1.0), 0.02, 1.0 / 128.0)?;
    println!("max(u1 - u2) {:.3e}  max(v1 - v2) {:.3e}", r.max_excess_u, r.max_excess_v);
    println!("level violations {}  thickness violations {}  holds {}", r.level_violations, r.thickness_violations, r.holds());
    match comparison_run(&large, &small, &SourceSpec::constant(1.0), 0.02, 1.0 / 128.0) {
        Err(e) => println!("reversed order: {e}"),
        Ok(_) => println!("reversed order unexpectedly accepted"),
    }
    Ok(())
}

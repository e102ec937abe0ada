//! Faber-Krahn, the upper bound on `∫u` and Payne-Rayner over a seeded
//! Fourier family, with the constant profile for reference.

use gnplab::analysis::{constant_slack_is_minimal, family_inequalities};
use gnplab::geometry::{ConvexBody, Point};
use gnplab::solver::SourceSpec;

fn main() -> gnplab::Result<()> {
    let core = ConvexBody::disc(Point::ORIGIN, 0.5, 256)?;
    let reports = family_inequalities(&core, 0.5, 2024, 4, &SourceSpec::constant(1.0), 1.0 / 64.0)?;
    for (label, r) in &reports {
        println!("{:<14} {:<32} lhs {:.6e}  rhs {:.6e}  slack {:+.3e}", r.name, label, r.lhs, r.rhs, r.slack);
    }
    for name in ["upper_bound_u", "payne_rayner"] {
        if let Some((c, min, ok)) = constant_slack_is_minimal(&reports, name) {
            println!("{name}: constant slack {c:.6} family minimum {min:.6} minimal {ok}");
        }
    }
    Ok(())
}

//! Co-area identities and the per-slice Green identity for the torsion
//! problem on a perturbed shell.

use gnplab::analysis::{FourierFamily, Normalization};
use gnplab::geometry::{ConvexBody, Point};
use gnplab::levelsets::{check_coarea, check_green_per_slice, LevelGrid};
use gnplab::solver::{Discretization, SourceSpec};

fn main() -> gnplab::Result<()> {
    let core = ConvexBody::disc(Point::ORIGIN, 0.5, 256)?;
    let domain = FourierFamily::new(0.5, 9).member(&core, 2, Normalization::ShellArea)?;
    let f = SourceSpec::constant(1.0);
    let (u, v) = Discretization::new(&domain, 1.0 / 128.0)?.solve_biharmonic(&domain, &f)?;
    for grid in [LevelGrid::Uniform, LevelGrid::EqualArea] {
        for c in check_coarea(&u, Some(&v), &domain, &f, 100, grid)? {
            println!(
                "{grid:?} {:<10} volume {:.6e}  levels {:.6e}  rel {:.1e}  skipped {}",
                c.name, c.lhs, c.rhs, c.rel_err, c.skipped_levels
            );
        }
    }
    for t in [0.01, 0.05, 0.1] {
        let g = check_green_per_slice(&u, &domain, &f, t)?;
        println!("t = {t}: flux {:.6e}  source mass {:.6e}  rel {:.1e}", g.flux, g.source_mass, g.rel_err);
    }
    Ok(())
}

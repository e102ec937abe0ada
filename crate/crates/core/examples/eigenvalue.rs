//! First Dirichlet eigenvalue of the unit disc and of a perturbed shell
//! against its equal-area constant-thickness symmetrization.

use gnplab::analysis::{check_faber_krahn, symmetrized_domain, FourierFamily, Normalization};
use gnplab::geometry::{make_domain, ConvexBody, Point, ThicknessProfile};
use gnplab::solver::eigen_lambda1;

fn main() -> gnplab::Result<()> {
    let core = ConvexBody::disc(Point::ORIGIN, 0.5, 256)?;
    let disc = make_domain(core.clone(), ThicknessProfile::constant(&core, 0.5)?)?;
    let j01 = 2.404825557695773f64;
    for k in [32u32, 64, 128] {
        let (lambda, _) = eigen_lambda1(&disc, 1.0 / k as f64)?;
        println!("unit disc h = 1/{k}: lambda1 {lambda:.6}  (j01^2 = {:.6})", j01 * j01);
    }
    let member = FourierFamily::new(0.5, 3).member(&core, 1, Normalization::MeanThickness)?;
    let sym = symmetrized_domain(&member)?;
    println!("symmetrized thickness {:.6}", sym.profile().values()[0]);
    let r = check_faber_krahn(&member, 1.0 / 64.0)?;
    println!("lambda1(sym) {:.6} <= lambda1(member) {:.6}: {}", r.lhs, r.rhs, r.satisfied);
    Ok(())
}

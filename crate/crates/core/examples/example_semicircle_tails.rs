//! Boundary thickness and convexity gap of the semicircle-with-tails domain
//! over the segment `[-1, 1]`, against the values γ = 1/3 and L = 2 quoted
//! for it.

use gnplab::geometry::{lipschitz_constant_tau, thickness_tau, DomainSpec};

fn main() -> gnplab::Result<()> {
    for x_max in [5.0, 20.0, 80.0] {
        let spec = DomainSpec {
            x_max,
            ..DomainSpec::semicircle_tails()
        };
        let domain = spec.build()?;
        let rep = thickness_tau(&domain)?;
        let tau_min_dist = rep
            .defined_tau(false)
            .map(|s| s.tau.unwrap() - s.dist_to_core)
            .fold(f64::INFINITY, f64::min);
        println!(
            "x_max {x_max:>4}: gamma {:.6} (quoted 1/3)  L {:.4} (quoted 2)  undefined tau {}  min(tau - d(x,C)) {:.3e}  star-shaped w.r.t. C {}",
            rep.gamma,
            lipschitz_constant_tau(&rep),
            rep.undefined_count(),
            tau_min_dist,
            domain.is_star_shaped(64),
        );
        rep.notes.iter().for_each(|n| println!("  note: {n}"));
    }
    Ok(())
}

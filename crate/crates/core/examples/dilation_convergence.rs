//! Level sets, thickness and boundary measures along the dilations
//! `d_n = d (1 + 1/n)` of a concentric disc shell.

use gnplab::convergence::{convergence_run, DomainSequence, Generator};
use gnplab::geometry::{make_domain, ConvexBody, Point, ThicknessProfile};
use gnplab::solver::SourceSpec;

fn main() -> gnplab::Result<()> {
    let core = ConvexBody::disc(Point::ORIGIN, 0.5, 512)?;
    let base = make_domain(core.clone(), ThicknessProfile::constant(&core, 0.5)?)?;
    let seq = DomainSequence {
        base,
        generator: Generator::Dilation,
        n_list: vec![8, 16, 32, 64],
    };
    let h = std::env::args().nth(1).and_then(|s| s.parse::<f64>().ok()).unwrap_or(128.0);
    let rep = convergence_run(&seq, &SourceSpec::constant(1.0), 0.04, 1.0 / h)?;
    println!("   n   dH(Ω)      dH(Γ^t)    |ΔΩ^t|     sup|Δd_t|  sup|Δτ|    |Δγ|");
    for r in &rep.rows {
        println!(
            "{:4}  {:.3e}  {:.3e}  {:.3e}  {:.3e}  {:.3e}  {:.1e}",
            r.n,
            r.dh_domains,
            r.dh_levelset.unwrap(),
            r.sym_diff_area.unwrap(),
            r.sup_dt.unwrap(),
            r.sup_tau.unwrap_or(f64::NAN),
            r.gamma_diff.unwrap(),
        );
    }
    for (c, ok) in rep.monotone_tails(0.0) {
        println!("{c:<14} monotone tail: {ok}");
    }
    rep.notes.iter().for_each(|n| println!("note: {n}"));
    Ok(())
}

//! Acceptance criteria, one PASS/FAIL line each. Runs without the test
//! harness so the lines reach the output; exits 1 on any FAIL.

mod common;

use common::oracle::RadialOracle;
use common::{radial_domain, rel, A, D};
use gnplab::analysis::{
    bernoulli_slice_data, constant_slack_is_minimal, energy_and_variation, family_inequalities, FourierFamily,
    Normalization,
};
use gnplab::cli::{run, Command, RunConfig};
use gnplab::convergence::{convergence_run, DomainSequence, Generator};
use gnplab::geometry::{make_domain, thickness_tau, ConvexBody, DomainSpec, GnpDomain, Point, ThicknessProfile};
use gnplab::levelsets::{
    check_coarea, check_estimate_d, check_green_per_slice, check_structure, check_thickness_ode, curvature_on_slice,
    extract_slice, Companion, LevelGrid,
};
use gnplab::solver::{Discretization, ScalarField, SourceSpec};
use std::time::Instant;

type Check = Result<(bool, String), String>;

struct Radial {
    domain: GnpDomain,
    oracle: RadialOracle,
    u: ScalarField,
    v: ScalarField,
    u_coarse: ScalarField,
    seconds: f64,
}

const H_FINE: f64 = 1.0 / 256.0;

fn f1() -> SourceSpec {
    SourceSpec::constant(1.0)
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn radial() -> Result<Radial, String> {
    let domain = radial_domain(512);
    let start = Instant::now();
    let (u, v) = Discretization::new(&domain, H_FINE).and_then(|d| d.solve_biharmonic(&domain, &f1())).map_err(err)?;
    let seconds = start.elapsed().as_secs_f64();
    let u_coarse = Discretization::new(&domain, 2.0 * H_FINE)
        .and_then(|d| d.solve_poisson(&domain, &f1()))
        .map_err(err)?;
    Ok(Radial {
        domain,
        oracle: RadialOracle::new(A, A + D),
        u,
        v,
        u_coarse,
        seconds,
    })
}

fn max_nodal_error(u: &ScalarField, oracle: &RadialOracle) -> f64 {
    let lat = u.lattice();
    lat.nodes
        .iter()
        .map(|&i| (u.values()[i] - oracle.u(lat.grid.node_at(i).norm())).abs())
        .fold(0.0, f64::max)
}

fn solver_accuracy(r: &Radial) -> Check {
    let fine = max_nodal_error(&r.u, &r.oracle);
    let coarse = max_nodal_error(&r.u_coarse, &r.oracle);
    let bound = 0.01 * r.oracle.max_u();
    let ratio = coarse / fine;
    Ok((
        fine <= bound && ratio >= 1.7 && r.seconds <= 60.0,
        format!("max error {fine:.2e} (bound {bound:.2e}), ratio 1/128 -> 1/256 {ratio:.2}, solve {:.1} s", r.seconds),
    ))
}

fn ray_indices(domain: &GnpDomain, count: usize) -> Vec<usize> {
    let n = domain.core().len();
    (0..count).map(|k| k * n / count).collect()
}

fn thickness_ode(r: &Radial) -> Check {
    let t = 0.04;
    let exact = -1.0 / r.oracle.grad_u(r.oracle.level_radius(t));
    let (mut worst, mut worst_oracle) = (0.0f64, 0.0f64);
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for i in ray_indices(&r.domain, 16) {
        let c = check_thickness_ode(&r.u, &r.domain, i, t, 1e-3).map_err(err)?;
        worst = worst.max(c.rel_err);
        worst_oracle = worst_oracle.max(rel(c.lhs, exact));
        lo = lo.min(c.flux_product);
        hi = hi.max(c.flux_product);
    }
    Ok((
        worst <= 0.02 && worst_oracle <= 0.02 && lo >= -1.02 && hi <= -0.98,
        format!(
            "16 rays at t = 0.04: rel err vs -1/|grad u| {worst:.2e}, vs oracle {worst_oracle:.2e}, flux product in [{lo:.4}, {hi:.4}]"
        ),
    ))
}

fn estimate_d(r: &Radial) -> Check {
    let mut worst = 0.0f64;
    for i in ray_indices(&r.domain, 8) {
        let c = check_estimate_d(&r.u, &r.domain, i, 200).map_err(err)?;
        worst = worst.max(rel(c.d_reconstructed, D));
    }
    Ok((worst <= 0.02, format!("8 rays, 200 levels: worst relative error vs d = 0.5 {worst:.2e}")))
}

fn coarea(r: &Radial) -> Check {
    let checks = check_coarea(&r.u, Some(&r.v), &r.domain, &f1(), 100, LevelGrid::Uniform).map_err(err)?;
    let mut ok = true;
    let mut parts = Vec::new();
    for c in &checks {
        ok &= c.rel_err <= 0.03;
        parts.push(format!("{} {:.1e}", c.name, c.rel_err));
    }
    // the volume sides against the oracle
    let grad_vs_oracle = rel(r.u.gradient().integral_of_magnitude(), r.oracle.int_grad_u());
    let u_vs_oracle = rel(r.u.integral(), r.oracle.int_u());
    ok &= grad_vs_oracle <= 0.03 && u_vs_oracle <= 0.03;
    let max = r.u.max_value();
    let mut green = 0.0f64;
    for k in 1..=10 {
        let g = check_green_per_slice(&r.u, &r.domain, &f1(), max * k as f64 / 11.0).map_err(err)?;
        green = green.max(g.rel_err);
    }
    ok &= green <= 0.03;
    Ok((
        ok,
        format!(
            "{}; oracle int|grad u| {grad_vs_oracle:.1e}, int u {u_vs_oracle:.1e}; Green worst of 10 levels {green:.1e}",
            parts.join(", ")
        ),
    ))
}

fn curvature(r: &Radial) -> Check {
    let core = r.domain.core();
    let (mut kappa_err, mut split_err) = (0.0f64, 0.0f64);
    for t in [0.01, 0.03, 0.05, 0.07, 0.1] {
        let slice = extract_slice(&r.u, &r.domain, t).map_err(err)?;
        let exact = 1.0 / r.oracle.level_radius(t);
        for s in curvature_on_slice(&r.u, &slice, Companion::Source { source: &f1(), core }).map_err(err)? {
            kappa_err = kappa_err.max(rel(s.kappa, exact));
            split_err = split_err.max(rel(s.split_form(), s.kappa));
        }
    }
    let mut v_err = 0.0f64;
    let max_v = r.v.max_value();
    for frac in [0.1, 0.3, 0.5, 0.7, 0.9] {
        let s = frac * max_v;
        let slice = extract_slice(&r.v, &r.domain, s).map_err(err)?;
        let rs = r.oracle.level_radius_v(s);
        let exact = r.oracle.u(rs) / r.oracle.grad_v(rs);
        for c in curvature_on_slice(&r.v, &slice, Companion::Field(&r.u)).map_err(err)? {
            v_err = v_err.max(rel(c.term1, exact));
        }
    }
    Ok((
        kappa_err <= 0.02 && split_err <= 0.01 && v_err <= 0.03,
        format!("kappa vs 1/r_t {kappa_err:.1e} (5 levels), divergence vs split {split_err:.1e}, u/|grad v| vs oracle {v_err:.1e}"),
    ))
}

fn disc_core() -> ConvexBody {
    ConvexBody::disc(Point::ORIGIN, A, 256).unwrap()
}

fn fourier_domains(count: usize) -> Result<Vec<GnpDomain>, String> {
    FourierFamily::new(D, 7)
        .members(&disc_core(), count, Normalization::MeanThickness)
        .map_err(err)
}

fn structure() -> Check {
    let h = 1.0 / 128.0;
    let mut total = 0;
    let mut slices_checked = 0;
    for dom in fourier_domains(5)? {
        let u = Discretization::new(&dom, h).and_then(|d| d.solve_poisson(&dom, &f1())).map_err(err)?;
        let max = u.max_value();
        let slices = (1..=20)
            .map(|k| extract_slice(&u, &dom, 0.9 * max * k as f64 / 21.0))
            .collect::<Result<Vec<_>, _>>()
            .map_err(err)?;
        let v = check_structure(&u, &dom, &slices).map_err(err)?;
        total += v.total();
        slices_checked += v.slices;
    }
    Ok((total == 0, format!("{total} violations over {slices_checked} slices on 5 seeded Fourier domains")))
}

fn inequalities(r: &Radial) -> Check {
    let h = 1.0 / 64.0;
    let reports = family_inequalities(&disc_core(), D, 7, 10, &f1(), h).map_err(err)?;
    let fk: Vec<_> = reports.iter().filter(|(l, x)| x.name == "faber_krahn" && l != "constant").collect();
    let fk_ok = fk.len() == 10 && fk.iter().all(|(_, x)| x.satisfied);
    let fk_margin = fk.iter().map(|(_, x)| x.slack).fold(f64::INFINITY, f64::min);
    let bounds_ok = reports.iter().filter(|(_, x)| x.name != "faber_krahn").all(|(_, x)| x.satisfied && x.slack >= 0.0);
    let ub = constant_slack_is_minimal(&reports, "upper_bound_u").ok_or("no upper bound reports")?;
    let pr = constant_slack_is_minimal(&reports, "payne_rayner").ok_or("no Payne-Rayner reports")?;
    let lambda = Discretization::new(&r.domain, h).and_then(|d| d.eigen_lambda1()).map_err(err)?.lambda;
    let j01 = 2.404825557695773f64;
    let lambda_err = rel(lambda, j01 * j01);
    Ok((
        fk_ok && bounds_ok && ub.2 && pr.2 && lambda_err <= 0.01,
        format!(
            "Faber-Krahn on {} pairs (min margin {fk_margin:.2e}); bounds slack >= 0: {bounds_ok}; constant slack minimal: UB {} PR {}; lambda1(unit disc) {lambda:.5} ({lambda_err:.1e})",
            fk.len(),
            ub.2,
            pr.2
        ),
    ))
}

fn biharmonic(r: &Radial) -> Check {
    let exact = r.oracle.grad_u(A + D) * r.oracle.grad_v(A + D);
    let b = bernoulli_slice_data(&r.u, &r.v, &r.domain, 0.0).map_err(err)?;
    let worst = b.samples.iter().map(|s| rel(s.g, exact)).fold(0.0, f64::max);
    let mut spreads = Vec::new();
    for t in [0.02, 0.04, 0.06] {
        spreads.push(bernoulli_slice_data(&r.u, &r.v, &r.domain, t).map_err(err)?.spread);
    }
    let spread_ok = spreads.iter().all(|s| *s <= 1.03);
    Ok((
        b.spread <= 1.05 && worst <= 0.05 && spread_ok,
        format!(
            "boundary |grad u||grad v| spread {:.4}, worst vs oracle {worst:.1e}; g_t spread at t = 0.02, 0.04, 0.06: {:.4}, {:.4}, {:.4}",
            b.spread, spreads[0], spreads[1], spreads[2]
        ),
    ))
}

fn convergence(r: &Radial) -> Check {
    let h = 1.0 / 128.0;
    let seq = DomainSequence {
        base: r.domain.clone(),
        generator: Generator::Dilation,
        n_list: vec![8, 16, 32, 64],
    };
    let rep = convergence_run(&seq, &f1(), 0.04, h).map_err(err)?;
    let tails = rep.monotone_tails(0.0);
    let bad: Vec<&str> = tails.iter().filter(|c| !c.1).map(|c| c.0).collect();
    let tau_err = rep
        .rows
        .iter()
        .map(|row| (row.sup_tau.unwrap_or(f64::INFINITY) - D / row.n as f64).abs())
        .fold(0.0, f64::max);
    Ok((
        bad.is_empty() && tails.len() == 8 && tau_err <= h,
        format!("{} columns, non-monotone: {bad:?}; tau column vs 0.5/n max deviation {tau_err:.1e}", tails.len()),
    ))
}

fn measures() -> Check {
    let square = ConvexBody::polygon(
        vec![Point::new(-1.0, -1.0), Point::new(1.0, -1.0), Point::new(1.0, 1.0), Point::new(-1.0, 1.0)],
        128,
        64,
    )
    .map_err(err)?;
    let stadium = ConvexBody::segment(Point::new(-0.5, 0.0), Point::new(0.5, 0.0), 128, 128).map_err(err)?;
    let mut convex = vec![radial_domain(512)];
    for (core, d) in [(square, 0.3), (stadium, 0.4)] {
        convex.push(make_domain(core.clone(), ThicknessProfile::constant(&core, d).map_err(err)?).map_err(err)?);
    }
    let mut gamma_ok = true;
    let mut below = 0;
    let mut tested = 0;
    for dom in convex.iter().chain(&fourier_domains(5)?) {
        let rep = thickness_tau(dom).map_err(err)?;
        if dom.profile().is_constant(1e-12) {
            gamma_ok &= rep.gamma == 0.0;
        }
        for s in rep.defined_tau(false) {
            tested += 1;
            if s.tau.unwrap_or(0.0) < s.dist_to_core - 1e-9 {
                below += 1;
            }
        }
    }
    let disc = thickness_tau(&convex[0]).map_err(err)?;
    let dev = disc.defined_tau(false).map(|s| (s.tau.unwrap_or(0.0) - D).abs()).fold(0.0, f64::max);
    Ok((
        gamma_ok && below == 0 && dev <= H_FINE,
        format!("gamma = 0 on 3 convex domains: {gamma_ok}; tau < d(x, C) at {below} of {tested} samples; concentric tau deviation {dev:.1e}"),
    ))
}

fn energy_variation(r: &Radial) -> Check {
    let h = 1.0 / 128.0;
    let n = r.domain.core().len();
    let dom = &r.domain;
    let zero = energy_and_variation(dom, &f1(), &vec![0.0; n], 1e-3, h).map_err(err)?;
    let one = energy_and_variation(dom, &f1(), &vec![1.0; n], 1e-3, h).map_err(err)?;
    let two = energy_and_variation(dom, &f1(), &vec![2.0; n], 1e-3, h).map_err(err)?;
    let half_eps = energy_and_variation(dom, &f1(), &vec![1.0; n], 5e-4, h).map_err(err)?;
    let zero_ok = zero.variation_lhs == 0.0 && zero.variation_rhs == 0.0;
    let rhs_ok = two.variation_rhs == 2.0 * one.variation_rhs;
    let lhs_double = rel(two.variation_lhs, 2.0 * one.variation_lhs);
    let stable = rel(half_eps.variation_lhs, one.variation_lhs);
    Ok((
        zero_ok && rhs_ok && lhs_double <= 0.01 && stable < 1e-3,
        format!(
            "zero variation both sides 0: {zero_ok}; rhs doubles exactly: {rhs_ok}; lhs doubling error {lhs_double:.1e}; lhs at eps 1e-3 vs 5e-4 {:.6e} / {:.6e} ({stable:.1e})",
            one.variation_lhs, half_eps.variation_lhs
        ),
    ))
}

fn config(command: Command, out: &std::path::Path) -> RunConfig {
    RunConfig {
        command,
        domain: DomainSpec::concentric(A, D),
        grid_h: 1.0 / 64.0,
        t_list: vec![0.01, 0.02, 0.04],
        n_list: vec![8, 16, 32, 64],
        family: if command == Command::Converge { "dilation".into() } else { "fourier".into() },
        seed: 11,
        count: 3,
        half_space: None,
        out_dir: out.to_path_buf(),
    }
}

fn determinism() -> Check {
    let dirs = [tempfile::tempdir().map_err(err)?, tempfile::tempdir().map_err(err)?];
    let commands = [Command::Solve, Command::Levelsets, Command::Inequalities, Command::Bernoulli, Command::Converge];
    let mut compared = 0;
    for c in commands {
        let mut bytes = Vec::new();
        for d in &dirs {
            let outcome = run(&config(c, d.path())).map_err(err)?;
            bytes.push(
                outcome
                    .artifacts
                    .iter()
                    .map(|p| std::fs::read(p).map(|b| (p.file_name().map(|n| n.to_owned()), b)))
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(err)?,
            );
        }
        if bytes[0] != bytes[1] {
            return Ok((false, format!("{} artifacts differ between runs", c.name())));
        }
        compared += bytes[0].len();
    }
    Ok((true, format!("{compared} artifacts byte-identical across two runs of 5 commands")))
}

fn main() {
    let start = Instant::now();
    let shared = radial();
    let criteria: Vec<(&str, Box<dyn Fn() -> Check + '_>)> = vec![
        ("solver accuracy", Box::new(|| solver_accuracy(shared.as_ref()?))),
        ("thickness ODE", Box::new(|| thickness_ode(shared.as_ref()?))),
        ("a priori estimate of d", Box::new(|| estimate_d(shared.as_ref()?))),
        ("coarea identities", Box::new(|| coarea(shared.as_ref()?))),
        ("curvature", Box::new(|| curvature(shared.as_ref()?))),
        ("level-set structure", Box::new(structure)),
        ("inequalities", Box::new(|| inequalities(shared.as_ref()?))),
        ("biharmonic coupling", Box::new(|| biharmonic(shared.as_ref()?))),
        ("convergence harness", Box::new(|| convergence(shared.as_ref()?))),
        ("quantitative measures", Box::new(measures)),
        ("energy variation", Box::new(|| energy_variation(shared.as_ref()?))),
        ("determinism", Box::new(determinism)),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let t0 = Instant::now();
        let (ok, detail) = check().unwrap_or_else(|e| (false, format!("error: {e}")));
        failed += usize::from(!ok);
        println!(
            "{} {:>2} {name}: {detail} [{:.1} s]",
            if ok { "PASS" } else { "FAIL" },
            k + 1,
            t0.elapsed().as_secs_f64()
        );
    }
    println!("{} of {} criteria passed in {:.0} s", criteria.len() - failed, criteria.len(), start.elapsed().as_secs_f64());
    if failed > 0 {
        std::process::exit(1);
    }
}

//! Batch front end: one subcommand per pipeline, artifacts named
//! `{command}_{hash}.{csv,json}` and one `PASS`/`FAIL`/`INFO` line per check.

use crate::analysis::{
    bernoulli_slice_data, constant_slack_is_minimal, family_inequalities, fundamental_link, InequalityReport,
};
use crate::convergence::{convergence_run, DomainSequence, Generator};
use crate::error::{GnpError, Result};
use crate::geometry::{
    lipschitz_constant_tau, measure_report, write_tau_csv, CoreKind, DomainSpec, GnpDomain, HalfSpace, Point, TauOptions,
};
use crate::levelsets::{
    check_green_per_slice, check_strict_inclusion, check_structure, extract_slice, write_slice_table, LevelSetSlice, SliceRow,
    ThicknessRow,
};
use crate::parallel::par_map;
use crate::solver::{solve_poisson, Discretization, SourceSpec};
use clap::{Parser, Subcommand};
use serde::Serialize;
use sha2::{Digest, Sha256};
use std::path::{Path, PathBuf};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Subcommand)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    /// Torsion and coupled biharmonic solve; field dump.
    Solve,
    /// Level sets of `u` at the `--t` levels.
    Levelsets,
    /// Boundary thickness τ and convexity gap γ.
    Measures,
    /// Faber-Krahn, upper bound and Payne-Rayner over a seeded family.
    Inequalities,
    /// Boundary data `|∇u||∇v|` on level lines.
    Bernoulli,
    /// Convergence along a domain sequence.
    Converge,
    /// The semicircle-with-tails example against its quoted values.
    Example103,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Solve => "solve",
            Command::Levelsets => "levelsets",
            Command::Measures => "measures",
            Command::Inequalities => "inequalities",
            Command::Bernoulli => "bernoulli",
            Command::Converge => "converge",
            Command::Example103 => "example103",
        }
    }
}

/// `px,py,nx,ny`
fn parse_half_space(s: &str) -> std::result::Result<HalfSpace, String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|_| format!("cannot parse {p:?}")))
        .collect::<std::result::Result<_, _>>()?;
    if v.len() != 4 || v[2] == 0.0 && v[3] == 0.0 {
        return Err("expected px,py,nx,ny with a nonzero normal".into());
    }
    Ok(HalfSpace {
        point: Point::new(v[0], v[1]),
        normal: Point::new(v[2], v[3]),
    })
}

#[derive(Debug, Parser)]
#[command(name = "gnplab", version, about = "Level-set geometry laboratory for normal-ray domains")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Domain spec (JSON); default: disc core a = 0.5, constant thickness 0.5.
    #[arg(long, global = true)]
    pub domain: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 1.0 / 64.0)]
    pub grid_h: f64,
    /// Comma-separated levels.
    #[arg(long, global = true, value_delimiter = ',')]
    pub t: Option<Vec<f64>>,
    /// Comma-separated sequence indices.
    #[arg(long, global = true, value_delimiter = ',')]
    pub n_list: Option<Vec<u32>>,
    /// `dilation`, `fourier` or `fourier:K`.
    #[arg(long, global = true)]
    pub family: Option<String>,
    #[arg(long, global = true, default_value_t = 2024)]
    pub seed: u64,
    #[arg(long, global = true, default_value = ".")]
    pub out: PathBuf,
    /// Restrict γ to `{(x − p)·n > 0}`, given as `px,py,nx,ny`.
    #[arg(long, global = true, value_parser = parse_half_space)]
    pub half_space: Option<HalfSpace>,
    /// Family size.
    #[arg(long, global = true, default_value_t = 5)]
    pub count: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub command: Command,
    pub domain: DomainSpec,
    pub grid_h: f64,
    pub t_list: Vec<f64>,
    pub n_list: Vec<u32>,
    pub family: String,
    pub seed: u64,
    pub count: usize,
    pub half_space: Option<HalfSpace>,
    #[serde(skip)]
    pub out_dir: PathBuf,
}

impl RunConfig {
    pub fn from_cli(cli: Cli) -> Result<Self> {
        let domain = match (&cli.domain, cli.command) {
            (Some(p), _) => DomainSpec::load(p)?,
            (None, Command::Example103) => DomainSpec::semicircle_tails(),
            (None, _) => DomainSpec::concentric(0.5, 0.5),
        };
        let family = cli.family.unwrap_or_else(|| match cli.command {
            Command::Converge => "dilation".into(),
            _ => "fourier".into(),
        });
        let default_t = match cli.command {
            Command::Converge => vec![0.04],
            Command::Bernoulli => vec![0.0, 0.02, 0.04],
            _ => vec![0.01, 0.02, 0.04],
        };
        let cfg = Self {
            command: cli.command,
            domain,
            grid_h: cli.grid_h,
            t_list: cli.t.unwrap_or(default_t),
            n_list: cli.n_list.unwrap_or_else(|| vec![8, 16, 32, 64]),
            family,
            seed: cli.seed,
            count: cli.count,
            half_space: cli.half_space,
            out_dir: cli.out,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.grid_h > 0.0 && self.grid_h.is_finite()) {
            return Err(GnpError::Config(format!("grid spacing must be positive, got {}", self.grid_h)));
        }
        if self.t_list.is_empty() || self.t_list.iter().any(|t| !(t.is_finite() && *t >= 0.0)) {
            return Err(GnpError::Config("levels must be finite and nonnegative".into()));
        }
        if self.count == 0 {
            return Err(GnpError::Config("count must be positive".into()));
        }
        self.generator()?;
        Ok(())
    }

    pub fn generator(&self) -> Result<Generator> {
        match self.family.as_str() {
            "dilation" => Ok(Generator::Dilation),
            "fourier" => Ok(Generator::Fourier { k: 2 }),
            f => f
                .strip_prefix("fourier:")
                .and_then(|k| k.parse().ok())
                .filter(|k| *k > 0)
                .map(|k| Generator::Fourier { k })
                .ok_or_else(|| GnpError::Config(format!("unknown family {f:?}"))),
        }
    }

    /// First 12 hex digits of the SHA-256 of the canonical config (the
    /// output directory excluded).
    pub fn hash(&self) -> String {
        let json = serde_json::to_vec(self).expect("config serializes");
        hex::encode(Sha256::digest(&json))[..12].to_string()
    }

    pub fn artifact(&self, ext: &str) -> PathBuf {
        self.out_dir.join(format!("{}_{}.{ext}", self.command.name(), self.hash()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Info,
}

/// Check lines in emission order.
#[derive(Debug, Default)]
pub struct Outcome {
    pub lines: Vec<(Status, String)>,
    pub artifacts: Vec<PathBuf>,
}

impl Outcome {
    fn check(&mut self, ok: bool, msg: impl Into<String>) {
        self.lines.push((if ok { Status::Pass } else { Status::Fail }, msg.into()));
    }

    fn info(&mut self, msg: impl Into<String>) {
        self.lines.push((Status::Info, msg.into()));
    }

    pub fn failed(&self) -> bool {
        self.lines.iter().any(|l| l.0 == Status::Fail)
    }

    pub fn render(&self) -> String {
        self.lines
            .iter()
            .map(|(s, m)| {
                let tag = match s {
                    Status::Pass => "PASS",
                    Status::Fail => "FAIL",
                    Status::Info => "INFO",
                };
                format!("{tag} {m}\n")
            })
            .collect()
    }
}

/// Errors from bad input rather than from the computation.
pub fn is_config_error(e: &GnpError) -> bool {
    matches!(
        e,
        GnpError::Config(_)
            | GnpError::LevelOutOfRange { .. }
            | GnpError::InvalidProfile(_)
            | GnpError::InvalidCore(_)
            | GnpError::SampleMismatch { .. }
            | GnpError::NonSimpleBoundary { .. }
            | GnpError::SequenceMember { .. }
    )
}

/// Computes everything first; files are written afterwards, one at a time.
pub fn run(cfg: &RunConfig) -> Result<Outcome> {
    let domain = cfg.domain.build()?;
    let mut out = Outcome::default();
    let (csv, json) = match cfg.command {
        Command::Solve => solve(cfg, &domain, &mut out)?,
        Command::Levelsets => levelsets(cfg, &domain, &mut out)?,
        Command::Measures => measures(cfg, &domain, &mut out)?,
        Command::Inequalities => inequalities(cfg, &domain, &mut out)?,
        Command::Bernoulli => bernoulli(cfg, &domain, &mut out)?,
        Command::Converge => converge(cfg, &domain, &mut out)?,
        Command::Example103 => example103(cfg, &domain, &mut out)?,
    };
    std::fs::create_dir_all(&cfg.out_dir)?;
    for (ext, bytes) in [("csv", csv), ("json", json)] {
        let path = cfg.artifact(ext);
        std::fs::write(&path, bytes)?;
        out.artifacts.push(path);
    }
    Ok(out)
}

type Artifacts = (Vec<u8>, Vec<u8>);

fn to_json(value: &impl Serialize) -> Result<Vec<u8>> {
    let mut buf = serde_json::to_vec_pretty(value)?;
    buf.push(b'\n');
    Ok(buf)
}

fn source() -> SourceSpec {
    SourceSpec::constant(1.0)
}

fn is_radial(domain: &GnpDomain) -> bool {
    matches!(domain.core().kind(), CoreKind::Disc { .. }) && domain.profile().is_constant(1e-12)
}

fn solve(cfg: &RunConfig, domain: &GnpDomain, out: &mut Outcome) -> Result<Artifacts> {
    let disc = Discretization::new(domain, cfg.grid_h)?;
    let (u, v) = disc.solve_biharmonic(domain, &source())?;
    out.info(format!(
        "unknowns {} max u {:.8e} max v {:.8e} iterations {}+{}",
        disc.lattice().unknowns(),
        u.max_value(),
        v.max_value(),
        u.iterations,
        v.iterations
    ));
    let floor = -1e-8 * u.max_value();
    out.check(u.min_inside() >= floor, format!("u >= 0 (min {:.3e})", u.min_inside()));
    out.check(v.min_inside() >= floor, format!("v >= 0 (min {:.3e})", v.min_inside()));
    let mut csv = Vec::new();
    u.write_csv(u.gradient(), &mut csv)?;
    #[derive(Serialize)]
    struct Header {
        u: crate::solver::FieldHeader,
        v: crate::solver::FieldHeader,
    }
    Ok((csv, to_json(&Header { u: u.header(), v: v.header() })?))
}

fn slices_at(cfg: &RunConfig, u: &crate::solver::ScalarField, domain: &GnpDomain) -> Result<Vec<LevelSetSlice>> {
    let mut levels = cfg.t_list.clone();
    levels.sort_by(f64::total_cmp);
    par_map(&levels, |&t| extract_slice(u, domain, t)).into_iter().collect()
}

fn levelsets(cfg: &RunConfig, domain: &GnpDomain, out: &mut Outcome) -> Result<Artifacts> {
    let u = solve_poisson(domain, &source(), cfg.grid_h)?;
    let slices = slices_at(cfg, &u, domain)?;
    let greens = par_map(&slices, |s| check_green_per_slice(&u, domain, &source(), s.t));
    let mut rows = Vec::new();
    let mut thickness = Vec::new();
    for (s, g) in slices.iter().zip(greens) {
        let g = g?;
        out.check(g.rel_err <= 0.03, format!("green t = {} flux {:.6e} mass {:.6e} rel {:.2e}", s.t, g.flux, g.source_mass, g.rel_err));
        let inc = check_strict_inclusion(&u, domain, s.t)?;
        out.info(format!("t = {} strict inclusion {} components {}", s.t, inc.consistent(), s.components()));
        rows.push(SliceRow {
            t: s.t,
            area: s.area,
            perimeter: s.perimeter,
            min_dt: s.min_thickness(),
            max_dt: s.max_thickness(),
            green_rel_err: Some(g.rel_err),
        });
        for (c, d) in domain.core().samples().iter().zip(&s.thickness) {
            thickness.push(ThicknessRow {
                c_arclength: c.arclength,
                t: s.t,
                d_t: *d,
            });
        }
    }
    let viol = check_structure(&u, domain, &slices)?;
    out.check(
        viol.total() == 0,
        format!(
            "structure over {} levels: nesting {} monotonicity {} d_t > d {} not star-shaped {}",
            viol.slices, viol.nesting, viol.monotonicity, viol.exceeds_profile, viol.not_star_shaped
        ),
    );
    let mut csv = Vec::new();
    write_slice_table(&rows, &mut csv)?;
    #[derive(Serialize)]
    struct Summary<'a> {
        h: f64,
        max_u: f64,
        slices: &'a [SliceRow],
        thickness: &'a [ThicknessRow],
    }
    let json = to_json(&Summary {
        h: cfg.grid_h,
        max_u: u.max_value(),
        slices: &rows,
        thickness: &thickness,
    })?;
    Ok((csv, json))
}

#[derive(Serialize)]
struct MeasureSummary {
    gamma: f64,
    lipschitz_tau: f64,
    undefined_tau: usize,
    min_tau_minus_dist: f64,
    notes: Vec<String>,
}

fn measure_summary(cfg: &RunConfig, domain: &GnpDomain) -> Result<(crate::geometry::MeasureReport, MeasureSummary)> {
    let rep = measure_report(domain, &TauOptions::default(), cfg.half_space.as_ref())?;
    let summary = MeasureSummary {
        gamma: rep.gamma,
        lipschitz_tau: lipschitz_constant_tau(&rep),
        undefined_tau: rep.undefined_count(),
        min_tau_minus_dist: rep
            .defined_tau(false)
            .map(|s| s.tau.unwrap_or(0.0) - s.dist_to_core)
            .fold(f64::INFINITY, f64::min),
        notes: rep.notes.clone(),
    };
    Ok((rep, summary))
}

fn measures(cfg: &RunConfig, domain: &GnpDomain, out: &mut Outcome) -> Result<Artifacts> {
    let (rep, s) = measure_summary(cfg, domain)?;
    out.info(format!("gamma {:.6} Lipschitz(tau) {:.4} undefined tau {}", s.gamma, s.lipschitz_tau, s.undefined_tau));
    let below = rep
        .defined_tau(false)
        .filter(|t| t.tau.unwrap_or(0.0) < t.dist_to_core - 1e-9)
        .count();
    out.check(below == 0, format!("tau >= d(x, C) ({below} samples below, min difference {:.3e})", s.min_tau_minus_dist));
    if is_radial(domain) {
        let d = domain.profile().values()[0];
        let err = rep.defined_tau(false).map(|t| (t.tau.unwrap_or(0.0) - d).abs()).fold(0.0, f64::max);
        out.check(err <= cfg.grid_h, format!("concentric tau = {d} (max deviation {err:.2e})"));
        out.check(s.gamma == 0.0, format!("convex domain gamma = 0 (got {})", s.gamma));
    }
    s.notes.iter().for_each(|n| out.info(n.clone()));
    let mut csv = Vec::new();
    write_tau_csv(&rep, &mut csv)?;
    Ok((csv, to_json(&s)?))
}

fn inequalities(cfg: &RunConfig, domain: &GnpDomain, out: &mut Outcome) -> Result<Artifacts> {
    let core = domain.core();
    let d0 = core.integrate(domain.profile().values()) / core.perimeter();
    let h = cfg.grid_h;
    let labelled = family_inequalities(core, d0, cfg.seed, cfg.count, &source(), h)?;
    for (label, rep) in &labelled {
        out.check(
            rep.satisfied,
            format!("{} {label}: lhs {:.8e} rhs {:.8e} slack {:.3e}", rep.name, rep.lhs, rep.rhs, rep.slack),
        );
    }
    for name in ["upper_bound_u", "payne_rayner"] {
        if let Some((c, min, ok)) = constant_slack_is_minimal(&labelled, name) {
            out.check(ok, format!("{name}: constant profile slack {c:.6e} <= family minimum {min:.6e}"));
        }
    }
    let reports: Vec<InequalityReport> = labelled.into_iter().map(|(_, r)| r).collect();
    let u = solve_poisson(domain, &source(), h)?;
    let link = fundamental_link(&u, domain, &source(), cfg.t_list[0])?;
    out.info(format!(
        "integral condition with g = |grad u| on the outer boundary: int_C f {:.6e} vs int g {:.6e}, strict inclusion at t = {}: {}",
        link.cs.lhs, link.cs.rhs, link.t, link.strict_inclusion
    ));
    let mut csv = Vec::new();
    {
        let mut w = csv::Writer::from_writer(&mut csv);
        for r in &reports {
            w.serialize((&r.name, r.lhs, r.rhs, r.satisfied, r.slack, r.equality_expected, r.h, r.seed))?;
        }
        w.flush()?;
    }
    Ok((csv, to_json(&reports)?))
}

fn bernoulli(cfg: &RunConfig, domain: &GnpDomain, out: &mut Outcome) -> Result<Artifacts> {
    let (u, v) = Discretization::new(domain, cfg.grid_h)?.solve_biharmonic(domain, &source())?;
    let limit = u.max_value();
    if let Some(&t) = cfg.t_list.iter().find(|t| **t >= limit) {
        return Err(GnpError::LevelOutOfRange { t, limit });
    }
    let data = par_map(&cfg.t_list, |&t| bernoulli_slice_data(&u, &v, domain, t))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let radial = is_radial(domain);
    for d in &data {
        let msg = format!("t = {} g_t spread {:.5}", d.t, d.spread);
        if radial {
            out.check(d.spread <= 1.03, msg);
        } else {
            out.info(msg);
        }
    }
    let mut csv = Vec::new();
    {
        let mut w = csv::Writer::from_writer(&mut csv);
        w.write_record(["t", "index", "grad_u", "grad_v", "g"])?;
        for d in &data {
            for s in &d.samples {
                w.serialize((d.t, s.index, s.grad_u, s.grad_v, s.g))?;
            }
        }
        w.flush()?;
    }
    Ok((csv, to_json(&data)?))
}

fn converge(cfg: &RunConfig, domain: &GnpDomain, out: &mut Outcome) -> Result<Artifacts> {
    let seq = DomainSequence {
        base: domain.clone(),
        generator: cfg.generator()?,
        n_list: cfg.n_list.clone(),
    };
    let mut rep = convergence_run(&seq, &source(), cfg.t_list[0], cfg.grid_h)?;
    rep.seed = Some(cfg.seed);
    for (column, ok) in rep.monotone_tails(0.0) {
        out.check(ok, format!("{column} non-increasing over the last three n"));
    }
    if seq.generator == Generator::Dilation && domain.profile().is_constant(1e-12) {
        let d = domain.profile().values()[0];
        let err = rep
            .rows
            .iter()
            .map(|r| (r.sup_tau.unwrap_or(f64::INFINITY) - d / r.n as f64).abs())
            .fold(0.0, f64::max);
        out.check(err <= cfg.grid_h, format!("dilation sup|tau_n - tau| = d/n (max deviation {err:.2e})"));
    }
    rep.notes.iter().for_each(|n| out.info(n.clone()));
    let mut csv = Vec::new();
    rep.write_csv(&mut csv)?;
    let mut json = Vec::new();
    rep.write_sidecar(&mut json)?;
    json.push(b'\n');
    Ok((csv, json))
}

fn example103(cfg: &RunConfig, domain: &GnpDomain, out: &mut Outcome) -> Result<Artifacts> {
    let (rep, s) = measure_summary(cfg, domain)?;
    out.info(format!("gamma {:.6} vs quoted 1/3 (difference {:.3e})", s.gamma, s.gamma - 1.0 / 3.0));
    out.info(format!("Lipschitz constant of tau {:.4} vs quoted 2", s.lipschitz_tau));
    out.info(format!("min(tau - d(x, C)) {:.4e}", s.min_tau_minus_dist));
    out.info(format!("star-shaped with respect to C: {}", domain.is_star_shaped(64)));
    s.notes.iter().for_each(|n| out.info(n.clone()));
    let mut csv = Vec::new();
    write_tau_csv(&rep, &mut csv)?;
    Ok((csv, to_json(&s)?))
}

/// Parses the arguments, runs, prints, and returns the process exit code.
pub fn main_with_args(args: impl IntoIterator<Item = std::ffi::OsString>) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let cfg = match RunConfig::from_cli(cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    match run(&cfg) {
        Ok(outcome) => {
            print!("{}", outcome.render());
            for a in &outcome.artifacts {
                println!("INFO wrote {}", display(a));
            }
            i32::from(outcome.failed())
        }
        Err(e) => {
            eprintln!("error: {e}");
            if is_config_error(&e) {
                2
            } else {
                println!("FAIL {} aborted: {e}", cfg.command.name());
                1
            }
        }
    }
}

fn display(p: &Path) -> String {
    p.display().to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(args: &[&str]) -> Result<RunConfig> {
        let mut all = vec!["gnplab"];
        all.extend_from_slice(args);
        RunConfig::from_cli(Cli::try_parse_from(all).map_err(|e| GnpError::Config(e.to_string()))?)
    }

    #[test]
    fn parses_flags_and_hashes_stably() {
        let a = cfg(&["converge", "--t", "0.04", "--n-list", "8,16", "--out", "/tmp/a"]).unwrap();
        let b = cfg(&["converge", "--t", "0.04", "--n-list", "8,16", "--out", "/tmp/b"]).unwrap();
        assert_eq!(a.n_list, vec![8, 16]);
        assert_eq!(a.hash(), b.hash());
        assert!(a.artifact("csv").ends_with(format!("converge_{}.csv", a.hash())));
        let c = cfg(&["converge", "--t", "0.05"]).unwrap();
        assert_ne!(a.hash(), c.hash());
        assert_eq!(cfg(&["converge", "--family", "fourier:3"]).unwrap().generator().unwrap(), Generator::Fourier { k: 3 });
    }

    #[test]
    fn config_errors() {
        assert!(cfg(&["solve", "--grid-h", "-1"]).is_err());
        assert!(cfg(&["converge", "--family", "spiral"]).is_err());
        assert!(cfg(&["measures", "--half-space", "0,0,0,0"]).is_err());
        assert!(is_config_error(&GnpError::LevelOutOfRange { t: 1.0, limit: 0.1 }));
        assert!(!is_config_error(&GnpError::SingularSystem));
    }

    #[test]
    fn level_above_max_is_a_config_error() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().to_str().unwrap();
        let code = main_with_args(
            ["gnplab", "levelsets", "--grid-h", "0.0625", "--t", "0.5", "--out", out].map(std::ffi::OsString::from),
        );
        assert_eq!(code, 2);
        let code = main_with_args(["gnplab", "measures", "--out", out].map(std::ffi::OsString::from));
        assert_eq!(code, 0);
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 2);
    }
}

//! A domain read from its JSON description: boundary thickness, convexity
//! gap and the τ table on stdout.

use gnplab::geometry::{lipschitz_constant_tau, thickness_tau, write_tau_csv, DomainSpec};

const SPEC: &str = r#"{
  "core": {"kind": "polygon", "params": {"vertices": [[-1, -0.5], [1, -0.5], [0, 1]]}},
  "profile": {"kind": "fourier", "params": {"d0": 0.4, "modes": [{"k": 3, "amplitude": 0.15}]}},
  "samples": 384
}"#;

fn main() -> gnplab::Result<()> {
    let spec = match std::env::args().nth(1) {
        Some(path) => DomainSpec::load(path.as_ref())?,
        None => DomainSpec::from_json(SPEC)?,
    };
    let domain = spec.build()?;
    let rep = thickness_tau(&domain)?;
    eprintln!(
        "gamma {:.6}  Lipschitz(tau) {:.4}  undefined {}",
        rep.gamma,
        lipschitz_constant_tau(&rep),
        rep.undefined_count()
    );
    write_tau_csv(&rep, std::io::stdout().lock())
}

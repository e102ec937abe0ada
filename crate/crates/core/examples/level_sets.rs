//! Level sets of the torsion function on a Fourier-perturbed shell: area,
//! perimeter, thickness range and the thickness ODE along one ray.

use gnplab::analysis::{FourierFamily, Normalization};
use gnplab::geometry::{ConvexBody, Point};
use gnplab::levelsets::{check_structure, check_thickness_ode, extract_slices, SliceOptions};
use gnplab::solver::{solve_poisson, SourceSpec};

fn main() -> gnplab::Result<()> {
    let core = ConvexBody::disc(Point::ORIGIN, 0.5, 256)?;
    let domain = FourierFamily::new(0.5, 42).member(&core, 0, Normalization::MeanThickness)?;
    let u = solve_poisson(&domain, &SourceSpec::constant(1.0), 1.0 / 128.0)?;
    let max = u.max_value();
    let levels: Vec<f64> = (1..=8).map(|k| max * k as f64 / 9.0).collect();
    let slices = extract_slices(&u, &domain, &levels, &SliceOptions::default())
        .into_iter()
        .collect::<gnplab::Result<Vec<_>>>()?;
    println!("max u = {max:.6}");
    println!("      t      area  perimeter   min d_t   max d_t");
    for s in &slices {
        let fmt = |v: Option<f64>| v.map_or("     -   ".to_string(), |x| format!("{x:9.5}"));
        println!("{:.5}  {:8.5}  {:9.5} {} {}", s.t, s.area, s.perimeter, fmt(s.min_thickness()), fmt(s.max_thickness()));
    }
    let v = check_structure(&u, &domain, &slices)?;
    println!("structure violations: {}", v.total());
    let ode = check_thickness_ode(&u, &domain, 0, 0.02, 1e-3)?;
    println!("ray 0 at t = 0.02: d'(t) {:.5}  -1/|grad u| {:.5}  flux product {:.4}", ode.lhs, ode.rhs, ode.flux_product);
    Ok(())
}

//! Dirichlet problems `−Δu = f`, `−Δv = u` and the first Dirichlet
//! eigenvalue on Cartesian grids, with Shortley-Weller arms at cut cells.

mod field;
mod lattice;
pub mod linalg;
mod source;

pub use field::{bilinear, FieldHeader, GradientField, ScalarField};
pub use lattice::{Lattice, NodeKind, MIN_ARM};
pub use source::SourceSpec;

use crate::error::{GnpError, Result};
use crate::geometry::{GnpDomain, Region};
use crate::grid::GridSpec;
use linalg::{bicgstab, CsrMatrix, Ilu0};
use std::sync::Arc;

/// Stop for inverse iteration on `‖A φ − λ φ‖ / (λ ‖φ‖)`.
pub const EIGEN_TOL: f64 = 1e-9;

/// Spare nodes around the domain bounding box.
pub const GRID_MARGIN: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolveOptions {
    /// Bound on `‖Δ_h u + f‖_∞` (relative to `max(1, ‖f‖_∞)`).
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_iter: 50_000,
        }
    }
}

/// Assembled Shortley-Weller operator `−Δ_h` on one lattice.
#[derive(Clone, Debug)]
pub struct Discretization {
    lattice: Arc<Lattice>,
    matrix: CsrMatrix,
    ilu: Ilu0,
    pub options: SolveOptions,
}

impl Discretization {
    /// Grid aligned to multiples of `h` around the domain.
    pub fn new(domain: &GnpDomain, h: f64) -> Result<Self> {
        let grid = domain.grid(h, GRID_MARGIN)?;
        let (lo, hi) = domain.core().bounds();
        if (hi.x - lo.x).max(hi.y - lo.y) < 8.0 * h {
            return Err(GnpError::Config(format!("h = {h} leaves fewer than 8 cells across the core")));
        }
        Self::on_grid(domain, grid)
    }

    /// Uses a caller-supplied grid (for comparisons on a common lattice).
    pub fn on_grid(region: &impl Region, grid: GridSpec) -> Result<Self> {
        Self::from_lattice(Arc::new(Lattice::new(region, grid)?))
    }

    pub fn from_lattice(lattice: Arc<Lattice>) -> Result<Self> {
        if lattice.unknowns() == 0 {
            return Err(GnpError::SingularSystem);
        }
        let h = lattice.grid.h;
        let rows = lattice
            .nodes
            .iter()
            .map(|&idx| {
                let a = lattice.arms[idx];
                let (hl, hr, hd, hu) = (a[0] * h, a[1] * h, a[2] * h, a[3] * h);
                let coef = [
                    2.0 / (hl * (hl + hr)),
                    2.0 / (hr * (hl + hr)),
                    2.0 / (hd * (hd + hu)),
                    2.0 / (hu * (hd + hu)),
                ];
                let mut row = vec![(lattice.unknown[idx] as usize, coef.iter().sum::<f64>())];
                for (dir, c) in coef.iter().enumerate() {
                    if a[dir] >= 1.0 {
                        if let Some(nb) = lattice.neighbor(idx, dir) {
                            let k = lattice.unknown[nb];
                            if k != u32::MAX {
                                row.push((k as usize, -c));
                            }
                        }
                    }
                }
                row
            })
            .collect();
        let matrix = CsrMatrix::from_rows(rows);
        let ilu = Ilu0::new(&matrix)?;
        Ok(Self {
            lattice,
            matrix,
            ilu,
            options: SolveOptions::default(),
        })
    }

    pub fn lattice(&self) -> &Arc<Lattice> {
        &self.lattice
    }

    pub fn grid(&self) -> &GridSpec {
        &self.lattice.grid
    }

    /// Cell-averaged source at every node.
    pub fn source_nodes(&self, domain: &GnpDomain, source: &SourceSpec) -> Vec<f64> {
        let grid = &self.lattice.grid;
        (0..grid.len())
            .map(|idx| {
                if self.lattice.kind[idx].is_inside() {
                    source.cell_average(grid.node_at(idx), grid.h, domain.core())
                } else {
                    0.0
                }
            })
            .collect()
    }

    /// Solves `−Δ_h u = rhs` for per-node `rhs`.
    pub fn solve_nodes(&self, rhs: &[f64]) -> Result<ScalarField> {
        let b: Vec<f64> = self.lattice.nodes.iter().map(|&i| rhs[i]).collect();
        let (x, stats) = self.solve_unknowns(&b, None, self.options.tol)?;
        Ok(self.field(&x, stats.residual, stats.iterations))
    }

    fn solve_unknowns(&self, b: &[f64], x0: Option<&[f64]>, rel_tol: f64) -> Result<(Vec<f64>, linalg::SolveStats)> {
        let scale = b.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1.0);
        let mut x = x0.map_or_else(|| vec![0.0; b.len()], <[f64]>::to_vec);
        let stats = bicgstab(&self.matrix, &self.ilu, b, &mut x, rel_tol * scale, self.options.max_iter)?;
        Ok((x, stats))
    }

    fn field(&self, x: &[f64], residual: f64, iterations: usize) -> ScalarField {
        let mut values = vec![0.0; self.lattice.grid.len()];
        for (k, &idx) in self.lattice.nodes.iter().enumerate() {
            values[idx] = x[k];
        }
        ScalarField::from_nodes(self.lattice.clone(), values, residual, iterations)
    }

    pub fn solve_poisson(&self, domain: &GnpDomain, source: &SourceSpec) -> Result<ScalarField> {
        source.validate()?;
        self.solve_nodes(&self.source_nodes(domain, source))
    }

    pub fn solve_biharmonic(&self, domain: &GnpDomain, source: &SourceSpec) -> Result<(ScalarField, ScalarField)> {
        let u = self.solve_poisson(domain, source)?;
        let v = self.solve_nodes(u.values())?;
        Ok((u, v))
    }

    /// Smallest eigenvalue of `−Δ_h` by inverse iteration with zero shift,
    /// started from the torsion function. The eigenfunction is positive
    /// and normalized to `h² Σ φ² = 1`.
    pub fn eigen_lambda1(&self) -> Result<Eigenpair> {
        let n = self.lattice.unknowns();
        let h2 = self.lattice.grid.h * self.lattice.grid.h;
        let (mut x, _) = self.solve_unknowns(&vec![1.0; n], None, self.options.tol)?;
        let normalize = |x: &mut Vec<f64>| {
            let nrm = (h2 * x.iter().map(|v| v * v).sum::<f64>()).sqrt();
            x.iter_mut().for_each(|v| *v /= nrm);
        };
        normalize(&mut x);
        let mut lambda;
        let mut iterations = 0;
        let mut guess: Option<Vec<f64>> = None;
        let mut ax = vec![0.0; n];
        let residual = loop {
            let (mut y, _) = self.solve_unknowns(&x, guess.as_deref(), 1e-11)?;
            iterations += 1;
            // Rayleigh quotient of y, using A y = x
            let yy: f64 = y.iter().map(|v| v * v).sum();
            let xy: f64 = x.iter().zip(&y).map(|(a, b)| a * b).sum();
            lambda = xy / yy;
            normalize(&mut y);
            self.matrix.matvec(&y, &mut ax);
            let num = ax.iter().zip(&y).map(|(a, b)| (a - lambda * b).powi(2)).sum::<f64>().sqrt();
            let residual = num / (lambda * y.iter().map(|v| v * v).sum::<f64>().sqrt());
            guess = Some(y.iter().map(|v| v / lambda).collect());
            x = y;
            if residual <= EIGEN_TOL {
                break residual;
            }
            if iterations >= 500 {
                return Err(GnpError::NonConvergence { iterations, residual });
            }
        };
        if x.iter().sum::<f64>() < 0.0 {
            x.iter_mut().for_each(|v| *v = -*v);
        }
        Ok(Eigenpair {
            lambda,
            field: self.field(&x, residual, iterations),
            residual,
            iterations,
        })
    }
}

#[derive(Clone, Debug)]
pub struct Eigenpair {
    pub lambda: f64,
    pub field: ScalarField,
    /// `‖A φ − λ φ‖ / (λ ‖φ‖)`.
    pub residual: f64,
    pub iterations: usize,
}

/// `−Δu = f` in `Ω`, `u = 0` on `∂Ω`.
pub fn solve_poisson(domain: &GnpDomain, source: &SourceSpec, h: f64) -> Result<ScalarField> {
    Discretization::new(domain, h)?.solve_poisson(domain, source)
}

/// `−Δu = f`, `−Δv = u`, `u = v = 0` on `∂Ω`.
pub fn solve_biharmonic_system(domain: &GnpDomain, source: &SourceSpec, h: f64) -> Result<(ScalarField, ScalarField)> {
    Discretization::new(domain, h)?.solve_biharmonic(domain, source)
}

pub fn gradient(field: &ScalarField) -> &GradientField {
    field.gradient()
}

/// First Dirichlet eigenvalue and eigenfunction.
pub fn eigen_lambda1(domain: &GnpDomain, h: f64) -> Result<(f64, ScalarField)> {
    let e = Discretization::new(domain, h)?.eigen_lambda1()?;
    Ok((e.lambda, e.field))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{make_domain, ConvexBody, Point, ThicknessProfile};

    fn annulus(a: f64, d: f64) -> GnpDomain {
        let core = ConvexBody::disc(Point::ORIGIN, a, 512).unwrap();
        let prof = ThicknessProfile::constant(&core, d).unwrap();
        make_domain(core, prof).unwrap()
    }

    #[test]
    fn radial_centre_value() {
        let dom = annulus(0.5, 0.5);
        let u = solve_poisson(&dom, &SourceSpec::constant(1.0), 1.0 / 64.0).unwrap();
        let exact = 0.125 * 2f64.ln() + 0.0625;
        assert!((u.sample(Point::ORIGIN) - exact).abs() < 0.01 * exact);
        assert!(u.residual <= 1e-10);
        assert!(u.min_inside() > 0.0);
    }

    #[test]
    fn zero_source_and_linearity() {
        let dom = annulus(0.5, 0.5);
        let disc = Discretization::new(&dom, 1.0 / 32.0).unwrap();
        let z = disc.solve_poisson(&dom, &SourceSpec::constant(0.0)).unwrap();
        assert_eq!(z.max_value(), 0.0);
        let (u1, v1) = disc.solve_biharmonic(&dom, &SourceSpec::constant(1.0)).unwrap();
        let (u2, v2) = disc.solve_biharmonic(&dom, &SourceSpec::constant(2.0)).unwrap();
        for i in 0..u1.values().len() {
            assert!((u2.values()[i] - 2.0 * u1.values()[i]).abs() < 1e-9);
            assert!((v2.values()[i] - 2.0 * v1.values()[i]).abs() < 1e-9);
        }
    }

    #[test]
    fn square_eigenvalue() {
        let grid = GridSpec::covering(Point::new(0.0, 0.0), Point::new(1.0, 1.0), 1.0 / 32.0, 2).unwrap();
        let disc = Discretization::on_grid(&SquareRegion, grid).unwrap();
        let e = disc.eigen_lambda1().unwrap();
        let exact = 2.0 * std::f64::consts::PI.powi(2);
        assert!((e.lambda - exact).abs() < 0.01 * exact, "{}", e.lambda);
        assert!(e.residual < 1e-8);
        assert!(e.field.min_inside() > 0.0);
    }

    struct SquareRegion;
    impl Region for SquareRegion {
        fn contains(&self, p: Point) -> bool {
            p.x > 0.0 && p.x < 1.0 && p.y > 0.0 && p.y < 1.0
        }
    }
}

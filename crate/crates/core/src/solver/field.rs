use super::lattice::{opposite, Lattice, NodeKind};
use crate::error::Result;
use crate::geometry::Point;
use crate::grid::GridSpec;
use serde::Serialize;
use std::io::Write;
use std::sync::{Arc, OnceLock};

/// Grid function vanishing outside the domain, with a two-layer linear
/// extension across the boundary used by interpolation and contouring.
#[derive(Clone, Debug)]
pub struct ScalarField {
    lattice: Arc<Lattice>,
    values: Vec<f64>,
    ext: Vec<f64>,
    /// Final `‖Δ_h u + rhs‖_∞` over unknowns.
    pub residual: f64,
    pub iterations: usize,
    grad: OnceLock<GradientField>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FieldHeader {
    pub grid: GridSpec,
    pub h: f64,
    pub residual: f64,
    pub iterations: usize,
    pub unknowns: usize,
    pub max_value: f64,
}

impl ScalarField {
    /// Wraps per-node values (entries off the unknowns are ignored).
    pub fn from_nodes(lattice: Arc<Lattice>, mut values: Vec<f64>, residual: f64, iterations: usize) -> Self {
        for (v, k) in values.iter_mut().zip(&lattice.kind) {
            if !k.is_inside() {
                *v = 0.0;
            }
        }
        let ext = extend(&lattice, &values);
        Self {
            lattice,
            values,
            ext,
            residual,
            iterations,
            grad: OnceLock::new(),
        }
    }

    /// Samples `f` at the inside nodes.
    pub fn from_fn(lattice: Arc<Lattice>, f: impl Fn(Point) -> f64) -> Self {
        let values = (0..lattice.grid.len()).map(|i| f(lattice.grid.node_at(i))).collect();
        Self::from_nodes(lattice, values, 0.0, 0)
    }

    pub fn lattice(&self) -> &Arc<Lattice> {
        &self.lattice
    }

    pub fn grid(&self) -> &GridSpec {
        &self.lattice.grid
    }

    pub fn h(&self) -> f64 {
        self.lattice.grid.h
    }

    /// Nodal values (zero outside).
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Nodal values extended into the two ghost layers.
    pub fn extended(&self) -> &[f64] {
        &self.ext
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }

    pub fn min_inside(&self) -> f64 {
        self.lattice
            .nodes
            .iter()
            .map(|&i| self.values[i])
            .fold(f64::INFINITY, f64::min)
    }

    /// Bilinear interpolation of the extended field; zero off the grid.
    pub fn sample(&self, p: Point) -> f64 {
        bilinear(&self.lattice.grid, &self.ext, p)
    }

    /// `∫_Ω u` with cell fractions.
    pub fn integral(&self) -> f64 {
        let h2 = self.h() * self.h();
        self.ext
            .iter()
            .zip(&self.lattice.frac)
            .map(|(v, f)| v * f)
            .sum::<f64>()
            * h2
    }

    /// Same lattice, values multiplied by `s`.
    pub fn scaled(&self, s: f64) -> Self {
        Self::from_nodes(
            self.lattice.clone(),
            self.values.iter().map(|v| v * s).collect(),
            self.residual * s.abs(),
            self.iterations,
        )
    }

    pub fn header(&self) -> FieldHeader {
        FieldHeader {
            grid: *self.grid(),
            h: self.h(),
            residual: self.residual,
            iterations: self.iterations,
            unknowns: self.lattice.unknowns(),
            max_value: self.max_value(),
        }
    }

    /// Derivative of `u` along `axis` (0 = x, 1 = y) at node `idx`, using the
    /// Dirichlet value 0 at cut arms.
    fn axis_derivative(&self, idx: usize, axis: usize) -> f64 {
        let lat = &self.lattice;
        let h = lat.grid.h;
        let kind = lat.kind[idx];
        let side = |dir: usize| -> Option<(f64, f64)> {
            if kind.is_inside() {
                let arm = lat.arms[idx][dir];
                if arm < 1.0 {
                    return Some((0.0, arm * h));
                }
                lat.neighbor(idx, dir).map(|nb| (self.values[nb], h))
            } else {
                lat.neighbor(idx, dir)
                    .filter(|nb| lat.kind[*nb].in_support())
                    .map(|nb| (self.ext[nb], h))
            }
        };
        let u0 = self.ext[idx];
        three_point(u0, side(2 * axis), side(2 * axis + 1))
    }

    /// Nodal gradient on the support (inside plus ghost layers), computed
    /// once.
    pub fn gradient(&self) -> &GradientField {
        self.grad.get_or_init(|| self.compute_gradient())
    }

    fn compute_gradient(&self) -> GradientField {
        let n = self.lattice.grid.len();
        let g = (0..n)
            .map(|idx| {
                if self.lattice.kind[idx].in_support() {
                    Point::new(self.axis_derivative(idx, 0), self.axis_derivative(idx, 1))
                } else {
                    Point::ORIGIN
                }
            })
            .collect();
        GradientField {
            lattice: self.lattice.clone(),
            g,
            curvature: OnceLock::new(),
        }
    }

    /// Rows `x, y, mask, u, |∇u|` for every node.
    pub fn write_csv(&self, grad: &GradientField, out: impl Write) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["x", "y", "mask", "u", "grad_norm"])?;
        for idx in 0..self.lattice.grid.len() {
            let p = self.lattice.grid.node_at(idx);
            let k = self.lattice.kind[idx];
            let gn = if k.is_inside() { grad.g[idx].norm() } else { 0.0 };
            w.write_record([
                format!("{:.10e}", p.x),
                format!("{:.10e}", p.y),
                k.label().to_string(),
                format!("{:.12e}", self.values[idx]),
                format!("{gn:.12e}"),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// First derivative at 0 from values at signed offsets `−hl` and `+hr`;
/// exact for quadratics. Falls back to one-sided differences.
#[inline]
fn three_point(u0: f64, minus: Option<(f64, f64)>, plus: Option<(f64, f64)>) -> f64 {
    match (minus, plus) {
        (Some((um, hl)), Some((up, hr))) => (hl * hl * (up - u0) - hr * hr * (um - u0)) / (hl * hr * (hl + hr)),
        (Some((um, hl)), None) => (u0 - um) / hl,
        (None, Some((up, hr))) => (up - u0) / hr,
        (None, None) => 0.0,
    }
}

/// Bilinear interpolation of nodal data, zero off the grid.
pub fn bilinear(grid: &GridSpec, data: &[f64], p: Point) -> f64 {
    match grid.locate(p) {
        None => 0.0,
        Some((i, j, fx, fy)) => {
            let a = data[grid.index(i, j)];
            let b = data[grid.index(i + 1, j)];
            let c = data[grid.index(i, j + 1)];
            let d = data[grid.index(i + 1, j + 1)];
            (1.0 - fy) * ((1.0 - fx) * a + fx * b) + fy * ((1.0 - fx) * c + fx * d)
        }
    }
}

/// Linear extrapolation of inside values into the two ghost layers.
fn extend(lat: &Lattice, values: &[f64]) -> Vec<f64> {
    let mut ext = values.to_vec();
    let n = lat.grid.len();
    for g in 0..n {
        if lat.kind[g] != NodeKind::Ghost1 {
            continue;
        }
        let (mut sum, mut cnt) = (0.0, 0);
        for dir in 0..4 {
            let Some(nb) = lat.neighbor(g, dir) else { continue };
            if !lat.kind[nb].is_inside() {
                continue;
            }
            // boundary sits at θh from nb towards g
            let theta = lat.arms[nb][opposite(dir)];
            let far = lat.neighbor(nb, dir).filter(|f| lat.kind[*f].is_inside() && lat.arms[nb][dir] >= 1.0);
            // line through nb and the boundary point, unstable for small θ
            let near = values[nb] * (1.0 - 1.0 / theta.max(0.1));
            let est = match far {
                Some(f) => {
                    // line through the far node and the boundary point, blended
                    // smoothly so the extension varies continuously with θ
                    let wide = -values[f] * (1.0 - theta) / (1.0 + theta);
                    let s = ((theta - 0.25) / 0.5).clamp(0.0, 1.0);
                    let w = s * s * (3.0 - 2.0 * s);
                    w * near + (1.0 - w) * wide
                }
                None => near,
            };
            sum += est;
            cnt += 1;
        }
        ext[g] = if cnt > 0 { sum / cnt as f64 } else { 0.0 };
    }
    for g in 0..n {
        if lat.kind[g] != NodeKind::Ghost2 {
            continue;
        }
        let (mut sum, mut cnt) = (0.0, 0);
        let (mut fallback, mut fcnt) = (0.0, 0);
        for dir in 0..4 {
            let Some(nb) = lat.neighbor(g, dir) else { continue };
            if lat.kind[nb] != NodeKind::Ghost1 {
                continue;
            }
            fallback += ext[nb];
            fcnt += 1;
            if let Some(f) = lat.neighbor(nb, dir) {
                if lat.kind[f].is_inside() || lat.kind[f] == NodeKind::Ghost1 {
                    sum += 2.0 * ext[nb] - ext[f];
                    cnt += 1;
                }
            }
        }
        ext[g] = if cnt > 0 {
            sum / cnt as f64
        } else if fcnt > 0 {
            fallback / fcnt as f64
        } else {
            0.0
        };
    }
    ext
}

/// Nodal gradient of a [`ScalarField`].
#[derive(Clone, Debug)]
pub struct GradientField {
    lattice: Arc<Lattice>,
    g: Vec<Point>,
    curvature: OnceLock<(Vec<f64>, Vec<f64>)>,
}

impl GradientField {
    pub fn nodes(&self) -> &[Point] {
        &self.g
    }

    pub fn sample(&self, p: Point) -> Point {
        let grid = &self.lattice.grid;
        match grid.locate(p) {
            None => Point::ORIGIN,
            Some((i, j, fx, fy)) => {
                let a = self.g[grid.index(i, j)];
                let b = self.g[grid.index(i + 1, j)];
                let c = self.g[grid.index(i, j + 1)];
                let d = self.g[grid.index(i + 1, j + 1)];
                (a * (1.0 - fx) + b * fx) * (1.0 - fy) + (c * (1.0 - fx) + d * fx) * fy
            }
        }
    }

    /// `|∇u|` interpolated at `p`.
    pub fn magnitude(&self, p: Point) -> f64 {
        self.sample(p).norm()
    }

    /// Largest nodal magnitude over inside nodes.
    pub fn max_magnitude(&self) -> f64 {
        self.g
            .iter()
            .zip(&self.lattice.kind)
            .filter(|(_, k)| k.is_inside())
            .map(|(g, _)| g.norm())
            .fold(0.0, f64::max)
    }

    /// `∫_Ω |∇u|` with cell fractions.
    pub fn integral_of_magnitude(&self) -> f64 {
        let h2 = self.lattice.grid.h * self.lattice.grid.h;
        self.g
            .iter()
            .zip(&self.lattice.frac)
            .map(|(g, f)| g.norm() * f)
            .sum::<f64>()
            * h2
    }

    /// Derivative of nodal data along `axis` on the support.
    fn support_derivative(&self, data: &[f64], idx: usize, axis: usize) -> f64 {
        let lat = &self.lattice;
        let h = lat.grid.h;
        let side = |dir: usize| {
            lat.neighbor(idx, dir)
                .filter(|nb| lat.kind[*nb].in_support())
                .map(|nb| (data[nb], h))
        };
        three_point(data[idx], side(2 * axis), side(2 * axis + 1))
    }

    /// Nodal `div(∇u/|∇u|)` and `∇²u(∇u, ∇u)/|∇u|³` on the support.
    pub fn curvature_terms(&self) -> (&[f64], &[f64]) {
        let (div, hess) = self.curvature.get_or_init(|| self.compute_curvature());
        (div, hess)
    }

    fn compute_curvature(&self) -> (Vec<f64>, Vec<f64>) {
        let n = self.g.len();
        let nx: Vec<f64> = self.g.iter().map(|g| g.normalized().map_or(0.0, |v| v.x)).collect();
        let ny: Vec<f64> = self.g.iter().map(|g| g.normalized().map_or(0.0, |v| v.y)).collect();
        let gx: Vec<f64> = self.g.iter().map(|g| g.x).collect();
        let gy: Vec<f64> = self.g.iter().map(|g| g.y).collect();
        let mut div = vec![0.0; n];
        let mut hess = vec![0.0; n];
        for idx in 0..n {
            if !self.lattice.kind[idx].in_support() {
                continue;
            }
            div[idx] = self.support_derivative(&nx, idx, 0) + self.support_derivative(&ny, idx, 1);
            let uxx = self.support_derivative(&gx, idx, 0);
            let uyy = self.support_derivative(&gy, idx, 1);
            let uxy = 0.5 * (self.support_derivative(&gx, idx, 1) + self.support_derivative(&gy, idx, 0));
            let g = self.g[idx];
            let m = g.norm();
            if m > 0.0 {
                hess[idx] = (uxx * g.x * g.x + 2.0 * uxy * g.x * g.y + uyy * g.y * g.y) / (m * m * m);
            }
        }
        (div, hess)
    }

    pub fn grid(&self) -> &GridSpec {
        &self.lattice.grid
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_ramp_has_unit_gradient() {
        let grid = GridSpec::covering(Point::new(0.0, 0.0), Point::new(1.0, 1.0), 0.1, 0).unwrap();
        let lat = Arc::new(Lattice::unmasked(grid));
        let u = ScalarField::from_fn(lat.clone(), |p| p.x);
        let g = u.gradient();
        for v in g.nodes() {
            assert!((v.x - 1.0).abs() < 1e-12 && v.y.abs() < 1e-12);
        }
        let c = ScalarField::from_fn(lat, |_| 3.0);
        assert!(c.gradient().nodes().iter().all(|v| v.norm() < 1e-12));
    }

    #[test]
    fn bilinear_reproduces_linear_data() {
        let grid = GridSpec::covering(Point::new(0.0, 0.0), Point::new(1.0, 1.0), 0.25, 0).unwrap();
        let data: Vec<f64> = (0..grid.len()).map(|i| 2.0 * grid.node_at(i).x - grid.node_at(i).y).collect();
        let v = bilinear(&grid, &data, Point::new(0.3, 0.7));
        assert!((v - (0.6 - 0.7)).abs() < 1e-12);
    }
}

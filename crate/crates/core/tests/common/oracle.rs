//! Radial reference solution by 1-D quadrature, independent of the 2-D
//! solver: `u(r) = ∫_r^R M_f(s)/s ds` with `M_f(s) = ∫_0^s f ρ dρ`, and `v`
//! the same with `u` as source.

use std::f64::consts::PI;

pub struct RadialOracle {
    pub a: f64,
    pub big_r: f64,
    dr: f64,
    mu: Vec<f64>,
    u: Vec<f64>,
    mv: Vec<f64>,
    v: Vec<f64>,
}

/// `out[k] = ∫_0^{r_k} g(ρ) ρ dρ` with `g` taken at cell midpoints and
/// `ρ` integrated exactly.
fn moment(n: usize, dr: f64, g: impl Fn(usize) -> f64) -> Vec<f64> {
    let mut out = vec![0.0; n + 1];
    for k in 1..=n {
        let (r0, r1) = ((k - 1) as f64 * dr, k as f64 * dr);
        out[k] = out[k - 1] + g(k - 1) * 0.5 * (r1 * r1 - r0 * r0);
    }
    out
}

/// `out[k] = ∫_{r_k}^R m(s)/s ds`, trapezoid; `m(s)/s → 0` at the origin.
fn potential(m: &[f64], dr: f64) -> Vec<f64> {
    let n = m.len();
    let q: Vec<f64> = (0..n).map(|k| if k == 0 { 0.0 } else { m[k] / (k as f64 * dr) }).collect();
    let mut out = vec![0.0; n];
    for k in (0..n - 1).rev() {
        out[k] = out[k + 1] + 0.5 * dr * (q[k] + q[k + 1]);
    }
    out
}

impl RadialOracle {
    /// `f ≡ 1` on the disc of radius `a`, zero outside, Dirichlet at `R`.
    pub fn new(a: f64, big_r: f64) -> Self {
        // `a` must fall on a node so the jump of f is resolved exactly
        let per_unit = 400_000.0;
        let n = (big_r * per_unit).round() as usize;
        let dr = big_r / n as f64;
        assert!(((a / dr).round() * dr - a).abs() < 1e-12);
        // cell k is [k dr, (k+1) dr]; the jump of f sits on a node
        let mu = moment(n, dr, |k| if ((k as f64 + 0.5) * dr) < a { 1.0 } else { 0.0 });
        let u = potential(&mu, dr);
        let mv = moment(n, dr, |k| 0.5 * (u[k] + u[k + 1]));
        let v = potential(&mv, dr);
        Self { a, big_r, dr, mu, u, mv, v }
    }

    fn interp(&self, table: &[f64], r: f64) -> f64 {
        let x = (r / self.dr).clamp(0.0, (table.len() - 1) as f64);
        let k = (x.floor() as usize).min(table.len() - 2);
        let s = x - k as f64;
        table[k] * (1.0 - s) + table[k + 1] * s
    }

    pub fn u(&self, r: f64) -> f64 {
        self.interp(&self.u, r)
    }

    pub fn v(&self, r: f64) -> f64 {
        self.interp(&self.v, r)
    }

    /// `|u'(r)| = M_f(r)/r`.
    pub fn grad_u(&self, r: f64) -> f64 {
        self.interp(&self.mu, r) / r
    }

    pub fn grad_v(&self, r: f64) -> f64 {
        self.interp(&self.mv, r) / r
    }

    fn radius_of(&self, w: impl Fn(f64) -> f64, t: f64) -> f64 {
        let (mut lo, mut hi) = (0.0, self.big_r);
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if w(mid) > t {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// Radius of the level line `u = t` (u decreasing in r).
    pub fn level_radius(&self, t: f64) -> f64 {
        self.radius_of(|r| self.u(r), t)
    }

    pub fn level_radius_v(&self, s: f64) -> f64 {
        self.radius_of(|r| self.v(r), s)
    }

    /// `d_t = r_t − a`.
    pub fn thickness(&self, t: f64) -> f64 {
        self.level_radius(t) - self.a
    }

    fn area_integral(&self, table: &[f64]) -> f64 {
        2.0 * PI * moment(table.len() - 1, self.dr, |k| 0.5 * (table[k] + table[k + 1]))[table.len() - 1]
    }

    pub fn int_u(&self) -> f64 {
        self.area_integral(&self.u)
    }

    pub fn int_v(&self) -> f64 {
        self.area_integral(&self.v)
    }

    /// `∫_Ω |∇u| = 2π ∫ M_f(r) dr`.
    pub fn int_grad_u(&self) -> f64 {
        let n = self.mu.len();
        2.0 * PI * (0..n - 1).map(|k| 0.5 * self.dr * (self.mu[k] + self.mu[k + 1])).sum::<f64>()
    }

    pub fn max_u(&self) -> f64 {
        self.u[0]
    }
}

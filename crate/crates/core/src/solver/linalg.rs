//! Compressed sparse rows, ILU(0) and preconditioned BiCGSTAB.

use crate::error::{GnpError, Result};

#[derive(Clone, Debug)]
pub struct CsrMatrix {
    pub n: usize,
    pub row_ptr: Vec<usize>,
    pub col: Vec<usize>,
    pub val: Vec<f64>,
}

impl CsrMatrix {
    /// Builds from per-row `(column, value)` lists; columns are sorted here.
    pub fn from_rows(rows: Vec<Vec<(usize, f64)>>) -> Self {
        let n = rows.len();
        let mut row_ptr = Vec::with_capacity(n + 1);
        let mut col = Vec::new();
        let mut val = Vec::new();
        row_ptr.push(0);
        for mut r in rows {
            r.sort_by_key(|e| e.0);
            for (c, v) in r {
                col.push(c);
                val.push(v);
            }
            row_ptr.push(col.len());
        }
        Self { n, row_ptr, col, val }
    }

    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        for i in 0..self.n {
            let mut acc = 0.0;
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                acc += self.val[k] * x[self.col[k]];
            }
            y[i] = acc;
        }
    }

    /// `‖b − A x‖_∞`.
    pub fn residual_inf(&self, x: &[f64], b: &[f64]) -> f64 {
        let mut ax = vec![0.0; self.n];
        self.matvec(x, &mut ax);
        ax.iter().zip(b).map(|(a, b)| (b - a).abs()).fold(0.0, f64::max)
    }
}

/// Incomplete LU factorization with the sparsity pattern of `A`.
#[derive(Clone, Debug)]
pub struct Ilu0 {
    lu: CsrMatrix,
    diag: Vec<usize>,
}

impl Ilu0 {
    pub fn new(a: &CsrMatrix) -> Result<Self> {
        let mut lu = a.clone();
        let n = lu.n;
        let mut diag = vec![usize::MAX; n];
        for i in 0..n {
            for k in lu.row_ptr[i]..lu.row_ptr[i + 1] {
                if lu.col[k] == i {
                    diag[i] = k;
                }
            }
            if diag[i] == usize::MAX {
                return Err(GnpError::SingularSystem);
            }
        }
        for i in 1..n {
            let (start, end) = (lu.row_ptr[i], lu.row_ptr[i + 1]);
            for kk in start..end {
                let k = lu.col[kk];
                if k >= i {
                    break;
                }
                let pivot = lu.val[diag[k]];
                if pivot == 0.0 {
                    return Err(GnpError::SingularSystem);
                }
                let lik = lu.val[kk] / pivot;
                lu.val[kk] = lik;
                for jj in kk + 1..end {
                    let j = lu.col[jj];
                    // find (k, j) in row k
                    for kj in diag[k] + 1..lu.row_ptr[k + 1] {
                        if lu.col[kj] == j {
                            lu.val[jj] -= lik * lu.val[kj];
                            break;
                        }
                    }
                }
            }
        }
        Ok(Self { lu, diag })
    }

    /// Solves `L U z = r` in place.
    pub fn apply(&self, z: &mut [f64]) {
        let lu = &self.lu;
        for i in 0..lu.n {
            let mut acc = z[i];
            for k in lu.row_ptr[i]..self.diag[i] {
                acc -= lu.val[k] * z[lu.col[k]];
            }
            z[i] = acc;
        }
        for i in (0..lu.n).rev() {
            let mut acc = z[i];
            for k in self.diag[i] + 1..lu.row_ptr[i + 1] {
                acc -= lu.val[k] * z[lu.col[k]];
            }
            z[i] = acc / lu.val[self.diag[i]];
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SolveStats {
    pub iterations: usize,
    /// True residual `‖b − A x‖_∞` at exit.
    pub residual: f64,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm_inf(a: &[f64]) -> f64 {
    a.iter().fold(0.0, |m, v| m.max(v.abs()))
}

/// Right-preconditioned BiCGSTAB until `‖b − A x‖_∞ <= tol`, starting from
/// `x`. Restarts from the true residual when the recurrence stagnates.
pub fn bicgstab(a: &CsrMatrix, m: &Ilu0, b: &[f64], x: &mut [f64], tol: f64, max_iter: usize) -> Result<SolveStats> {
    let n = a.n;
    let mut r = vec![0.0; n];
    let mut tmp = vec![0.0; n];
    let mut iterations = 0;
    let true_residual = |x: &[f64], r: &mut [f64], tmp: &mut [f64]| {
        a.matvec(x, tmp);
        for i in 0..n {
            r[i] = b[i] - tmp[i];
        }
        norm_inf(r)
    };
    let mut res = true_residual(x, &mut r, &mut tmp);
    let mut p = vec![0.0; n];
    let mut v = vec![0.0; n];
    let mut s = vec![0.0; n];
    let mut t = vec![0.0; n];
    let mut phat = vec![0.0; n];
    let mut shat = vec![0.0; n];
    while res > tol && iterations < max_iter {
        // one restart cycle
        let r0 = r.clone();
        let (mut rho, mut alpha, mut omega) = (1.0f64, 1.0f64, 1.0f64);
        p.iter_mut().for_each(|e| *e = 0.0);
        v.iter_mut().for_each(|e| *e = 0.0);
        let mut cycle = 0;
        loop {
            let rho_new = dot(&r0, &r);
            if rho_new.abs() < 1e-300 || omega.abs() < 1e-300 {
                break;
            }
            let beta = (rho_new / rho) * (alpha / omega);
            rho = rho_new;
            for i in 0..n {
                p[i] = r[i] + beta * (p[i] - omega * v[i]);
            }
            phat.copy_from_slice(&p);
            m.apply(&mut phat);
            a.matvec(&phat, &mut v);
            let r0v = dot(&r0, &v);
            if r0v.abs() < 1e-300 {
                break;
            }
            alpha = rho / r0v;
            for i in 0..n {
                s[i] = r[i] - alpha * v[i];
            }
            iterations += 1;
            cycle += 1;
            if norm_inf(&s) <= 0.5 * tol {
                for i in 0..n {
                    x[i] += alpha * phat[i];
                }
                break;
            }
            shat.copy_from_slice(&s);
            m.apply(&mut shat);
            a.matvec(&shat, &mut t);
            let tt = dot(&t, &t);
            omega = if tt > 0.0 { dot(&t, &s) / tt } else { 0.0 };
            for i in 0..n {
                x[i] += alpha * phat[i] + omega * shat[i];
                r[i] = s[i] - omega * t[i];
            }
            if norm_inf(&r) <= 0.5 * tol || iterations >= max_iter || cycle >= 2000 {
                break;
            }
        }
        res = true_residual(x, &mut r, &mut tmp);
        if cycle == 0 {
            break;
        }
    }
    if res > tol {
        return Err(GnpError::NonConvergence {
            iterations,
            residual: res,
        });
    }
    Ok(SolveStats {
        iterations,
        residual: res,
    })
}

use alloc::vec;
use alloc::vec::Vec;

use super::IluFactors;
use crate::sparse::{self, CsrMatrix};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GmresOptions {
    /// Krylov dimension of one restart cycle.
    pub dim: usize,
    /// Relative tolerance on the preconditioned residual.
    pub tol: f64,
    pub max_restarts: usize,
}

impl Default for GmresOptions {
    fn default() -> Self {
        GmresOptions { dim: 5, tol: 1e-10, max_restarts: 1 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GmresReport {
    /// Arnoldi steps over all cycles.
    pub iterations: usize,
    pub restarts: usize,
    /// Final relative preconditioned residual.
    pub residual: f64,
    pub converged: bool,
    /// Relative preconditioned residual after every Arnoldi step.
    pub history: Vec<f64>,
}

/// Restarted GMRES on `M^-1 A x = M^-1 rhs` with `M = L U` from ILU(0).
///
/// `x` holds the initial guess on entry. Within each cycle the least-squares
/// residual is checked to be non-increasing; a whole cycle without any
/// decrease is reported as stagnation.
pub fn gmres_left_pc(
    a: &CsrMatrix,
    m: &IluFactors,
    rhs: &[f64],
    x: &mut [f64],
    opts: &GmresOptions,
) -> Result<GmresReport> {
    let n = a.nrows;
    if rhs.len() != n || x.len() != n {
        return Err(Error::Shape { what: "gmres vector", expected: n, found: rhs.len().min(x.len()) });
    }
    if opts.dim == 0 {
        return Err(Error::param("Krylov dimension must be positive"));
    }
    let s = opts.dim;
    let bnorm = sparse::norm2(&m.solve(rhs));
    let mut report = GmresReport { iterations: 0, restarts: 0, residual: 0.0, converged: true, history: Vec::new() };
    if bnorm == 0.0 {
        x.iter_mut().for_each(|v| *v = 0.0);
        return Ok(report);
    }

    let mut v: Vec<Vec<f64>> = vec![vec![0.0; n]; s + 1];
    let mut hess = vec![vec![0.0; s]; s + 1];
    let mut cs = vec![0.0; s];
    let mut sn = vec![0.0; s];
    let mut g = vec![0.0; s + 1];
    let mut w = vec![0.0; n];

    let mut residual = preconditioned_residual(a, m, rhs, x, &mut v[0]);
    report.residual = residual / bnorm;
    while report.residual > opts.tol {
        if report.restarts == opts.max_restarts {
            report.converged = false;
            return Ok(report);
        }
        let cycle_start = residual;
        v[0].iter_mut().for_each(|vi| *vi /= residual);
        g.iter_mut().for_each(|e| *e = 0.0);
        g[0] = residual;
        let mut last = residual;
        let mut k = 0;
        while k < s {
            a.spmv(&v[k], &mut w);
            m.solve_in_place(&mut w);
            for i in 0..=k {
                let hik = sparse::dot(&w, &v[i]);
                hess[i][k] = hik;
                sparse::axpy(-hik, &v[i], &mut w);
            }
            let wn = sparse::norm2(&w);
            hess[k + 1][k] = wn;
            for i in 0..k {
                let t = cs[i] * hess[i][k] + sn[i] * hess[i + 1][k];
                hess[i + 1][k] = -sn[i] * hess[i][k] + cs[i] * hess[i + 1][k];
                hess[i][k] = t;
            }
            let r = libm::hypot(hess[k][k], hess[k + 1][k]);
            if r == 0.0 {
                break;
            }
            cs[k] = hess[k][k] / r;
            sn[k] = hess[k + 1][k] / r;
            hess[k][k] = r;
            hess[k + 1][k] = 0.0;
            g[k + 1] = -sn[k] * g[k];
            g[k] *= cs[k];
            let now = g[k + 1].abs();
            if now > last * (1.0 + 1e-12) {
                return Err(Error::NonMonotoneResidual { previous: last, current: now });
            }
            last = now;
            report.history.push(now / bnorm);
            report.iterations += 1;
            k += 1;
            if now / bnorm <= opts.tol || wn <= 1e-300 {
                break;
            }
            let inv = 1.0 / wn;
            for (dst, src) in v[k].iter_mut().zip(&w) {
                *dst = src * inv;
            }
        }
        // Back substitution for the cycle's coefficients.
        let mut y = vec![0.0; k];
        for i in (0..k).rev() {
            let mut t = g[i];
            for j in i + 1..k {
                t -= hess[i][j] * y[j];
            }
            y[i] = t / hess[i][i];
        }
        for (j, yj) in y.iter().enumerate() {
            sparse::axpy(*yj, &v[j], x);
        }
        report.restarts += 1;
        residual = preconditioned_residual(a, m, rhs, x, &mut v[0]);
        report.residual = residual / bnorm;
        if residual >= cycle_start && report.residual > opts.tol {
            return Err(Error::Stagnation { restart: report.restarts, residual: report.residual });
        }
    }
    Ok(report)
}

fn preconditioned_residual(a: &CsrMatrix, m: &IluFactors, rhs: &[f64], x: &[f64], out: &mut [f64]) -> f64 {
    a.spmv(x, out);
    for (o, b) in out.iter_mut().zip(rhs) {
        *o = b - *o;
    }
    m.solve_in_place(out);
    sparse::norm2(out)
}

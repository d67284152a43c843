use alloc::vec;
use alloc::vec::Vec;

use super::{gmres_left_pc, schur_richardson, GmresOptions, IluFactors, SchurOperator};
use crate::assembly::SaddleSystem;
use crate::sparse;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UzawaControls {
    pub tol_outer: f64,
    pub max_outer: usize,
    /// Inner GMRES for the velocity correction.
    pub gmres: GmresOptions,
    /// Richardson sweeps for the pressure correction.
    pub richardson_steps: usize,
    /// Divergence is declared when the residual grows by `divergence_factor`
    /// over `divergence_window` outer iterations.
    pub divergence_window: usize,
    pub divergence_factor: f64,
}

impl Default for UzawaControls {
    fn default() -> Self {
        UzawaControls {
            tol_outer: 1e-10,
            max_outer: 500,
            gmres: GmresOptions { dim: 5, tol: 1e-3, max_restarts: 4 },
            richardson_steps: 30,
            divergence_window: 20,
            divergence_factor: 10.0,
        }
    }
}

/// The weighted-mean functional `m` fixing the pressure and the constant
/// pressure direction `k` used to factor it out.
#[derive(Debug, Clone, PartialEq)]
pub struct PressureGauge {
    pub mean: Vec<f64>,
    pub constant: Vec<f64>,
}

impl PressureGauge {
    /// Removes the `mean` component of a continuity residual along `mean`,
    /// leaving `constant . r = 0`.
    pub fn project_residual(&self, r: &mut [f64]) {
        let t = sparse::dot(&self.constant, r) / sparse::dot(&self.constant, &self.mean);
        sparse::axpy(-t, &self.mean, r);
    }

    /// Shifts a pressure along `constant` to zero weighted mean.
    pub fn normalize(&self, z: &mut [f64]) {
        let t = sparse::dot(&self.mean, z) / sparse::dot(&self.mean, &self.constant);
        sparse::axpy(-t, &self.constant, z);
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct UzawaState {
    pub chi: Vec<f64>,
    pub xi: Vec<f64>,
    /// Relative Jacobi-scaled full residual at the start of every outer iteration.
    pub residual_history: Vec<f64>,
    /// Number of outer iterations performed.
    pub iterations: usize,
    pub converged: bool,
    /// Arnoldi steps spent in the velocity corrections.
    pub inner_iterations: usize,
}

impl UzawaState {
    pub fn residual(&self) -> f64 {
        self.residual_history.last().copied().unwrap_or(f64::INFINITY)
    }
}

/// Incomplete Uzawa iteration from the initial guess `(chi, xi)`.
pub fn uzawa_solve(
    sys: &SaddleSystem,
    schur: &SchurOperator,
    ilu: &IluFactors,
    gauge: Option<&PressureGauge>,
    chi: Vec<f64>,
    xi: Vec<f64>,
    controls: &UzawaControls,
) -> Result<UzawaState> {
    let (nv, np) = (sys.a.nrows, sys.b1.ncols);
    if chi.len() != nv {
        return Err(Error::Shape { what: "initial velocity", expected: nv, found: chi.len() });
    }
    if xi.len() != np || sys.b2.ncols != np || sys.g.len() != np || schur.lumped.len() != np {
        return Err(Error::Shape { what: "pressure vectors", expected: np, found: xi.len() });
    }
    // Rows carry very different powers of the weight, so residuals are
    // measured after Jacobi scaling by diag(A) and the lumped Schur diagonal.
    let sv: Vec<f64> = sys.a.diagonal().iter().map(|&d| if d != 0.0 { 1.0 / d.abs() } else { 1.0 }).collect();
    let sp: Vec<f64> = schur.lumped.iter().map(|&d| 1.0 / d).collect();
    let denom = {
        let s = scaled_sq(&sv, &sys.f) + scaled_sq(&sp, &sys.g);
        if s > 0.0 {
            libm::sqrt(s)
        } else {
            1.0
        }
    };
    let mut st = UzawaState {
        chi,
        xi,
        residual_history: Vec::new(),
        iterations: 0,
        converged: false,
        inner_iterations: 0,
    };
    if let Some(g) = gauge {
        g.normalize(&mut st.xi);
    }
    let mut rv = vec![0.0; nv];
    let mut rp = vec![0.0; np];
    let mut tmp = vec![0.0; nv];
    let mut dx = vec![0.0; nv];
    loop {
        velocity_residual(sys, &st.chi, &st.xi, &mut rv, &mut tmp);
        continuity_residual(sys, gauge, &st.chi, &mut rp);
        let res = libm::sqrt(scaled_sq(&sv, &rv) + scaled_sq(&sp, &rp)) / denom;
        st.residual_history.push(res);
        if !res.is_finite() {
            return Err(Error::Divergence { history: st.residual_history });
        }
        if res <= controls.tol_outer {
            st.converged = true;
            return Ok(st);
        }
        if st.iterations == controls.max_outer {
            return Ok(st);
        }
        let l = st.residual_history.len() - 1;
        // The warm-start residual is not a fair baseline: the first
        // correction of a new Picard system always raises it.
        if l > controls.divergence_window
            && res > controls.divergence_factor * st.residual_history[l - controls.divergence_window]
        {
            return Err(Error::Divergence { history: st.residual_history });
        }

        dx.iter_mut().for_each(|v| *v = 0.0);
        let rep = gmres_left_pc(&sys.a, ilu, &rv, &mut dx, &controls.gmres)?;
        st.inner_iterations += rep.iterations;
        sparse::axpy(1.0, &dx, &mut st.chi);

        continuity_residual(sys, gauge, &st.chi, &mut rp);
        let d = schur_richardson(schur, &rp, controls.richardson_steps);
        sparse::axpy(1.0, &d, &mut st.xi);
        if let Some(g) = gauge {
            g.normalize(&mut st.xi);
        }
        st.iterations += 1;
    }
}

fn scaled_sq(scale: &[f64], r: &[f64]) -> f64 {
    scale.iter().zip(r).map(|(s, v)| (s * v) * (s * v)).sum()
}

/// `F - A chi - B1 xi`.
fn velocity_residual(sys: &SaddleSystem, chi: &[f64], xi: &[f64], out: &mut [f64], tmp: &mut [f64]) {
    sys.a.spmv(chi, out);
    sys.b1.spmv(xi, tmp);
    for i in 0..out.len() {
        out[i] = sys.f[i] - out[i] - tmp[i];
    }
}

/// `B2^T chi - G`, projected when a gauge is given.
fn continuity_residual(sys: &SaddleSystem, gauge: Option<&PressureGauge>, chi: &[f64], out: &mut [f64]) {
    sys.b2.spmv_transpose(chi, out);
    for (o, g) in out.iter_mut().zip(&sys.g) {
        *o -= g;
    }
    if let Some(g) = gauge {
        g.project_residual(out);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::{ilu0, SchurOperator};
    use crate::sparse::CsrMatrix;

    fn decoupled() -> (SaddleSystem, SchurOperator) {
        let a = CsrMatrix::from_dense(&[
            vec![4.0, -1.0, 0.0, 0.3],
            vec![-1.0, 4.0, -1.0, 0.0],
            vec![0.0, -1.5, 4.0, -1.0],
            vec![0.2, 0.0, -1.0, 3.0],
        ]);
        let zero = CsrMatrix::from_triplets(4, 2, &[]);
        let sys = SaddleSystem {
            a,
            b1: zero.clone(),
            b2: zero,
            f: vec![1.0, 2.0, -1.0, 0.5],
            g: vec![0.0; 2],
            constrained: vec![],
        };
        let schur = SchurOperator::from_matrix(CsrMatrix::identity(2)).unwrap();
        (sys, schur)
    }

    #[test]
    fn decoupled_system_reduces_to_gmres() {
        let (sys, schur) = decoupled();
        let ilu = ilu0(&sys.a).unwrap();
        let st = uzawa_solve(&sys, &schur, &ilu, None, vec![0.0; 4], vec![0.0; 2], &UzawaControls::default()).unwrap();
        assert!(st.converged);
        let mut x = vec![0.0; 4];
        let opts = GmresOptions { dim: 5, tol: 1e-14, max_restarts: 50 };
        gmres_left_pc(&sys.a, &ilu, &sys.f, &mut x, &opts).unwrap();
        for (p, q) in st.chi.iter().zip(&x) {
            assert!((p - q).abs() < 1e-10);
        }
        assert_eq!(st.xi, vec![0.0; 2]);
    }

    #[test]
    fn exact_initial_guess_stops_immediately() {
        let (sys, schur) = decoupled();
        let ilu = ilu0(&sys.a).unwrap();
        let mut x = vec![0.0; 4];
        let opts = GmresOptions { dim: 5, tol: 1e-15, max_restarts: 50 };
        gmres_left_pc(&sys.a, &ilu, &sys.f, &mut x, &opts).unwrap();
        let st = uzawa_solve(&sys, &schur, &ilu, None, x, vec![0.0; 2], &UzawaControls::default()).unwrap();
        assert_eq!(st.iterations, 0);
        assert!(st.converged);
    }

    #[test]
    fn growing_residual_is_reported() {
        // Coupling with the wrong sign makes the pressure update push away.
        let a = CsrMatrix::identity(2);
        let b = CsrMatrix::from_dense(&[vec![1.0], vec![0.0]]);
        let neg = CsrMatrix::from_dense(&[vec![-1.0], vec![0.0]]);
        let sys = SaddleSystem { a, b1: b, b2: neg, f: vec![1.0, 0.0], g: vec![0.0], constrained: vec![] };
        let schur = SchurOperator::from_matrix(CsrMatrix::from_dense(&[vec![0.5]])).unwrap();
        let ilu = ilu0(&sys.a).unwrap();
        let r = uzawa_solve(&sys, &schur, &ilu, None, vec![0.0; 2], vec![0.0], &UzawaControls::default());
        assert!(matches!(r, Err(Error::Divergence { .. })));
    }
}

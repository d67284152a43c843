//! Shared dense oracles for the integration tests.
#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};

use wfem_core::assembly::{self, Discretization, MethodParams, SaddleSystem};
use wfem_core::benchmark::exact::{self, BenchmarkCase};
use wfem_core::mesh;
use wfem_core::picard;
use wfem_core::quadrature::QuadraturePolicy;
use wfem_core::solver::{self, PressureGauge, UzawaControls};
use wfem_core::sparse::CsrMatrix;

pub fn dense(a: &CsrMatrix) -> DMatrix<f64> {
    let d = a.to_dense();
    DMatrix::from_fn(a.nrows, a.ncols, |i, j| d[i][j])
}

/// `[[A, B1, 0], [B2^T, 0, m], [0, m^T, 0]]` solved by LU; returns `(y, z)`.
pub fn bordered_solve(sys: &SaddleSystem, mean: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let (nv, np) = (sys.a.nrows, sys.b1.ncols);
    let n = nv + np + 1;
    let mut k = DMatrix::zeros(n, n);
    k.view_mut((0, 0), (nv, nv)).copy_from(&dense(&sys.a));
    k.view_mut((0, nv), (nv, np)).copy_from(&dense(&sys.b1));
    k.view_mut((nv, 0), (np, nv)).copy_from(&dense(&sys.b2).transpose());
    for j in 0..np {
        k[(nv + j, n - 1)] = mean[j];
        k[(n - 1, nv + j)] = mean[j];
    }
    let mut rhs = DVector::zeros(n);
    rhs.rows_mut(0, nv).copy_from_slice(&sys.f);
    rhs.rows_mut(nv, np).copy_from_slice(&sys.g);
    let x = k.lu().solve(&rhs).expect("bordered system is singular");
    (x.rows(0, nv).iter().copied().collect(), x.rows(nv, np).iter().copied().collect())
}

pub fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

pub fn max_abs(a: &[f64]) -> f64 {
    a.iter().map(|x| x.abs()).fold(0.0, f64::max)
}

pub fn tight() -> UzawaControls {
    UzawaControls { tol_outer: 1e-14, max_outer: 5000, ..UzawaControls::default() }
}

/// One linearised step on a coarse benchmark mesh, about a nonzero velocity.
pub fn coarse_check(m: usize, params: MethodParams) -> (f64, f64) {
    let fine = mesh::build_mesh(&mesh::build_domain(m).unwrap(), 1.0).unwrap();
    let base = fine.elements.len() / 3;
    assert!(base <= 8, "{base} base triangles");
    let d = Discretization::new(fine, params, &QuadraturePolicy::default()).unwrap();
    let case = BenchmarkCase::new(m, params.gamma, params.alpha, params.mu).unwrap();
    let prev: Vec<f64> = (0..d.velocity_len()).map(|i| 0.3 * (1.7 * i as f64).sin()).collect();
    let sys = picard::linearized_system(
        &d,
        &prev,
        |x| exact::manufactured_f(&case, x),
        |x| Ok(exact::exact_velocity(&case, x)),
    )
    .unwrap();
    let gauge = PressureGauge {
        mean: assembly::weighted_mean_vector(&d),
        constant: assembly::constant_pressure_vector(&d),
    };
    let schur = solver::build_schur(&d).unwrap();
    let ilu = solver::ilu0(&sys.a).unwrap();
    let st = solver::uzawa_solve(
        &sys,
        &schur,
        &ilu,
        Some(&gauge),
        vec![0.0; d.velocity_len()],
        vec![0.0; d.pressure_len()],
        &tight(),
    )
    .unwrap();
    assert!(st.converged, "residual {:e}", st.residual());
    let (y, z) = bordered_solve(&sys, &gauge.mean);
    (max_diff(&st.chi, &y) / max_abs(&y).max(1.0), max_diff(&st.xi, &z) / max_abs(&z).max(1.0))
}


//! Picard linearisation of the nonlinear problem and recovery of nodal values.

use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;

use crate::assembly::{self, Discretization, SaddleSystem};
use crate::geometry::Point2;
use crate::solver::{self, PressureGauge, UzawaControls};
use crate::space;
use crate::sparse;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PicardControls {
    /// Relative update of the velocity coefficients that stops the iteration.
    pub tol: f64,
    pub max_iter: usize,
    /// Consecutive non-decreasing updates tolerated before giving up.
    pub stall_window: usize,
    pub uzawa: UzawaControls,
}

impl Default for PicardControls {
    fn default() -> Self {
        PicardControls { tol: 1e-9, max_iter: 50, stall_window: 5, uzawa: UzawaControls::default() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PicardLogEntry {
    pub k: usize,
    /// Outer Uzawa iterations of this step.
    pub uzawa_iterations: usize,
    pub uzawa_residual: f64,
    pub uzawa_converged: bool,
    pub relative_update: f64,
    /// Relative residual of every outer Uzawa iteration.
    pub uzawa_history: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PicardState {
    pub y: Vec<f64>,
    pub z: Vec<f64>,
    pub k: usize,
    pub converged: bool,
    pub log: Vec<PicardLogEntry>,
}

impl PicardState {
    pub fn update_history(&self) -> Vec<f64> {
        self.log.iter().map(|e| e.relative_update).collect()
    }

    pub fn total_uzawa_iterations(&self) -> usize {
        self.log.iter().map(|e| e.uzawa_iterations).sum()
    }
}

/// Pieces of the system that do not change between Picard steps.
struct FrozenParts {
    template: SaddleSystem,
    constrained: Vec<(usize, f64)>,
    schur: solver::SchurOperator,
    gauge: PressureGauge,
}

fn freeze<F, S>(d: &Discretization, f: F, sigma: S) -> Result<FrozenParts>
where
    F: Fn(Point2) -> Result<[f64; 2]>,
    S: Fn(Point2) -> Result<[f64; 2]>,
{
    let (b1, b2, _, _) = assembly::assemble_b1_b2(d)?;
    let load = assembly::assemble_f(d, f)?;
    let constrained = assembly::boundary_values(d, sigma)?;
    let template = SaddleSystem {
        a: sparse::CsrMatrix::identity(0),
        b1,
        b2,
        f: load,
        g: vec![0.0; d.pressure_len()],
        constrained: Vec::new(),
    };
    let schur = solver::build_schur(d)?;
    let gauge = PressureGauge {
        mean: assembly::weighted_mean_vector(d),
        constant: assembly::constant_pressure_vector(d),
    };
    Ok(FrozenParts { template, constrained, schur, gauge })
}

/// Constrained saddle system linearised about `prev` (velocity coefficients).
pub fn linearized_system<F, S>(d: &Discretization, prev: &[f64], f: F, sigma: S) -> Result<SaddleSystem>
where
    F: Fn(Point2) -> Result<[f64; 2]>,
    S: Fn(Point2) -> Result<[f64; 2]>,
{
    let mut sys = assembly::assemble_system(d, prev, f)?;
    let bc = assembly::boundary_values(d, sigma)?;
    assembly::apply_dirichlet(&mut sys, &bc)?;
    Ok(sys)
}

pub fn picard_solve<F, S>(d: &Discretization, f: F, sigma: S, controls: &PicardControls) -> Result<PicardState>
where
    F: Fn(Point2) -> Result<[f64; 2]>,
    S: Fn(Point2) -> Result<[f64; 2]>,
{
    let frozen = freeze(d, f, sigma)?;
    let mut st = PicardState {
        y: vec![0.0; d.velocity_len()],
        z: vec![0.0; d.pressure_len()],
        k: 0,
        converged: false,
        log: Vec::new(),
    };
    let mut rising = 0;
    for k in 1..=controls.max_iter {
        let step = |e: Error| Error::PicardStep { k, source: Box::new(e) };
        let mut sys = frozen.template.clone();
        sys.a = assembly::assemble_a(d, &st.y).map_err(step)?;
        assembly::apply_dirichlet(&mut sys, &frozen.constrained).map_err(step)?;
        let ilu = solver::ilu0(&sys.a).map_err(step)?;
        let mut chi0 = st.y.clone();
        for &(i, v) in &frozen.constrained {
            chi0[i] = v;
        }
        let uz = solver::uzawa_solve(
            &sys,
            &frozen.schur,
            &ilu,
            Some(&frozen.gauge),
            chi0,
            st.z.clone(),
            &controls.uzawa,
        )
        .map_err(step)?;

        let mut diff = 0.0;
        for (a, b) in uz.chi.iter().zip(&st.y) {
            diff += (a - b) * (a - b);
        }
        let norm = sparse::norm2(&uz.chi);
        let update = if norm > 0.0 { libm::sqrt(diff) / norm } else { libm::sqrt(diff) };
        st.log.push(PicardLogEntry {
            k,
            uzawa_iterations: uz.iterations,
            uzawa_residual: uz.residual(),
            uzawa_converged: uz.converged,
            relative_update: update,
            uzawa_history: uz.residual_history,
        });
        st.y = uz.chi;
        st.z = uz.xi;
        st.k = k;
        if update <= controls.tol {
            st.converged = true;
            return Ok(st);
        }
        if k > 1 && update >= st.log[k - 2].relative_update {
            rising += 1;
            if rising >= controls.stall_window {
                return Err(Error::PicardStalled { k, update });
            }
        } else {
            rising = 0;
        }
    }
    Ok(st)
}

#[derive(Debug, Clone, PartialEq)]
pub struct NodalSolution {
    pub velocity: Vec<[f64; 2]>,
    pub pressure: Vec<f64>,
}

/// Nodal values `rho^nu_star(M_i) c_i` and `rho^mu_star(N_j) e_j`.
pub fn recover_nodal_values(d: &Discretization, y: &[f64], z: &[f64]) -> NodalSolution {
    let w = d.params.weight();
    let n = d.vdofs.len();
    let velocity = d
        .vdofs
        .nodes
        .iter()
        .enumerate()
        .map(|(i, &p)| {
            let m = space::nodal_multiplier(p, &w, d.params.nu_star, d.vdofs.h);
            [m * y[i], m * y[i + n]]
        })
        .collect();
    let pressure = d
        .pdofs
        .nodes
        .iter()
        .zip(z)
        .map(|(&p, &e)| space::nodal_multiplier(p, &w, d.params.mu_star, d.vdofs.h) * e)
        .collect();
    NodalSolution { velocity, pressure }
}

/// Inverse of [`recover_nodal_values`].
pub fn coefficients_from_nodal(d: &Discretization, nodal: &NodalSolution) -> (Vec<f64>, Vec<f64>) {
    let w = d.params.weight();
    let n = d.vdofs.len();
    let mut y = vec![0.0; 2 * n];
    for (i, (&p, v)) in d.vdofs.nodes.iter().zip(&nodal.velocity).enumerate() {
        let m = space::nodal_multiplier(p, &w, d.params.nu_star, d.vdofs.h);
        y[i] = v[0] / m;
        y[i + n] = v[1] / m;
    }
    let z = d
        .pdofs
        .nodes
        .iter()
        .zip(&nodal.pressure)
        .map(|(&p, &v)| v / space::nodal_multiplier(p, &w, d.params.mu_star, d.vdofs.h))
        .collect();
    (y, z)
}

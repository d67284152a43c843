//! Weighted Sobolev error and pointwise node statistics.

use alloc::vec::Vec;

use super::exact::{self, BenchmarkCase};
use crate::assembly::Discretization;
use crate::geometry::Point2;
use crate::picard::NodalSolution;
use crate::weight;
use crate::Result;

/// `(int rho^(2 nu) (|w - w_h|^2 + |grad(w - w_h)|^2))^(1/2)` for an
/// arbitrary reference field given by value and component gradients.
pub fn weighted_h1_error_with<E>(d: &Discretization, y: &[f64], nu: f64, reference: E) -> Result<f64>
where
    E: Fn(Point2) -> Result<([f64; 2], [Point2; 2])>,
{
    let w = d.params.weight();
    let mut sum = 0.0;
    for e in 0..d.mesh.num_elements() {
        for n in d.element_nodes(e) {
            let (v, g) = d.velocity_at(e, n, y);
            let (ve, ge) = reference(n.x)?;
            let rho = weight::rho_pow(n.x, &w, 2.0 * nu)?;
            let mut local = 0.0;
            for c in 0..2 {
                let dv = ve[c] - v[c];
                let dg = ge[c] - g[c];
                local += dv * dv + dg.dot(dg);
            }
            sum += n.weight * rho * local;
        }
    }
    Ok(libm::sqrt(sum))
}

/// Weighted `W^1_2` error of the discrete velocity against the benchmark solution.
pub fn weighted_h1_error(d: &Discretization, y: &[f64], case: &BenchmarkCase, nu: f64) -> Result<f64> {
    weighted_h1_error_with(d, y, nu, |x| {
        let p = exact::exact_solution(case, x)?;
        Ok((p.w, p.grad))
    })
}

/// Largest componentwise nodal error at each interior velocity node.
pub fn interior_node_errors(d: &Discretization, nodal: &NodalSolution, case: &BenchmarkCase) -> Vec<f64> {
    d.vdofs
        .nodes
        .iter()
        .zip(&d.vdofs.boundary_mask)
        .zip(&nodal.velocity)
        .filter(|((_, &b), _)| !b)
        .map(|((&p, _), v)| {
            let w = exact::exact_velocity(case, p);
            (v[0] - w[0]).abs().max((v[1] - w[1]).abs())
        })
        .collect()
}

/// Fraction of interior velocity nodes whose error does not exceed each threshold.
pub fn node_error_fractions(errors: &[f64], thresholds: &[f64]) -> Vec<f64> {
    let n = errors.len().max(1) as f64;
    thresholds.iter().map(|&t| errors.iter().filter(|&&e| e <= t).count() as f64 / n).collect()
}

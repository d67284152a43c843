//! Integration of the weighted forms into the saddle-point system
//! `A y + B1 z = F`, `B2^T y = G`.
//!
//! Velocity unknowns are ordered `(c_1..c_n, d_1..d_n)`: all first components,
//! then all second components. Every basis function carries its weight
//! factor, `phi_i = rho^nu_star theta_i` and `psi_j = rho^mu_star chi_j`.

use alloc::vec;
use alloc::vec::Vec;

use crate::geometry::Point2;
use crate::mesh::FineMesh;
use crate::quadrature::{PhysicalNode, QuadraturePolicy};
use crate::space::{self, ElementGeometry, PressureDofMap, VelocityDofMap};
use crate::sparse::{CsrMatrix, PatternBuilder};
use crate::weight::{self, WeightSpec};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MethodParams {
    /// Exponent of the weight in the forms and in the error norm.
    pub nu: f64,
    /// Exponent of the velocity basis weight.
    pub nu_star: f64,
    /// Exponent of the pressure basis weight.
    pub mu_star: f64,
    pub delta: f64,
    /// 1 for the convective form, 0 for the rotation form.
    pub gamma: u8,
    pub alpha: f64,
    /// Viscosity, the reciprocal Reynolds number.
    pub mu: f64,
}

impl MethodParams {
    /// Unweighted method with the given form and coefficients.
    pub fn classical(gamma: u8, alpha: f64, mu: f64, delta: f64) -> Self {
        MethodParams { nu: 0.0, nu_star: 0.0, mu_star: 0.0, delta, gamma, alpha, mu }
    }

    pub fn validate(&self) -> Result<()> {
        if self.gamma > 1 {
            return Err(Error::param("gamma must be 0 or 1"));
        }
        if !(self.alpha > 0.0) || !(self.mu > 0.0) || !(self.delta > 0.0) {
            return Err(Error::param("alpha, mu and delta must be positive"));
        }
        if !(self.nu >= 0.0) {
            return Err(Error::param("nu must be nonnegative"));
        }
        if !self.nu_star.is_finite() || !self.mu_star.is_finite() || !self.nu.is_finite() {
            return Err(Error::param("exponents must be finite"));
        }
        Ok(())
    }

    pub fn is_classical(&self) -> bool {
        self.nu == 0.0 && self.nu_star == 0.0 && self.mu_star == 0.0
    }

    pub fn weight(&self) -> WeightSpec {
        WeightSpec { delta: self.delta, origin: Point2::ORIGIN }
    }
}

/// Everything the element loops need at one quadrature node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NodeData {
    pub x: Point2,
    pub weight: f64,
    /// Weighted velocity basis values and gradients.
    pub phi: [f64; 6],
    pub dphi: [Point2; 6],
    /// Weighted pressure basis values.
    pub psi: [f64; 3],
    /// `rho^(2 nu)` and its gradient.
    pub w2: f64,
    pub dw2: Point2,
    /// `rho^nu` and its gradient.
    pub w1: f64,
    pub dw1: Point2,
}

/// Mesh, degrees of freedom and per-element quadrature tables for one
/// parameter set.
#[derive(Debug, Clone)]
pub struct Discretization {
    pub mesh: FineMesh,
    pub vdofs: VelocityDofMap,
    pub pdofs: PressureDofMap,
    pub params: MethodParams,
    offsets: Vec<usize>,
    nodes: Vec<NodeData>,
}

impl Discretization {
    pub fn new(mesh: FineMesh, params: MethodParams, policy: &QuadraturePolicy) -> Result<Self> {
        params.validate()?;
        let vdofs = space::build_velocity_dofs(&mesh);
        let pdofs = space::build_pressure_dofs(&mesh);
        let w = params.weight();
        let delta = (!params.is_classical()).then_some(params.delta);
        let mut offsets = Vec::with_capacity(mesh.num_elements() + 1);
        offsets.push(0);
        let mut nodes = Vec::new();
        let mut buf = Vec::new();
        for e in 0..mesh.num_elements() {
            let g = ElementGeometry::new(mesh.element(e));
            policy.nodes(g.vertices, delta, &mut buf);
            for n in &buf {
                nodes.push(node_data(&g, n, &w, &params)?);
            }
            offsets.push(nodes.len());
        }
        Ok(Discretization { mesh, vdofs, pdofs, params, offsets, nodes })
    }

    pub fn element_nodes(&self, e: usize) -> &[NodeData] {
        &self.nodes[self.offsets[e]..self.offsets[e + 1]]
    }

    pub fn num_quadrature_nodes(&self) -> usize {
        self.nodes.len()
    }

    /// Length of the velocity coefficient vector (both components).
    pub fn velocity_len(&self) -> usize {
        2 * self.vdofs.len()
    }

    pub fn pressure_len(&self) -> usize {
        self.pdofs.len()
    }

    /// Global row of local velocity function `k` of element `e` in component `c`.
    #[inline]
    pub fn vrow(&self, e: usize, k: usize, c: usize) -> usize {
        self.vdofs.element_dofs[e][k] + c * self.vdofs.len()
    }

    /// Value and gradient of the discrete velocity field with coefficients `y`
    /// at a quadrature node of element `e`.
    pub fn velocity_at(&self, e: usize, n: &NodeData, y: &[f64]) -> ([f64; 2], [Point2; 2]) {
        let mut v = [0.0; 2];
        let mut d = [Point2::ORIGIN; 2];
        for k in 0..6 {
            for c in 0..2 {
                let coef = y[self.vrow(e, k, c)];
                v[c] += coef * n.phi[k];
                d[c] = d[c] + coef * n.dphi[k];
            }
        }
        (v, d)
    }

    /// Value of the discrete pressure with coefficients `z` at a node of element `e`.
    pub fn pressure_at(&self, e: usize, n: &NodeData, z: &[f64]) -> f64 {
        let dofs = self.pdofs.element_dofs[e];
        (0..3).map(|k| z[dofs[k]] * n.psi[k]).sum()
    }
}

fn node_data(g: &ElementGeometry, n: &PhysicalNode, w: &WeightSpec, p: &MethodParams) -> Result<NodeData> {
    let l = g.barycentric(n.x);
    let (th, dth) = space::p2_shape(g, l);
    let (ch, _) = space::p1_shape(g, l);
    let vs = weight::weight_value(n.x, w, p.nu_star)?;
    let ps = weight::rho_pow(n.x, w, p.mu_star)?;
    let w1 = weight::weight_value(n.x, w, p.nu)?;
    let w2 = weight::weight_value(n.x, w, 2.0 * p.nu)?;
    let mut phi = [0.0; 6];
    let mut dphi = [Point2::ORIGIN; 6];
    for k in 0..6 {
        phi[k] = vs.value * th[k];
        dphi[k] = vs.value * dth[k] + th[k] * vs.grad;
    }
    let psi = [ps * ch[0], ps * ch[1], ps * ch[2]];
    Ok(NodeData {
        x: n.x,
        weight: n.weight,
        phi,
        dphi,
        psi,
        w2: w2.value,
        dw2: w2.grad,
        w1: w1.value,
        dw1: w1.grad,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SaddleSystem {
    pub a: CsrMatrix,
    pub b1: CsrMatrix,
    pub b2: CsrMatrix,
    pub f: Vec<f64>,
    /// Right-hand side of the continuity equation created by eliminating
    /// boundary values; zero before `apply_dirichlet`.
    pub g: Vec<f64>,
    /// Constrained velocity unknowns and their coefficient values.
    pub constrained: Vec<(usize, f64)>,
}

fn velocity_pattern(d: &Discretization, couple_components: bool) -> CsrMatrix {
    let nv = d.vdofs.len();
    let mut pb = PatternBuilder::new(2 * nv, 2 * nv);
    let mut rows = [0usize; 6];
    let mut shifted = [0usize; 6];
    for dofs in &d.vdofs.element_dofs {
        rows.copy_from_slice(dofs);
        for k in 0..6 {
            shifted[k] = rows[k] + nv;
        }
        pb.add_block(&rows, &rows);
        pb.add_block(&shifted, &shifted);
        if couple_components {
            pb.add_block(&rows, &shifted);
            pb.add_block(&shifted, &rows);
        }
    }
    pb.build()
}

fn coupling_pattern(d: &Discretization) -> CsrMatrix {
    let nv = d.vdofs.len();
    let mut pb = PatternBuilder::new(2 * nv, d.pdofs.len());
    for (vd, pd) in d.vdofs.element_dofs.iter().zip(&d.pdofs.element_dofs) {
        for &i in vd {
            pb.add_block(&[i, i + nv], pd);
        }
    }
    pb.build()
}

/// Velocity block of the linearised problem; `prev` holds the coefficients
/// of the previous iterate used as transport field (convective form) or
/// for the vorticity (rotation form).
pub fn assemble_a(d: &Discretization, prev: &[f64]) -> Result<CsrMatrix> {
    if prev.len() != d.velocity_len() {
        return Err(Error::Shape { what: "previous velocity", expected: d.velocity_len(), found: prev.len() });
    }
    let p = &d.params;
    let rotation = p.gamma == 0;
    let mut a = velocity_pattern(d, rotation);
    for e in 0..d.mesh.num_elements() {
        // [x-x, x-y, y-x][test][trial]
        let mut local = [[[0.0f64; 6]; 6]; 3];
        for n in d.element_nodes(e) {
            let (g, dg) = d.velocity_at(e, n, prev);
            let curl = dg[1].x - dg[0].y;
            for i in 0..6 {
                // Weighted test function rho^(2 nu) phi_i and its gradient.
                let tv = n.w2 * n.phi[i];
                let tg = n.w2 * n.dphi[i] + n.phi[i] * n.dw2;
                for j in 0..6 {
                    let mut diag = p.alpha * n.phi[j] * tv + p.mu * n.dphi[j].dot(tg);
                    if !rotation {
                        diag += (g[0] * n.dphi[j].x + g[1] * n.dphi[j].y) * tv;
                    }
                    local[0][i][j] += n.weight * diag;
                    if rotation {
                        let off = curl * n.phi[j] * tv;
                        // (curl z x y) = (-curl y2, curl y1).
                        local[1][i][j] -= n.weight * off;
                        local[2][i][j] += n.weight * off;
                    }
                }
            }
        }
        let nv = d.vdofs.len();
        let dofs = d.vdofs.element_dofs[e];
        for i in 0..6 {
            for j in 0..6 {
                let (r, c) = (dofs[i], dofs[j]);
                let v = local[0][i][j];
                a.add_to(r, c, v)?;
                a.add_to(r + nv, c + nv, v)?;
                if rotation {
                    a.add_to(r, c + nv, local[1][i][j])?;
                    a.add_to(r + nv, c, local[2][i][j])?;
                }
            }
        }
    }
    Ok(a)
}

/// The coupling blocks `(B1, B2, B, C)` with
/// `b1(v, s) = -int s div(rho^(2nu) v)`, `b2(v, s) = -int rho^(2nu) s div v`,
/// `b(v, s) = -int rho^nu s div(rho^nu v)` and `c(v, s) = -int rho^nu s v . grad rho^nu`.
pub fn assemble_b1_b2(d: &Discretization) -> Result<(CsrMatrix, CsrMatrix, CsrMatrix, CsrMatrix)> {
    let pattern = coupling_pattern(d);
    let (mut b1, mut b2, mut b, mut c) = (pattern.clone(), pattern.clone(), pattern.clone(), pattern);
    for e in 0..d.mesh.num_elements() {
        // [block][component][velocity fn][pressure fn]
        let mut local = [[[[0.0f64; 3]; 6]; 2]; 4];
        for n in d.element_nodes(e) {
            for i in 0..6 {
                for comp in 0..2 {
                    let pick = |p: Point2| if comp == 0 { p.x } else { p.y };
                    let dphi = pick(n.dphi[i]);
                    let dw2 = pick(n.dw2);
                    let dw1 = pick(n.dw1);
                    let v1 = n.w2 * dphi + n.phi[i] * dw2;
                    let v2 = n.w2 * dphi;
                    let vb = n.w1 * (n.w1 * dphi + n.phi[i] * dw1);
                    let vc = n.w1 * n.phi[i] * dw1;
                    for j in 0..3 {
                        let s = n.weight * n.psi[j];
                        local[0][comp][i][j] -= s * v1;
                        local[1][comp][i][j] -= s * v2;
                        local[2][comp][i][j] -= s * vb;
                        local[3][comp][i][j] -= s * vc;
                    }
                }
            }
        }
        let pd = d.pdofs.element_dofs[e];
        for (m, block) in [&mut b1, &mut b2, &mut b, &mut c].into_iter().enumerate() {
            for comp in 0..2 {
                for i in 0..6 {
                    let row = d.vrow(e, i, comp);
                    for j in 0..3 {
                        block.add_to(row, pd[j], local[m][comp][i][j])?;
                    }
                }
            }
        }
    }
    Ok((b1, b2, b, c))
}

/// Load vector `l(v) = int f . rho^(2nu) v`.
pub fn assemble_f<F>(d: &Discretization, f: F) -> Result<Vec<f64>>
where
    F: Fn(Point2) -> Result<[f64; 2]>,
{
    let mut out = vec![0.0; d.velocity_len()];
    for e in 0..d.mesh.num_elements() {
        for n in d.element_nodes(e) {
            let fv = f(n.x)?;
            for i in 0..6 {
                let t = n.weight * n.w2 * n.phi[i];
                out[d.vrow(e, i, 0)] += t * fv[0];
                out[d.vrow(e, i, 1)] += t * fv[1];
            }
        }
    }
    Ok(out)
}

/// Full unconstrained system for one Picard step.
pub fn assemble_system<F>(d: &Discretization, prev: &[f64], f: F) -> Result<SaddleSystem>
where
    F: Fn(Point2) -> Result<[f64; 2]>,
{
    let a = assemble_a(d, prev)?;
    let (b1, b2, _, _) = assemble_b1_b2(d)?;
    let f = assemble_f(d, f)?;
    let g = vec![0.0; d.pressure_len()];
    Ok(SaddleSystem { a, b1, b2, f, g, constrained: Vec::new() })
}

/// Coefficient values `rho^(-nu_star)(M) sigma(M)` at all boundary velocity
/// nodes; the corner node uses the replacement radius `min(delta, h) / 2`.
pub fn boundary_values<S>(d: &Discretization, sigma: S) -> Result<Vec<(usize, f64)>>
where
    S: Fn(Point2) -> Result<[f64; 2]>,
{
    let w = d.params.weight();
    let nv = d.vdofs.len();
    let mut out = Vec::new();
    for (i, (&node, _)) in d.vdofs.nodes.iter().zip(&d.vdofs.boundary_mask).enumerate().filter(|(_, (_, &b))| b) {
        let s = sigma(node)?;
        let m = space::nodal_multiplier(node, &w, d.params.nu_star, d.vdofs.h);
        out.push((i, s[0] / m));
        out.push((i + nv, s[1] / m));
    }
    out.sort_by_key(|&(i, _)| i);
    Ok(out)
}

/// Symmetric elimination of the constrained velocity unknowns. Constrained
/// rows of `A` become identity rows, their columns move to `F` and, through
/// `B2`, to `G`.
pub fn apply_dirichlet(sys: &mut SaddleSystem, constrained: &[(usize, f64)]) -> Result<()> {
    let n = sys.a.nrows;
    let mut value = vec![None; n];
    for &(i, v) in constrained {
        if i >= n {
            return Err(Error::Shape { what: "constrained index", expected: n, found: i });
        }
        value[i] = Some(v);
    }
    for i in 0..n {
        let range = sys.a.row_ptr[i]..sys.a.row_ptr[i + 1];
        match value[i] {
            Some(v) => {
                for k in range {
                    sys.a.values[k] = if sys.a.col_idx[k] == i { 1.0 } else { 0.0 };
                }
                sys.f[i] = v;
            }
            None => {
                for k in range {
                    if let Some(v) = value[sys.a.col_idx[k]] {
                        sys.f[i] -= sys.a.values[k] * v;
                        sys.a.values[k] = 0.0;
                    }
                }
            }
        }
    }
    for i in 0..n {
        if let Some(v) = value[i] {
            for k in sys.b2.row_ptr[i]..sys.b2.row_ptr[i + 1] {
                sys.g[sys.b2.col_idx[k]] -= sys.b2.values[k] * v;
                sys.b2.values[k] = 0.0;
            }
            for k in sys.b1.row_ptr[i]..sys.b1.row_ptr[i + 1] {
                sys.b1.values[k] = 0.0;
            }
        }
    }
    sys.constrained = constrained.to_vec();
    Ok(())
}

/// `m_j = int rho^nu psi_j`: the weighted mean of a pressure is `m . z`.
pub fn weighted_mean_vector(d: &Discretization) -> Vec<f64> {
    let mut m = vec![0.0; d.pressure_len()];
    for e in 0..d.mesh.num_elements() {
        let pd = d.pdofs.element_dofs[e];
        for n in d.element_nodes(e) {
            for k in 0..3 {
                m[pd[k]] += n.weight * n.w1 * n.psi[k];
            }
        }
    }
    m
}

/// Coefficients `rho^(-mu_star)(N_j)` of the pressure that equals one at
/// every pressure node.
pub fn constant_pressure_vector(d: &Discretization) -> Vec<f64> {
    let w = d.params.weight();
    d.pdofs.nodes.iter().map(|&p| 1.0 / space::nodal_multiplier(p, &w, d.params.mu_star, d.vdofs.h)).collect()
}

/// Weighted pressure mass matrix `(1/mu) int rho^(2nu) psi_i psi_j`,
/// block diagonal with one 3x3 block per element.
pub fn assemble_pressure_mass(d: &Discretization) -> Result<CsrMatrix> {
    let mut pb = PatternBuilder::new(d.pressure_len(), d.pressure_len());
    for pd in &d.pdofs.element_dofs {
        pb.add_block(pd, pd);
    }
    let mut s = pb.build();
    for e in 0..d.mesh.num_elements() {
        let pd = d.pdofs.element_dofs[e];
        let mut local = [[0.0; 3]; 3];
        for n in d.element_nodes(e) {
            for i in 0..3 {
                for j in 0..3 {
                    local[i][j] += n.weight * n.w2 * n.psi[i] * n.psi[j];
                }
            }
        }
        for i in 0..3 {
            for j in 0..3 {
                s.add_to(pd[i], pd[j], local[i][j] / d.params.mu)?;
            }
        }
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{self, DomainSpec};
    use crate::sparse;

    fn classical() -> MethodParams {
        MethodParams::classical(1, 1.0, 1.0, 0.0127)
    }

    fn weighted(gamma: u8) -> MethodParams {
        MethodParams { nu: 2.0, nu_star: -0.275, mu_star: -0.275, delta: 0.3, gamma, alpha: 1.0, mu: 1.0 }
    }

    fn disc(m: usize, h: f64, p: MethodParams) -> Discretization {
        let mesh = mesh::build_mesh(&mesh::build_domain(m).unwrap(), h).unwrap();
        Discretization::new(mesh, p, &QuadraturePolicy::default()).unwrap()
    }

    #[test]
    fn parameter_validation() {
        assert!(MethodParams { gamma: 2, ..classical() }.validate().is_err());
        assert!(MethodParams { mu: 0.0, ..classical() }.validate().is_err());
        assert!(MethodParams { nu: -1.0, ..classical() }.validate().is_err());
        assert!(classical().is_classical());
        assert!(!weighted(1).is_classical());
    }

    #[test]
    fn classical_stokes_block_is_symmetric_positive() {
        let d = disc(1, 0.5, classical());
        let a = assemble_a(&d, &vec![0.0; d.velocity_len()]).unwrap();
        let t = a.transpose();
        for (x, y) in a.values.iter().zip(&t.values) {
            assert!((x - y).abs() < 1e-12 * a.max_abs());
        }
        assert!(a.diagonal().iter().all(|&v| v > 0.0));
    }

    #[test]
    fn forms_agree_for_zero_previous_iterate() {
        for p in [classical(), weighted(1)] {
            let d1 = disc(2, 0.5, p);
            let d0 = disc(2, 0.5, MethodParams { gamma: 0, ..p });
            let zero = vec![0.0; d1.velocity_len()];
            let a1 = assemble_a(&d1, &zero).unwrap().to_dense();
            let a0 = assemble_a(&d0, &zero).unwrap().to_dense();
            assert_eq!(a1, a0);
        }
    }

    #[test]
    fn coupling_identities() {
        let d = disc(1, 0.5, weighted(1));
        let (b1, b2, b, c) = assemble_b1_b2(&d).unwrap();
        let scale = b1.max_abs();
        for k in 0..b1.nnz() {
            assert!((b1.values[k] - b.values[k] - c.values[k]).abs() < 1e-12 * scale);
            assert!((b2.values[k] - b.values[k] + c.values[k]).abs() < 1e-12 * scale);
        }
        // C only lives where the weight varies.
        for e in 0..d.mesh.num_elements() {
            let near = crate::geometry::point_triangle_distance(Point2::ORIGIN, d.mesh.element(e)[0], d.mesh.element(e)[1], d.mesh.element(e)[2]);
            if near >= d.params.delta {
                for i in 0..6 {
                    for pj in d.pdofs.element_dofs[e] {
                        assert_eq!(c.get(d.vrow(e, i, 0), pj), 0.0);
                    }
                }
            }
        }
        let dc = disc(1, 0.5, classical());
        let (b1, b2, _, c) = assemble_b1_b2(&dc).unwrap();
        assert!(c.values.iter().all(|&v| v == 0.0));
        assert_eq!(b1, b2);
    }

    #[test]
    fn load_of_unit_force_is_integral_of_shape_functions() {
        let mesh = mesh::build_mesh(&DomainSpec::unit_square(), 1.0).unwrap();
        let d = Discretization::new(mesh, classical(), &QuadraturePolicy::default()).unwrap();
        let f = assemble_f(&d, |_| Ok([1.0, 0.0])).unwrap();
        let nv = d.vdofs.len();
        assert!(f[nv..].iter().all(|&v| v == 0.0));
        // P2 vertex functions integrate to zero, midpoint functions to area / 3.
        let mut expect = vec![0.0; nv];
        for e in 0..d.mesh.num_elements() {
            for k in 3..6 {
                expect[d.vdofs.element_dofs[e][k]] += d.mesh.element_area(e) / 3.0;
            }
        }
        for i in 0..nv {
            assert!((f[i] - expect[i]).abs() < 1e-14, "{i}: {} vs {}", f[i], expect[i]);
        }
        assert!((f.iter().sum::<f64>() - 1.0).abs() < 1e-13);
        assert!(assemble_f(&d, |_| Ok([0.0, 0.0])).unwrap().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn dirichlet_elimination_keeps_symmetry() {
        let d = disc(1, 0.5, classical());
        let mut sys = assemble_system(&d, &vec![0.0; d.velocity_len()], |_| Ok([1.0, -2.0])).unwrap();
        let f0 = sys.f.clone();
        let bc = boundary_values(&d, |x| Ok([x.x * x.y, x.x - x.y])).unwrap();
        apply_dirichlet(&mut sys, &bc).unwrap();
        let t = sys.a.transpose();
        for (x, y) in sys.a.values.iter().zip(&t.values) {
            assert!((x - y).abs() < 1e-12);
        }
        for &(i, v) in &bc {
            assert_eq!(sys.a.get(i, i), 1.0);
            assert_eq!(sys.f[i], v);
        }
        // Homogeneous data leaves interior loads untouched.
        let mut sys0 = assemble_system(&d, &vec![0.0; d.velocity_len()], |_| Ok([1.0, -2.0])).unwrap();
        let bc0 = boundary_values(&d, |_| Ok([0.0, 0.0])).unwrap();
        apply_dirichlet(&mut sys0, &bc0).unwrap();
        let constrained: alloc::collections::BTreeSet<_> = bc0.iter().map(|c| c.0).collect();
        for i in 0..f0.len() {
            if !constrained.contains(&i) {
                assert_eq!(sys0.f[i], f0[i]);
            }
        }
        assert!(sys0.g.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn constants_are_in_the_kernel_of_b1_for_classical_pressure() {
        let d = disc(3, 0.5, classical());
        let mut sys = assemble_system(&d, &vec![0.0; d.velocity_len()], |_| Ok([0.0, 0.0])).unwrap();
        apply_dirichlet(&mut sys, &boundary_values(&d, |_| Ok([0.0, 0.0])).unwrap()).unwrap();
        let k = constant_pressure_vector(&d);
        let mut out = vec![0.0; d.velocity_len()];
        sys.b1.spmv(&k, &mut out);
        assert!(sparse::norm2(&out) < 1e-12);
        let m = weighted_mean_vector(&d);
        assert!((m.iter().sum::<f64>() - d.mesh.elements.iter().enumerate().map(|(e, _)| d.mesh.element_area(e)).sum::<f64>()).abs() < 1e-12);
    }

    #[test]
    fn pressure_mass_of_single_element() {
        let mesh = FineMesh {
            vertices: vec![Point2::new(0.0, 0.0), Point2::new(2.0, 0.0), Point2::new(0.0, 1.0)],
            elements: vec![[0, 1, 2]],
            parent: vec![0],
            boundary_edges: vec![(0, 0), (0, 1), (0, 2)],
            boundary_vertices: vec![true; 3],
            h: 1.0,
            base_vertex_count: 3,
        };
        let p = MethodParams { mu: 0.5, ..classical() };
        let d = Discretization::new(mesh, p, &QuadraturePolicy::default()).unwrap();
        let s = assemble_pressure_mass(&d).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let expect = 2.0 * (1.0 / 12.0) * if i == j { 2.0 } else { 1.0 };
                assert!((s.get(i, j) - expect).abs() < 1e-14);
            }
        }
    }
}

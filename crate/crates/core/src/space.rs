//! Velocity (continuous quadratic) and pressure (discontinuous linear) spaces
//! with weighted bases `rho^e * theta`.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::geometry::{self, Point2};
use crate::mesh::FineMesh;
use crate::weight::{self, WeightSpec};
use crate::{Error, Result};

/// Barycentric tolerance for "point inside element".
pub const INSIDE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct VelocityDofMap {
    /// Element vertices followed by edge midpoints.
    pub nodes: Vec<Point2>,
    /// Per element: 3 vertices, then midpoints of local edges (0,1), (1,2), (2,0).
    pub element_dofs: Vec<[usize; 6]>,
    pub boundary_mask: Vec<bool>,
    /// Mesh step, used for the corner-node convention.
    pub h: f64,
}

impl VelocityDofMap {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Index of the node sitting at the origin, if any.
    pub fn origin_node(&self) -> Option<usize> {
        self.nodes.iter().position(|p| *p == Point2::ORIGIN)
    }
}

pub fn build_velocity_dofs(mesh: &FineMesh) -> VelocityDofMap {
    let nv = mesh.vertices.len();
    let mut nodes = mesh.vertices.clone();
    let mut boundary_mask = mesh.boundary_vertices.clone();
    boundary_mask.resize(nv, false);

    let mut exposed = BTreeMap::new();
    for &(e, k) in &mesh.boundary_edges {
        let el = mesh.elements[e];
        let (a, b) = (el[k as usize], el[(k as usize + 1) % 3]);
        exposed.insert((a.min(b), a.max(b)), ());
    }

    let mut edge_index: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut element_dofs = Vec::with_capacity(mesh.elements.len());
    for el in &mesh.elements {
        let mut dofs = [el[0], el[1], el[2], 0, 0, 0];
        for k in 0..3 {
            let (a, b) = (el[k], el[(k + 1) % 3]);
            let key = (a.min(b), a.max(b));
            dofs[3 + k] = *edge_index.entry(key).or_insert_with(|| {
                nodes.push(mesh.vertices[a].midpoint(mesh.vertices[b]));
                boundary_mask.push(exposed.contains_key(&key));
                nodes.len() - 1
            });
        }
        element_dofs.push(dofs);
    }
    VelocityDofMap { nodes, element_dofs, boundary_mask, h: mesh.h }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PressureDofMap {
    /// Three nodes per element, never shared.
    pub nodes: Vec<Point2>,
    pub element_dofs: Vec<[usize; 3]>,
}

impl PressureDofMap {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

pub fn build_pressure_dofs(mesh: &FineMesh) -> PressureDofMap {
    let mut nodes = Vec::with_capacity(3 * mesh.elements.len());
    let mut element_dofs = Vec::with_capacity(mesh.elements.len());
    for e in 0..mesh.elements.len() {
        let base = nodes.len();
        nodes.extend(mesh.element(e));
        element_dofs.push([base, base + 1, base + 2]);
    }
    PressureDofMap { nodes, element_dofs }
}

/// Affine map of one triangle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElementGeometry {
    pub vertices: [Point2; 3],
    pub area: f64,
    /// Constant gradients of the barycentric coordinates.
    pub grad_lambda: [Point2; 3],
}

impl ElementGeometry {
    pub fn new(vertices: [Point2; 3]) -> Self {
        let [a, b, c] = vertices;
        let area = geometry::signed_area(a, b, c);
        let two_a = 2.0 * area;
        let rot = |p: Point2| Point2::new(-p.y, p.x);
        let grad_lambda = [
            (1.0 / two_a) * rot(c - b),
            (1.0 / two_a) * rot(a - c),
            (1.0 / two_a) * rot(b - a),
        ];
        ElementGeometry { vertices, area, grad_lambda }
    }

    pub fn barycentric(&self, x: Point2) -> [f64; 3] {
        let [a, b, c] = self.vertices;
        let l1 = geometry::signed_area(a, x, c) / self.area;
        let l2 = geometry::signed_area(a, b, x) / self.area;
        [1.0 - l1 - l2, l1, l2]
    }

    pub fn point(&self, l: [f64; 3]) -> Point2 {
        let [a, b, c] = self.vertices;
        Point2::new(l[0] * a.x + l[1] * b.x + l[2] * c.x, l[0] * a.y + l[1] * b.y + l[2] * c.y)
    }
}

/// Unweighted P2 values and gradients at barycentric point `l`.
pub fn p2_shape(g: &ElementGeometry, l: [f64; 3]) -> ([f64; 6], [Point2; 6]) {
    let gl = g.grad_lambda;
    let mut val = [0.0; 6];
    let mut grad = [Point2::ORIGIN; 6];
    for i in 0..3 {
        val[i] = l[i] * (2.0 * l[i] - 1.0);
        grad[i] = (4.0 * l[i] - 1.0) * gl[i];
        let j = (i + 1) % 3;
        val[3 + i] = 4.0 * l[i] * l[j];
        grad[3 + i] = (4.0 * l[i]) * gl[j] + (4.0 * l[j]) * gl[i];
    }
    (val, grad)
}

/// Unweighted P1 values and gradients at barycentric point `l`.
pub fn p1_shape(g: &ElementGeometry, l: [f64; 3]) -> ([f64; 3], [Point2; 3]) {
    (l, g.grad_lambda)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpaceKind {
    Velocity,
    Pressure,
}

/// Weighted basis functions of one element evaluated at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisEval {
    pub values: Vec<f64>,
    pub gradients: Vec<Point2>,
}

/// Evaluates `rho^exponent * theta` (velocity) or `rho^exponent * chi`
/// (pressure) for every local basis function of `element` at `point`.
pub fn eval_basis(
    mesh: &FineMesh,
    element: usize,
    point: Point2,
    kind: SpaceKind,
    w: &WeightSpec,
    exponent: f64,
) -> Result<BasisEval> {
    let g = ElementGeometry::new(mesh.element(element));
    let l = g.barycentric(point);
    if l.iter().any(|&v| v < -INSIDE_TOL) {
        return Err(Error::OutsideElement { element, x: point.x, y: point.y });
    }
    let (vals, grads): (Vec<f64>, Vec<Point2>) = match kind {
        SpaceKind::Velocity => {
            let (v, d) = p2_shape(&g, l);
            (v.to_vec(), d.to_vec())
        }
        SpaceKind::Pressure => {
            let (v, d) = p1_shape(&g, l);
            (v.to_vec(), d.to_vec())
        }
    };
    if exponent == 0.0 {
        return Ok(BasisEval { values: vals, gradients: grads });
    }
    let rw = weight::weight_value(point, w, exponent)?;
    let values = vals.iter().map(|v| rw.value * v).collect();
    let gradients =
        vals.iter().zip(&grads).map(|(&v, &d)| rw.value * d + v * rw.grad).collect();
    Ok(BasisEval { values, gradients })
}

/// Multiplier between a weighted coefficient and the nodal value at `node`:
/// `rho^exponent(node)`, with the corner vertex replaced by
/// `min(delta, h) / 2` so the reverse formulas stay finite there.
pub fn nodal_multiplier(node: Point2, w: &WeightSpec, exponent: f64, h: f64) -> f64 {
    if exponent == 0.0 {
        return 1.0;
    }
    let r = weight::rho(node, w);
    let r = if r == 0.0 { 0.5 * w.delta.min(h) } else { r };
    libm::pow(r, exponent)
}

/// Number of distinct edges of the mesh.
pub fn edge_count(mesh: &FineMesh) -> usize {
    let mut seen = BTreeMap::new();
    for el in &mesh.elements {
        for k in 0..3 {
            let (a, b) = (el[k], el[(k + 1) % 3]);
            seen.insert((a.min(b), a.max(b)), ());
        }
    }
    seen.len()
}

/// Zero-initialized coefficient vector for both velocity components.
pub fn velocity_vector(dofs: &VelocityDofMap) -> Vec<f64> {
    vec![0.0; 2 * dofs.len()]
}

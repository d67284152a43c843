//! Triangle quadrature: a symmetric degree-6 rule for polynomial integrands
//! and collapsed Gauss rules refined geometrically toward the corner vertex and
//! the circle `|x| = delta` where the weighted integrands are not smooth.

use alloc::vec::Vec;

use crate::geometry::{self, Point2};

#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    /// Barycentric coordinates of the nodes.
    pub points: Vec<[f64; 3]>,
    /// Positive weights summing to one; multiply by the triangle area.
    pub weights: Vec<f64>,
    /// Total polynomial degree integrated exactly.
    pub degree: usize,
}

impl QuadratureRule {
    /// 12-point symmetric rule of Dunavant, exact to degree 6.
    pub fn dunavant6() -> Self {
        let mut rule = QuadratureRule { points: Vec::new(), weights: Vec::new(), degree: 6 };
        rule.push_orbit3(0.116_786_275_726_379, 0.501_426_509_658_179, 0.249_286_745_170_910);
        rule.push_orbit3(0.050_844_906_370_207, 0.873_821_971_016_996, 0.063_089_014_491_502);
        let (a, b, c) = (0.053_145_049_844_817, 0.310_352_451_033_784, 0.636_502_499_121_399);
        for p in [[a, b, c], [a, c, b], [b, a, c], [b, c, a], [c, a, b], [c, b, a]] {
            rule.points.push(p);
            rule.weights.push(0.082_851_075_618_374);
        }
        rule
    }

    /// Conical product of `n`-point Gauss-Legendre rules (Duffy collapse),
    /// exact to degree `2n - 2` with no node on the triangle boundary.
    pub fn collapsed_gauss(n: usize) -> Self {
        let (x, w) = gauss_legendre_unit(n);
        let mut points = Vec::with_capacity(n * n);
        let mut weights = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let s = x[i];
                let t = (1.0 - s) * x[j];
                points.push([1.0 - s - t, s, t]);
                weights.push(2.0 * w[i] * w[j] * (1.0 - s));
            }
        }
        QuadratureRule { points, weights, degree: 2 * n - 2 }
    }

    fn push_orbit3(&mut self, weight: f64, a: f64, b: f64) {
        for p in [[a, b, b], [b, a, b], [b, b, a]] {
            self.points.push(p);
            self.weights.push(weight);
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Gauss-Legendre nodes and weights on `[0, 1]`.
pub fn gauss_legendre_unit(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for i in 0..n {
        // Newton iteration on P_n from the Chebyshev-like initial guess.
        let mut z = libm::cos(core::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5));
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 0 { 1.0 } else if n == 1 { z } else { p1 };
            let pm = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (z * pn - pm) / (z * z - 1.0);
            let dz = pn / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        nodes.push(0.5 * (1.0 - z));
        weights.push(1.0 / ((1.0 - z * z) * dp * dp));
    }
    (nodes, weights)
}

/// Which rule each element gets and how far composite refinement goes.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraturePolicy {
    pub regular: QuadratureRule,
    pub singular: QuadratureRule,
    /// Subdivision depth toward the corner vertex.
    pub corner_depth: usize,
    /// Subdivision depth along the circle `|x| = delta` (weighted runs only).
    pub interface_depth: usize,
}

impl Default for QuadraturePolicy {
    fn default() -> Self {
        QuadraturePolicy {
            regular: QuadratureRule::dunavant6(),
            singular: QuadratureRule::collapsed_gauss(6),
            corner_depth: 8,
            interface_depth: 5,
        }
    }
}

/// A quadrature node in physical coordinates with its absolute weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalNode {
    pub x: Point2,
    pub weight: f64,
}

impl QuadraturePolicy {
    /// Physical quadrature nodes for triangle `tri`.
    ///
    /// Triangles touching the corner vertex or closer to it than their
    /// diameter, or crossed by the circle of radius `delta` when `delta` is
    /// given, are subdivided into four similar children recursively and
    /// integrated with the singular rule; all others use the regular rule.
    pub fn nodes(&self, tri: [Point2; 3], delta: Option<f64>, out: &mut Vec<PhysicalNode>) {
        out.clear();
        let needs = |t: &[Point2; 3], depth: usize| -> bool {
            let near = geometry::point_triangle_distance(Point2::ORIGIN, t[0], t[1], t[2]);
            if near == 0.0 || near < diameter(t) {
                return depth < self.corner_depth;
            }
            match delta {
                Some(d) => {
                    let far = t.iter().map(|p| p.norm()).fold(0.0, f64::max);
                    near < d && far > d && depth < self.interface_depth
                }
                None => false,
            }
        };
        let special = |t: &[Point2; 3]| {
            let near = geometry::point_triangle_distance(Point2::ORIGIN, t[0], t[1], t[2]);
            near == 0.0 || near < diameter(t) || delta.is_some_and(|d| near < d)
        };
        if !special(&tri) {
            push_rule(&self.regular, tri, out);
            return;
        }
        let mut stack: Vec<([Point2; 3], usize)> = alloc::vec![(tri, 0)];
        while let Some((t, depth)) = stack.pop() {
            if needs(&t, depth) {
                let [a, b, c] = t;
                let (ab, bc, ca) = (a.midpoint(b), b.midpoint(c), c.midpoint(a));
                stack.push(([a, ab, ca], depth + 1));
                stack.push(([ab, b, bc], depth + 1));
                stack.push(([ca, bc, c], depth + 1));
                stack.push(([bc, ca, ab], depth + 1));
            } else {
                push_rule(&self.singular, t, out);
            }
        }
    }
}

fn diameter([a, b, c]: &[Point2; 3]) -> f64 {
    (*a - *b).norm().max((*b - *c).norm()).max((*c - *a).norm())
}

fn push_rule(rule: &QuadratureRule, [a, b, c]: [Point2; 3], out: &mut Vec<PhysicalNode>) {
    let area = geometry::signed_area(a, b, c).abs();
    for (l, &w) in rule.points.iter().zip(&rule.weights) {
        let x = Point2::new(l[0] * a.x + l[1] * b.x + l[2] * c.x, l[0] * a.y + l[1] * b.y + l[2] * c.y);
        out.push(PhysicalNode { x, weight: w * area });
    }
}

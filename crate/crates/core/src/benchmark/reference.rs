//! Textbook unweighted quadratic/linear Galerkin matrices integrated exactly
//! through barycentric monomial integrals, with no quadrature and no weights.

use alloc::vec;
use alloc::vec::Vec;

use crate::assembly::Discretization;
use crate::geometry::Point2;
use crate::space::ElementGeometry;

/// Dense `alpha M + mu K` (both components) and the divergence block.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceSystem {
    pub a: Vec<Vec<f64>>,
    pub b: Vec<Vec<f64>>,
}

/// Coefficients `Q` of the local functions as homogeneous quadratics
/// `sum_ab Q[a][b] l_a l_b`; vertices first, then edges (0,1), (1,2), (2,0).
fn quadratic_forms() -> [[[f64; 3]; 3]; 6] {
    let mut q = [[[0.0; 3]; 3]; 6];
    for i in 0..3 {
        q[i][i][i] = 1.0;
        for b in 0..3 {
            if b != i {
                q[i][i][b] = -0.5;
                q[i][b][i] = -0.5;
            }
        }
        let j = (i + 1) % 3;
        q[3 + i][i][j] = 2.0;
        q[3 + i][j][i] = 2.0;
    }
    q
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// Integral of a product of barycentric coordinates over a triangle of `area`.
fn monomial(area: f64, idx: &[usize]) -> f64 {
    let mut count = [0usize; 3];
    for &i in idx {
        count[i] += 1;
    }
    2.0 * area * count.iter().map(|&c| factorial(c)).product::<f64>() / factorial(idx.len() + 2)
}

pub fn reference_system(d: &Discretization) -> ReferenceSystem {
    let (alpha, mu) = (d.params.alpha, d.params.mu);
    let nv = d.vdofs.len();
    let mut a = vec![vec![0.0; 2 * nv]; 2 * nv];
    let mut b = vec![vec![0.0; d.pressure_len()]; 2 * nv];
    let q = quadratic_forms();
    for e in 0..d.mesh.num_elements() {
        let g = ElementGeometry::new(d.mesh.element(e));
        let area = g.area.abs();
        // Gradient of local function k is sum_a l_a grads[k][a].
        let mut grads = [[Point2::ORIGIN; 3]; 6];
        for k in 0..6 {
            for (ai, slot) in grads[k].iter_mut().enumerate() {
                for bi in 0..3 {
                    *slot = *slot + (2.0 * q[k][ai][bi]) * g.grad_lambda[bi];
                }
            }
        }
        let dofs = d.vdofs.element_dofs[e];
        for k in 0..6 {
            for l in 0..6 {
                let mut mass = 0.0;
                for i1 in 0..3 {
                    for i2 in 0..3 {
                        for i3 in 0..3 {
                            for i4 in 0..3 {
                                let c = q[k][i1][i2] * q[l][i3][i4];
                                if c != 0.0 {
                                    mass += c * monomial(area, &[i1, i2, i3, i4]);
                                }
                            }
                        }
                    }
                }
                let mut stiff = 0.0;
                for i1 in 0..3 {
                    for i2 in 0..3 {
                        stiff += grads[k][i1].dot(grads[l][i2]) * monomial(area, &[i1, i2]);
                    }
                }
                let v = alpha * mass + mu * stiff;
                a[dofs[k]][dofs[l]] += v;
                a[dofs[k] + nv][dofs[l] + nv] += v;
            }
            let pd = d.pdofs.element_dofs[e];
            for (j, &pj) in pd.iter().enumerate() {
                let mut dx = 0.0;
                let mut dy = 0.0;
                for i1 in 0..3 {
                    let m = monomial(area, &[j, i1]);
                    dx += grads[k][i1].x * m;
                    dy += grads[k][i1].y * m;
                }
                b[dofs[k]][pj] -= dx;
                b[dofs[k] + nv][pj] -= dy;
            }
        }
    }
    ReferenceSystem { a, b }
}

//! Weighted element integrals against an independent polar quadrature.
//!
//! Every integrand below is `r^beta` times a polynomial in `r` along rays from
//! the corner, so Gauss-Jacobi in `r` and Gauss-Legendre in the angle are
//! accurate to rounding.

use nalgebra::{DMatrix, SymmetricEigen};

use wfem_core::assembly::{self, Discretization, MethodParams};
use wfem_core::geometry::Point2;
use wfem_core::mesh::{self, BaseMesh};
use wfem_core::quadrature::QuadraturePolicy;

/// Nodes and weights on `[0, 1]` for the weight `u^b` (Golub-Welsch).
fn gauss_jacobi01(n: usize, b: f64) -> Vec<(f64, f64)> {
    let mut j = DMatrix::zeros(n, n);
    for k in 0..n {
        let kf = k as f64;
        let s = 2.0 * kf + b;
        j[(k, k)] = if k == 0 { b / (b + 2.0) } else { (b * b) / (s * (s + 2.0)) };
        if k + 1 < n {
            let m = kf + 1.0;
            let s = 2.0 * m + b;
            let off = (4.0 * m * m * (m + b) * (m + b) / (s * s * (s + 1.0) * (s - 1.0))).sqrt();
            j[(k, k + 1)] = off;
            j[(k + 1, k)] = off;
        }
    }
    let eig = SymmetricEigen::new(j);
    // Total mass of (1 + x)^b on [-1, 1], then map to [0, 1].
    let mu0 = 2f64.powf(b + 1.0) / (b + 1.0);
    (0..n)
        .map(|k| {
            let x = eig.eigenvalues[k];
            let v = eig.eigenvectors[(0, k)];
            (0.5 * (x + 1.0), mu0 * v * v / 2f64.powf(b + 1.0))
        })
        .collect()
}

fn gauss_legendre01(n: usize) -> Vec<(f64, f64)> {
    gauss_jacobi01(n, 0.0)
}

/// P2 shape functions of a triangle: vertices, then edges (0,1), (1,2), (2,0).
fn p2(t: [Point2; 3], x: Point2) -> ([f64; 6], [Point2; 6]) {
    let area2 = (t[1] - t[0]).cross(t[2] - t[0]);
    let mut l = [0.0; 3];
    let mut g = [Point2::ORIGIN; 3];
    for i in 0..3 {
        let (a, b) = (t[(i + 1) % 3], t[(i + 2) % 3]);
        l[i] = (b - a).cross(x - a) / area2;
        g[i] = (1.0 / area2) * Point2::new(a.y - b.y, b.x - a.x);
    }
    let mut v = [0.0; 6];
    let mut d = [Point2::ORIGIN; 6];
    for i in 0..3 {
        v[i] = l[i] * (2.0 * l[i] - 1.0);
        d[i] = (4.0 * l[i] - 1.0) * g[i];
        let j = (i + 1) % 3;
        v[3 + i] = 4.0 * l[i] * l[j];
        d[3 + i] = (4.0 * l[j]) * g[i] + (4.0 * l[i]) * g[j];
    }
    (v, d)
}

/// `int_T g` for a triangle with the corner at vertex 0 and `g = r^beta * smooth`.
fn polar_integral(t: [Point2; 3], beta: f64, g: &dyn Fn(Point2) -> f64) -> f64 {
    let (a, b) = (t[1], t[2]);
    let ta = a.y.atan2(a.x);
    let mut tb = b.y.atan2(b.x);
    if tb < ta {
        tb += 2.0 * std::f64::consts::PI;
    }
    let rad = gauss_jacobi01(40, beta + 1.0);
    let mut sum = 0.0;
    for (s, ws) in gauss_legendre01(40) {
        let th = ta + (tb - ta) * s;
        let e = Point2::new(th.cos(), th.sin());
        // Distance along e to the edge (a, b).
        let big_r = a.cross(b - a) / e.cross(b - a);
        for &(u, wu) in &rad {
            let r = big_r * u;
            // g / r^beta times the polar Jacobian r, with r^(beta + 1) in the weight.
            sum += (tb - ta) * ws * wu * big_r.powf(beta + 2.0) * g(r * e) / r.powf(beta);
        }
    }
    sum
}

/// Counterclockwise vertex order starting at the corner vertex `c`.
fn ccw_from(t: [Point2; 3], c: usize) -> [Point2; 3] {
    let rot = [t[c], t[(c + 1) % 3], t[(c + 2) % 3]];
    if (rot[1] - rot[0]).cross(rot[2] - rot[0]) > 0.0 {
        rot
    } else {
        [rot[0], rot[2], rot[1]]
    }
}

/// Collapsed tensor Gauss for a smooth integrand.
fn collapsed_integral(t: [Point2; 3], g: &dyn Fn(Point2) -> f64) -> f64 {
    let q = gauss_legendre01(30);
    let area2 = (t[1] - t[0]).cross(t[2] - t[0]).abs();
    let mut sum = 0.0;
    for &(u, wu) in &q {
        for &(v, wv) in &q {
            let (l1, l2) = (u * (1.0 - v), u * v);
            let x = t[0] + l1 * (t[1] - t[0]) + l2 * (t[2] - t[0]);
            sum += wu * wv * u * area2 * g(x);
        }
    }
    sum
}

fn single_triangle(t: [Point2; 3], params: MethodParams) -> Discretization {
    let base = BaseMesh { vertices: t.to_vec(), triangles: vec![[0, 1, 2]], h: 0.2, subdivisions: 1 };
    let fine = mesh::split_barycentric(&base).unwrap();
    Discretization::new(fine, params, &QuadraturePolicy::default()).unwrap()
}

/// Elementwise oracle accumulation of `integrand(e, k, l, x)` into a dense matrix.
fn oracle_matrix(d: &Discretization, beta: f64, integrand: &dyn Fn([Point2; 3], usize, usize, Point2) -> f64) -> DMatrix<f64> {
    let n = d.vdofs.len();
    let mut m = DMatrix::zeros(n, n);
    for e in 0..d.mesh.num_elements() {
        let t = d.mesh.element(e);
        let dofs = d.vdofs.element_dofs[e];
        let at_corner = t.iter().position(|p| p.norm() == 0.0);
        for k in 0..6 {
            for l in 0..6 {
                let g = |x: Point2| integrand(t, k, l, x);
                let v = match at_corner {
                    Some(c) => polar_integral(ccw_from(t, c), beta, &g),
                    None => collapsed_integral(t, &g),
                };
                m[(dofs[k], dofs[l])] += v;
            }
        }
    }
    m
}

const TOL: f64 = 1e-10;

fn weighted() -> MethodParams {
    MethodParams { nu: 2.0, nu_star: -0.275, mu_star: -0.275, delta: 0.3, gamma: 1, alpha: 1.3, mu: 0.7 }
}

fn rel_diff(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    (a - b).abs().max() / b.abs().max()
}

#[test]
fn jacobi_rule_integrates_powers() {
    for &b in &[0.0, 0.5, 1.45, 3.725] {
        let q = gauss_jacobi01(20, b);
        for p in 0..10 {
            let v: f64 = q.iter().map(|(u, w)| w * u.powi(p)).sum();
            assert!((v - 1.0 / (b + p as f64 + 1.0)).abs() < 1e-14, "b={b} p={p}");
        }
    }
}

#[test]
fn velocity_block_matches_polar_oracle() {
    let t = [Point2::new(0.0, 0.0), Point2::new(0.2, 0.0), Point2::new(0.05, 0.17)];
    let p = weighted();
    let d = single_triangle(t, p);
    let (s, tt) = (p.nu_star, 2.0 * p.nu + p.nu_star);
    let integrand = |tri: [Point2; 3], k: usize, l: usize, x: Point2| {
        let (v, g) = p2(tri, x);
        let r2 = x.dot(x);
        let r = r2.sqrt();
        // Trial r^s theta_l, test r^t theta_k.
        let gl = r.powf(s) * g[l] + (s * r.powf(s - 2.0) * v[l]) * x;
        let gk = r.powf(tt) * g[k] + (tt * r.powf(tt - 2.0) * v[k]) * x;
        p.alpha * r.powf(s + tt) * v[l] * v[k] + p.mu * gl.dot(gk)
    };
    let oracle = oracle_matrix(&d, s + tt - 2.0, &integrand);
    let a = assembly::assemble_a(&d, &vec![0.0; d.velocity_len()]).unwrap();
    let n = d.vdofs.len();
    let lib = DMatrix::from_fn(n, n, |i, j| a.get(i, j));
    let upper = DMatrix::from_fn(n, n, |i, j| a.get(i + n, j + n));
    assert!(rel_diff(&lib, &oracle) < TOL, "{:e}", rel_diff(&lib, &oracle));
    assert!(rel_diff(&upper, &oracle) < TOL);
}

#[test]
fn load_vector_matches_polar_oracle() {
    let t = [Point2::new(0.0, 0.0), Point2::new(0.15, 0.1), Point2::new(-0.1, 0.2)];
    let p = weighted();
    let d = single_triangle(t, p);
    let f = |x: Point2| [1.0 + x.x - 2.0 * x.y * x.y, x.x * x.y];
    let load = assembly::assemble_f(&d, |x| Ok(f(x))).unwrap();
    let beta = 2.0 * p.nu + p.nu_star;
    let n = d.vdofs.len();
    for c in 0..2 {
        // Use the diagonal slot of the matrix oracle to hold a vector.
        let integrand = |tri: [Point2; 3], k: usize, l: usize, x: Point2| {
            if k != l {
                return 0.0;
            }
            let (v, _) = p2(tri, x);
            f(x)[c] * x.norm().powf(beta) * v[k]
        };
        let m = oracle_matrix(&d, beta, &integrand);
        for i in 0..n {
            let (got, want) = (load[i + c * n], m[(i, i)]);
            assert!((got - want).abs() < TOL * m.diagonal().abs().max(), "c={c} i={i}: {got:e} vs {want:e}");
        }
    }
}

#[test]
fn pressure_block_matches_polar_oracle() {
    let t = [Point2::new(0.0, 0.0), Point2::new(0.2, 0.0), Point2::new(0.05, 0.17)];
    let p = weighted();
    let d = single_triangle(t, p);
    let (b1, _, _, _) = assembly::assemble_b1_b2(&d).unwrap();
    let tw = 2.0 * p.nu + p.nu_star;
    let beta = p.mu_star + tw - 2.0;
    for e in 0..d.mesh.num_elements() {
        let tri = d.mesh.element(e);
        let pd = d.pdofs.element_dofs[e];
        let vd = d.vdofs.element_dofs[e];
        let corner = tri.iter().position(|q| q.norm() == 0.0);
        for (j, &pj) in pd.iter().enumerate() {
            for k in 0..6 {
                // Pressure dofs are per element, so only this element contributes.
                let g = |x: Point2| {
                    let (v, gr) = p2(tri, x);
                    let area2 = (tri[1] - tri[0]).cross(tri[2] - tri[0]);
                    let (a, b) = (tri[(j + 1) % 3], tri[(j + 2) % 3]);
                    let chi = (b - a).cross(x - a) / area2;
                    let r = x.norm();
                    let grad = r.powf(tw) * gr[k] + (tw * r.powf(tw - 2.0) * v[k]) * x;
                    -r.powf(p.mu_star) * chi * grad.x
                };
                let want = match corner {
                    Some(c) => polar_integral(ccw_from(tri, c), beta, &g),
                    None => collapsed_integral(tri, &g),
                };
                // A pressure function lives on one element, so the entry is this integral alone.
                let got = b1.get(vd[k], pj);
                assert!((got - want).abs() < TOL * want.abs().max(1e-3), "e={e} j={j} k={k}: {got:e} vs {want:e}");
            }
        }
    }
}

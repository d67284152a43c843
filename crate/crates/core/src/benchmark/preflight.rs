//! Property checks run before any benchmark: exponent roots, properties of
//! the exact solutions by finite differences, algebraic identities of the
//! assembled blocks and the minimal-residual property of GMRES.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::exact::{self, BenchmarkCase};
use super::reference;
use crate::assembly::{self, Discretization, MethodParams};
use crate::geometry::Point2;
use crate::mesh;
use crate::quadrature::QuadraturePolicy;
use crate::solver::{self, GmresOptions};
use crate::Result;

#[derive(Debug, Clone, PartialEq)]
pub struct PreflightCheck {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
}

impl PreflightCheck {
    pub fn passed(&self) -> bool {
        self.value.is_finite() && self.value < self.tolerance
    }
}

/// Deterministic points in the annular sector `r in [r0, r1]`,
/// `phi in (0, omega)` of benchmark `case`.
pub fn sample_points(case: &BenchmarkCase, count: usize, r0: f64, r1: f64) -> Vec<Point2> {
    let g1 = 0.618_033_988_749_894_9;
    let g2 = 0.754_877_666_246_692_7;
    (1..=count)
        .map(|k| {
            let u = frac(k as f64 * g1);
            let v = frac(k as f64 * g2);
            let r = r0 + (r1 - r0) * u;
            let phi = case.omega * (0.02 + 0.96 * v);
            from_polar(r, phi)
        })
        .collect()
}

fn frac(x: f64) -> f64 {
    x - libm::floor(x)
}

/// Inverse of the local polar frame: the first wall is the negative `x2` axis.
pub fn from_polar(r: f64, phi: f64) -> Point2 {
    let (a, b) = (r * libm::cos(phi), r * libm::sin(phi));
    Point2::new(b, -a)
}

/// Fourth-order central differences of a scalar function.
pub struct FiniteDifference {
    pub step: f64,
}

impl FiniteDifference {
    pub fn grad<F: Fn(Point2) -> f64>(&self, f: F, x: Point2) -> Point2 {
        let h = self.step;
        let d = |e: Point2| (-f(x + (2.0 * h) * e) + 8.0 * f(x + h * e) - 8.0 * f(x - h * e) + f(x - (2.0 * h) * e)) / (12.0 * h);
        Point2::new(d(Point2::new(1.0, 0.0)), d(Point2::new(0.0, 1.0)))
    }

    pub fn laplacian<F: Fn(Point2) -> f64>(&self, f: F, x: Point2) -> f64 {
        let h = self.step;
        let d2 = |e: Point2| {
            (-f(x + (2.0 * h) * e) + 16.0 * f(x + h * e) - 30.0 * f(x) + 16.0 * f(x - h * e) - f(x - (2.0 * h) * e))
                / (12.0 * h * h)
        };
        d2(Point2::new(1.0, 0.0)) + d2(Point2::new(0.0, 1.0))
    }
}

fn w_comp(case: &BenchmarkCase, c: usize) -> impl Fn(Point2) -> f64 + '_ {
    move |x| exact::exact_velocity(case, x)[c]
}

fn q_of(case: &BenchmarkCase) -> impl Fn(Point2) -> f64 + '_ {
    move |x| exact::exact_solution(case, x).map(|p| p.q).unwrap_or(f64::NAN)
}

/// Largest `|div w|` by central differences with step `1e-6`.
pub fn divergence_defect(case: &BenchmarkCase, points: &[Point2]) -> f64 {
    let h = 1e-6;
    points
        .iter()
        .map(|&x| {
            let dx = (exact::exact_velocity(case, x + Point2::new(h, 0.0))[0]
                - exact::exact_velocity(case, x - Point2::new(h, 0.0))[0])
                / (2.0 * h);
            let dy = (exact::exact_velocity(case, x + Point2::new(0.0, h))[1]
                - exact::exact_velocity(case, x - Point2::new(0.0, h))[1])
                / (2.0 * h);
            (dx + dy).abs()
        })
        .fold(0.0, f64::max)
}

/// Largest `|w|` on the two corner walls.
pub fn wall_defect(case: &BenchmarkCase) -> f64 {
    let mut worst: f64 = 0.0;
    for k in 1..=20 {
        let r = k as f64 / 20.0;
        for phi in [0.0, case.omega] {
            let w = exact::exact_velocity(case, from_polar(r, phi));
            worst = worst.max(libm::hypot(w[0], w[1]));
        }
    }
    worst
}

/// Largest `|-Laplace w + grad q|` with all derivatives from finite differences.
pub fn stokes_defect(case: &BenchmarkCase, points: &[Point2]) -> f64 {
    let fd = FiniteDifference { step: 1e-3 };
    points
        .iter()
        .map(|&x| {
            let gq = fd.grad(q_of(case), x);
            let r0 = -fd.laplacian(w_comp(case, 0), x) + gq.x;
            let r1 = -fd.laplacian(w_comp(case, 1), x) + gq.y;
            libm::hypot(r0, r1)
        })
        .fold(0.0, f64::max)
}

/// Largest momentum residual of the manufactured right-hand side, with every
/// derivative of `w` and `q` taken by finite differences.
pub fn momentum_defect(case: &BenchmarkCase, points: &[Point2]) -> Result<f64> {
    let fd = FiniteDifference { step: 1e-3 };
    let mut worst: f64 = 0.0;
    for &x in points {
        let w = exact::exact_velocity(case, x);
        let g0 = fd.grad(w_comp(case, 0), x);
        let g1 = fd.grad(w_comp(case, 1), x);
        let gq = fd.grad(q_of(case), x);
        let lap = [fd.laplacian(w_comp(case, 0), x), fd.laplacian(w_comp(case, 1), x)];
        let nl = if case.gamma == 1 {
            [w[0] * g0.x + w[1] * g0.y, w[0] * g1.x + w[1] * g1.y]
        } else {
            let curl = g1.x - g0.y;
            [-curl * w[1], curl * w[0]]
        };
        let f = exact::manufactured_f(case, x)?;
        let r0 = case.alpha * w[0] - case.mu * lap[0] + case.mu * gq.x + nl[0] - f[0];
        let r1 = case.alpha * w[1] - case.mu * lap[1] + case.mu * gq.y + nl[1] - f[1];
        worst = worst.max(libm::hypot(r0, r1));
    }
    Ok(worst)
}

/// Largest entrywise deviation from `B1 = B + C` and `B2 = B - C`.
pub fn coupling_identity_defect(d: &Discretization) -> Result<f64> {
    let (b1, b2, b, c) = assembly::assemble_b1_b2(d)?;
    let mut worst: f64 = 0.0;
    for k in 0..b1.nnz() {
        worst = worst.max((b1.values[k] - b.values[k] - c.values[k]).abs());
        worst = worst.max((b2.values[k] - b.values[k] + c.values[k]).abs());
    }
    Ok(worst)
}

/// Largest entrywise difference between the quadrature assembly with all
/// exponents zero and the exact textbook matrices.
pub fn reduction_defect(d: &Discretization) -> Result<f64> {
    let a = assembly::assemble_a(d, &vec![0.0; d.velocity_len()])?.to_dense();
    let (b1, b2, _, _) = assembly::assemble_b1_b2(d)?;
    let r = reference::reference_system(d);
    let mut worst: f64 = 0.0;
    for (x, y) in a.iter().flatten().zip(r.a.iter().flatten()) {
        worst = worst.max((x - y).abs());
    }
    for m in [b1.to_dense(), b2.to_dense()] {
        for (x, y) in m.iter().flatten().zip(r.b.iter().flatten()) {
            worst = worst.max((x - y).abs());
        }
    }
    Ok(worst)
}

/// Runs GMRES on an assembled velocity block; any increase of the
/// least-squares residual inside a cycle is an error, so a finished run
/// reports the largest step-to-step growth seen in its history (zero when
/// monotone).
pub fn gmres_monotonicity_defect(d: &Discretization) -> Result<f64> {
    let prev: Vec<f64> = (0..d.velocity_len()).map(|i| 0.1 * libm::sin(i as f64)).collect();
    let a = assembly::assemble_a(d, &prev)?;
    let ilu = solver::ilu0(&a)?;
    let rhs: Vec<f64> = (0..a.nrows).map(|i| libm::cos(0.37 * i as f64)).collect();
    let mut x = vec![0.0; a.nrows];
    let opts = GmresOptions { dim: 5, tol: 1e-12, max_restarts: 200 };
    let rep = solver::gmres_left_pc(&a, &ilu, &rhs, &mut x, &opts)?;
    let mut worst: f64 = 0.0;
    for (i, pair) in rep.history.windows(2).enumerate() {
        // Cycle boundaries may legitimately re-measure the true residual.
        if (i + 1) % opts.dim != 0 {
            worst = worst.max(pair[1] - pair[0]);
        }
    }
    Ok(worst)
}

pub fn preflight() -> Result<Vec<PreflightCheck>> {
    let mut out = Vec::new();
    let mut push = |name: String, value: f64, tolerance: f64| out.push(PreflightCheck { name, value, tolerance });
    for m in 1..=3 {
        for gamma in [1u8, 0] {
            let case = BenchmarkCase::new(m, gamma, 1.0, 1.0)?;
            if gamma == 1 {
                let res = (case.lambda * libm::sin(case.omega) + libm::sin(case.lambda * case.omega)).abs();
                push(format!("lambda root residual m={m}"), res, 1e-12);
                let pts = sample_points(&case, 20, 0.2, 0.9);
                push(format!("divergence m={m}"), divergence_defect(&case, &pts), 1e-6);
                push(format!("wall no-slip m={m}"), wall_defect(&case), 1e-10);
                push(format!("Stokes core m={m}"), stokes_defect(&case, &pts), 1e-6);
            }
            let pts = sample_points(&case, 50, 0.2, 0.9);
            push(format!("momentum residual m={m} gamma={gamma}"), momentum_defect(&case, &pts)?, 1e-6);
        }
    }
    let policy = QuadraturePolicy::default();
    let coarse = mesh::build_mesh(&mesh::build_domain(1)?, 0.5)?;
    let weighted = MethodParams { nu: 2.0, nu_star: -0.275, mu_star: -0.275, delta: 0.3, gamma: 1, alpha: 1.0, mu: 1.0 };
    let dw = Discretization::new(coarse.clone(), weighted, &policy)?;
    push("B1 = B + C, B2 = B - C".into(), coupling_identity_defect(&dw)?, 1e-12);
    let dc = Discretization::new(coarse, MethodParams::classical(1, 1.0, 1.0, 0.0127), &policy)?;
    push("classical reduction".into(), reduction_defect(&dc)?, 1e-12);
    push("GMRES monotone within restart".into(), gmres_monotonicity_defect(&dw)?, 1e-14);
    Ok(out)
}

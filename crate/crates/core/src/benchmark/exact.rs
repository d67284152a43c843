//! Singular corner solutions `w = r^lambda (theta1, theta2)`,
//! `q = r^(lambda-1) theta3` of the homogeneous Stokes system.
//!
//! The polar angle is measured counterclockwise from the corner wall on the
//! negative `x2` axis. Internally everything is evaluated in the frame
//! `x' = (-x2, x1)`, where that wall is the positive `x1'` axis, and
//! vectors are rotated back.

use core::f64::consts::PI;

use crate::geometry::Point2;
use crate::mesh;
use crate::{Error, Result};

/// Smallest positive root of `lambda sin(omega) + sin(lambda omega) = 0`.
pub fn solve_lambda(omega: f64) -> Result<f64> {
    if !(omega >= PI && omega < 2.0 * PI) {
        return Err(Error::RootBracketing { omega });
    }
    let f = |l: f64| l * libm::sin(omega) + libm::sin(l * omega);
    // f > 0 just above zero since sin(omega) + omega > 0.
    let step = 1e-3;
    let mut lo = step;
    if !(f(lo) > 0.0) {
        return Err(Error::RootBracketing { omega });
    }
    let mut hi = lo;
    loop {
        hi += step;
        if hi > 2.0 {
            return Err(Error::RootBracketing { omega });
        }
        if f(hi) <= 0.0 {
            break;
        }
        lo = hi;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-16 {
            break;
        }
    }
    // Newton polish from the bracket midpoint, kept inside the bracket.
    let mut l = 0.5 * (lo + hi);
    for _ in 0..3 {
        let d = libm::sin(omega) + omega * libm::cos(l * omega);
        let next = l - f(l) / d;
        if next >= lo - 1e-15 && next <= hi + 1e-15 {
            l = next;
        }
    }
    Ok(l)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BenchmarkCase {
    pub m: usize,
    pub omega: f64,
    pub lambda: f64,
    pub gamma: u8,
    pub alpha: f64,
    pub mu: f64,
    /// Coefficient of the sine part of `Lambda`, chosen so that `Lambda`
    /// vanishes on the far wall.
    pub coef: f64,
}

impl BenchmarkCase {
    pub fn new(m: usize, gamma: u8, alpha: f64, mu: f64) -> Result<Self> {
        let omega = mesh::benchmark_angle(m)?;
        Self::with_angle(m, omega, gamma, alpha, mu)
    }

    pub fn with_angle(m: usize, omega: f64, gamma: u8, alpha: f64, mu: f64) -> Result<Self> {
        if gamma > 1 {
            return Err(Error::param("gamma must be 0 or 1"));
        }
        let lambda = solve_lambda(omega)?;
        let (lm, lp) = (lambda - 1.0, lambda + 1.0);
        let a0 = libm::cos(lm * omega) - libm::cos(lp * omega);
        let a1 = libm::sin(lp * omega) / lp - libm::sin(lm * omega) / lm;
        Ok(BenchmarkCase { m, omega, lambda, gamma, alpha, mu, coef: -a0 / a1 })
    }

    /// `Lambda` and its first four derivatives at angle `phi`.
    pub fn big_lambda(&self, phi: f64) -> [f64; 5] {
        let (lm, lp, c) = (self.lambda - 1.0, self.lambda + 1.0, self.coef);
        let (cm, sm) = (libm::cos(lm * phi), libm::sin(lm * phi));
        let (cp, sp) = (libm::cos(lp * phi), libm::sin(lp * phi));
        let (lm2, lp2) = (lm * lm, lp * lp);
        let (lm3, lp3) = (lm2 * lm, lp2 * lp);
        [
            cm - cp + c * (sp / lp - sm / lm),
            -lm * sm + lp * sp + c * (cp - cm),
            -lm2 * cm + lp2 * cp + c * (-lp * sp + lm * sm),
            lm3 * sm - lp3 * sp + c * (-lp2 * cp + lm2 * cm),
            lm3 * lm * cm - lp3 * lp * cp + c * (lp3 * sp - lm3 * sm),
        ]
    }

    /// Angular profiles `theta1, theta2` with two derivatives each and
    /// `theta3` with one.
    pub fn thetas(&self, phi: f64) -> ([f64; 3], [f64; 3], [f64; 2]) {
        let [l0, l1, l2, l3, l4] = self.big_lambda(phi);
        let lam = self.lambda;
        let lp = lam + 1.0;
        let (s, c) = (libm::sin(phi), libm::cos(phi));
        let t1 = [
            lp * l0 * s + l1 * c,
            lam * l1 * s + (lp * l0 + l2) * c,
            ((lam - 1.0) * l2 - lp * l0) * s + ((2.0 * lam + 1.0) * l1 + l3) * c,
        ];
        let t2 = [
            l1 * s - lp * l0 * c,
            (l2 + lp * l0) * s - lam * l1 * c,
            (l3 + (2.0 * lam + 1.0) * l1) * s + ((1.0 - lam) * l2 + lp * l0) * c,
        ];
        let t3 = [(lp * lp * l1 + l3) / (lam - 1.0), (lp * lp * l2 + l4) / (lam - 1.0)];
        (t1, t2, t3)
    }

    /// Polar angle of `x` in `[0, 2 pi)` measured from the first corner wall.
    pub fn polar(&self, x: Point2) -> (f64, f64) {
        let local = Point2::new(-x.y, x.x);
        let r = local.norm();
        let mut phi = libm::atan2(local.y, local.x);
        // Points a rounding error below the first wall keep phi near zero.
        let cut = 0.5 * (self.omega + 2.0 * PI) - 2.0 * PI;
        if phi < cut {
            phi += 2.0 * PI;
        }
        (r, phi)
    }
}

/// Value, gradient and Laplacian of `r^a T(phi)` in the local frame.
fn polar_field(r: f64, phi: f64, a: f64, t: [f64; 3]) -> (f64, Point2, f64) {
    let ra = libm::pow(r, a);
    let (s, c) = (libm::sin(phi), libm::cos(phi));
    let g = ra / r;
    (
        ra * t[0],
        Point2::new(g * (a * t[0] * c - t[1] * s), g * (a * t[0] * s + t[1] * c)),
        (ra / (r * r)) * (a * a * t[0] + t[2]),
    )
}

/// Exact data at one point, in the original coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExactPoint {
    pub w: [f64; 2],
    /// `grad[i]` is the gradient of `w_i`.
    pub grad: [Point2; 2],
    pub laplacian: [f64; 2],
    pub q: f64,
    pub grad_q: Point2,
}

/// Rotates local-frame vectors back: `(v1', v2') -> (v2', -v1')`.
fn unrotate(v: Point2) -> Point2 {
    Point2::new(v.y, -v.x)
}

pub fn exact_solution(case: &BenchmarkCase, x: Point2) -> Result<ExactPoint> {
    let (r, phi) = case.polar(x);
    if r == 0.0 {
        return Err(Error::SingularEvaluation);
    }
    let (t1, t2, t3) = case.thetas(phi);
    let lam = case.lambda;
    let (w1, g1, d1) = polar_field(r, phi, lam, t1);
    let (w2, g2, d2) = polar_field(r, phi, lam, t2);
    let (q, gq, _) = polar_field(r, phi, lam - 1.0, [t3[0], t3[1], 0.0]);
    // Local components: w' = (w1, w2). Original: w = (w2, -w1); the gradient
    // of a scalar rotates the same way.
    Ok(ExactPoint {
        w: [w2, -w1],
        grad: [unrotate(g2), -unrotate(g1)],
        laplacian: [d2, -d1],
        q,
        grad_q: unrotate(gq),
    })
}

/// Velocity only; zero at the corner.
pub fn exact_velocity(case: &BenchmarkCase, x: Point2) -> [f64; 2] {
    match exact_solution(case, x) {
        Ok(p) => p.w,
        Err(_) => [0.0, 0.0],
    }
}

/// Right-hand side for which `w` solves the momentum equation of the form
/// selected by `case.gamma` with kinematic pressure `p = mu q`.
pub fn manufactured_f(case: &BenchmarkCase, x: Point2) -> Result<[f64; 2]> {
    let e = exact_solution(case, x)?;
    let (a, mu) = (case.alpha, case.mu);
    let mut f = [0.0; 2];
    for i in 0..2 {
        f[i] = a * e.w[i] - mu * e.laplacian[i];
    }
    f[0] += mu * e.grad_q.x;
    f[1] += mu * e.grad_q.y;
    let nl = if case.gamma == 1 { convection(&e) } else { rotation(&e) };
    Ok([f[0] + nl[0], f[1] + nl[1]])
}

/// `(w . grad) w`.
pub fn convection(e: &ExactPoint) -> [f64; 2] {
    [e.w[0] * e.grad[0].x + e.w[1] * e.grad[0].y, e.w[0] * e.grad[1].x + e.w[1] * e.grad[1].y]
}

/// `curl w x w = (-curl w * w2, curl w * w1)`.
pub fn rotation(e: &ExactPoint) -> [f64; 2] {
    let curl = e.grad[1].x - e.grad[0].y;
    [-curl * e.w[1], curl * e.w[0]]
}

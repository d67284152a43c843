//! The corner weight `rho(x) = min(|x|, delta)` and its powers.

use crate::geometry::Point2;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightSpec {
    /// Radius of the disk around the corner where the weight follows `|x|`.
    pub delta: f64,
    pub origin: Point2,
}

impl WeightSpec {
    pub fn new(delta: f64) -> Result<Self> {
        if !(delta > 0.0) || !delta.is_finite() {
            return Err(Error::param("delta must be positive and finite"));
        }
        Ok(WeightSpec { delta, origin: Point2::ORIGIN })
    }

    /// Whether `x` lies in the open disk of radius `delta` where the weight varies.
    pub fn in_singular_zone(&self, x: Point2) -> bool {
        (x - self.origin).norm() < self.delta
    }
}

pub fn rho(x: Point2, w: &WeightSpec) -> f64 {
    (x - w.origin).norm().min(w.delta)
}

/// `rho(x)^a`. A zero exponent gives 1 everywhere, including the corner.
pub fn rho_pow(x: Point2, w: &WeightSpec, a: f64) -> Result<f64> {
    if a == 0.0 {
        return Ok(1.0);
    }
    let r = rho(x, w);
    if r == 0.0 && a < 0.0 {
        return Err(Error::SingularEvaluation);
    }
    Ok(libm::pow(r, a))
}

/// Gradient of `rho(x)^a`: `a |x|^(a-2) x` inside the disk, zero outside.
pub fn grad_rho_pow(x: Point2, w: &WeightSpec, a: f64) -> Result<Point2> {
    let d = x - w.origin;
    let r = d.norm();
    if r == 0.0 {
        return Err(Error::SingularEvaluation);
    }
    if r >= w.delta || a == 0.0 {
        return Ok(Point2::ORIGIN);
    }
    Ok((a * libm::pow(r, a - 2.0)) * d)
}

/// Value and gradient of `rho^a` at a point other than the corner.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightValue {
    pub value: f64,
    pub grad: Point2,
}

pub fn weight_value(x: Point2, w: &WeightSpec, a: f64) -> Result<WeightValue> {
    Ok(WeightValue { value: rho_pow(x, w, a)?, grad: grad_rho_pow(x, w, a)? })
}

//! Plane points and small triangle helpers.

use core::ops::{Add, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const ORIGIN: Point2 = Point2 { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Point2 { x, y }
    }

    pub fn dot(self, other: Point2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the planar cross product.
    pub fn cross(self, other: Point2) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn norm(self) -> f64 {
        libm::hypot(self.x, self.y)
    }

    pub fn dist(self, other: Point2) -> f64 {
        (self - other).norm()
    }

    pub fn midpoint(self, other: Point2) -> Point2 {
        Point2::new(0.5 * (self.x + other.x), 0.5 * (self.y + other.y))
    }
}

impl Add for Point2 {
    type Output = Point2;
    fn add(self, o: Point2) -> Point2 {
        Point2::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point2 {
    type Output = Point2;
    fn sub(self, o: Point2) -> Point2 {
        Point2::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<Point2> for f64 {
    type Output = Point2;
    fn mul(self, p: Point2) -> Point2 {
        Point2::new(self * p.x, self * p.y)
    }
}

impl Neg for Point2 {
    type Output = Point2;
    fn neg(self) -> Point2 {
        Point2::new(-self.x, -self.y)
    }
}

/// Signed area, positive for counterclockwise vertex order.
pub fn signed_area(a: Point2, b: Point2, c: Point2) -> f64 {
    0.5 * (b - a).cross(c - a)
}

pub fn centroid(a: Point2, b: Point2, c: Point2) -> Point2 {
    Point2::new((a.x + b.x + c.x) / 3.0, (a.y + b.y + c.y) / 3.0)
}

/// Distance from `p` to the closed segment `[a, b]`.
pub fn point_segment_distance(p: Point2, a: Point2, b: Point2) -> f64 {
    let ab = b - a;
    let len2 = ab.dot(ab);
    if len2 == 0.0 {
        return p.dist(a);
    }
    let t = ((p - a).dot(ab) / len2).clamp(0.0, 1.0);
    p.dist(a + t * ab)
}

/// Distance from `p` to the closed triangle `abc` (zero inside).
pub fn point_triangle_distance(p: Point2, a: Point2, b: Point2, c: Point2) -> f64 {
    let area = signed_area(a, b, c);
    let s = area.signum();
    let inside = s * signed_area(p, b, c) >= 0.0
        && s * signed_area(a, p, c) >= 0.0
        && s * signed_area(a, b, p) >= 0.0;
    if inside {
        return 0.0;
    }
    point_segment_distance(p, a, b)
        .min(point_segment_distance(p, b, c))
        .min(point_segment_distance(p, c, a))
}

/// Interior angles of a triangle in radians.
pub fn angles(a: Point2, b: Point2, c: Point2) -> [f64; 3] {
    let ang = |p: Point2, q: Point2, r: Point2| {
        let u = q - p;
        let v = r - p;
        libm::atan2(u.cross(v).abs(), u.dot(v))
    };
    [ang(a, b, c), ang(b, c, a), ang(c, a, b)]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_distance_inside_and_outside() {
        let (a, b, c) = (Point2::new(0.0, 0.0), Point2::new(1.0, 0.0), Point2::new(0.0, 1.0));
        assert_eq!(point_triangle_distance(Point2::new(0.2, 0.2), a, b, c), 0.0);
        let d = point_triangle_distance(Point2::new(1.0, 1.0), a, b, c);
        assert!((d - libm::sqrt(0.5)).abs() < 1e-15);
        let sum: f64 = angles(a, b, c).iter().sum();
        assert!((sum - core::f64::consts::PI).abs() < 1e-14);
    }
}

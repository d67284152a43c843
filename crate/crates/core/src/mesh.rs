//! Benchmark domains, structured triangulation and barycentric splitting.
//!
//! Every domain carries a coarse conforming "patch" triangulation whose
//! triangles have legs of length [`DomainSpec::patch_size`]. [`triangulate`]
//! refines each patch uniformly into `n * n` similar triangles, so the cut
//! lines of the domain are always mesh lines and the corner vertex is always a
//! mesh vertex. Shared vertices are identified by exact integer lattice keys.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::geometry::{self, Point2};
use crate::{Error, Result};

/// Tolerance for "lies on the polygon boundary".
pub const BOUNDARY_TOL: f64 = 1e-12;

/// Finest supported patch subdivision.
pub const MAX_SUBDIVISIONS: usize = 2048;

#[derive(Debug, Clone, PartialEq)]
pub struct DomainSpec {
    /// Counterclockwise polygon.
    pub polygon_vertices: Vec<Point2>,
    /// Vertex of the reentrant corner; the origin for every benchmark domain.
    pub corner_vertex: Point2,
    /// Interior angle of the polygon at `corner_vertex`.
    pub reentrant_angle: f64,
    pub patch_vertices: Vec<Point2>,
    pub patches: Vec<[usize; 3]>,
    /// Nominal leg length of the patches.
    pub patch_size: f64,
}

impl DomainSpec {
    /// Builds a domain from a polygon and a conforming patch triangulation,
    /// validating both. The reentrant angle is measured from the polygon.
    pub fn from_patches(
        polygon_vertices: Vec<Point2>,
        patch_vertices: Vec<Point2>,
        patches: Vec<[usize; 3]>,
        patch_size: f64,
    ) -> Result<Self> {
        let n = polygon_vertices.len();
        if n < 3 {
            return Err(Error::param("polygon needs at least three vertices"));
        }
        let corner = polygon_vertices
            .iter()
            .position(|p| *p == Point2::ORIGIN)
            .ok_or_else(|| Error::param("the origin must be a polygon vertex"))?;
        let prev = polygon_vertices[(corner + n - 1) % n];
        let next = polygon_vertices[(corner + 1) % n];
        let spec = DomainSpec {
            reentrant_angle: interior_angle(prev, Point2::ORIGIN, next),
            polygon_vertices,
            corner_vertex: Point2::ORIGIN,
            patch_vertices,
            patches,
            patch_size,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// `[0,1]^2` split along its diagonal; a minimal non-benchmark input.
    pub fn unit_square() -> Self {
        let pts = vec![
            Point2::new(0.0, 0.0),
            Point2::new(1.0, 0.0),
            Point2::new(1.0, 1.0),
            Point2::new(0.0, 1.0),
        ];
        DomainSpec::from_patches(pts.clone(), pts, vec![[0, 1, 2], [0, 2, 3]], 1.0)
            .expect("unit square is valid")
    }

    pub fn area(&self) -> f64 {
        polygon_area(&self.polygon_vertices)
    }

    pub fn perimeter(&self) -> f64 {
        self.edges().map(|(a, b)| a.dist(b)).sum()
    }

    pub fn shortest_edge(&self) -> f64 {
        self.edges().map(|(a, b)| a.dist(b)).fold(f64::INFINITY, f64::min)
    }

    /// Polygon edges in counterclockwise order.
    pub fn edges(&self) -> impl Iterator<Item = (Point2, Point2)> + '_ {
        let n = self.polygon_vertices.len();
        (0..n).map(move |i| (self.polygon_vertices[i], self.polygon_vertices[(i + 1) % n]))
    }

    /// Distance from `p` to the polygon boundary.
    pub fn boundary_distance(&self, p: Point2) -> f64 {
        self.edges()
            .map(|(a, b)| geometry::point_segment_distance(p, a, b))
            .fold(f64::INFINITY, f64::min)
    }

    /// Index of a polygon edge containing `p`, if any.
    fn edges_containing(&self, p: Point2) -> impl Iterator<Item = usize> + '_ {
        self.edges()
            .enumerate()
            .filter(move |(_, (a, b))| geometry::point_segment_distance(p, *a, *b) < BOUNDARY_TOL)
            .map(|(i, _)| i)
    }

    pub fn contains(&self, p: Point2) -> bool {
        // Closed polygon: boundary points count as inside.
        if self.boundary_distance(p) < BOUNDARY_TOL {
            return true;
        }
        let mut inside = false;
        for (a, b) in self.edges() {
            if (a.y > p.y) != (b.y > p.y) {
                let x = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
                if p.x < x {
                    inside = !inside;
                }
            }
        }
        inside
    }

    fn validate(&self) -> Result<()> {
        let poly = &self.polygon_vertices;
        let n = poly.len();
        if polygon_area(poly) <= 0.0 {
            return Err(Error::param("polygon must be counterclockwise"));
        }
        for i in 0..n {
            for j in i + 1..n {
                let adjacent = j == i + 1 || (i == 0 && j == n - 1);
                if !adjacent
                    && segments_intersect(poly[i], poly[(i + 1) % n], poly[j], poly[(j + 1) % n])
                {
                    return Err(Error::param("polygon is not simple"));
                }
            }
        }
        if !(self.patch_size > 0.0) {
            return Err(Error::param("patch size must be positive"));
        }
        let mut patch_area = 0.0;
        for p in &self.patches {
            if p.iter().any(|&v| v >= self.patch_vertices.len()) {
                return Err(Error::param("patch references a missing vertex"));
            }
            let [a, b, c] = p.map(|v| self.patch_vertices[v]);
            let area = geometry::signed_area(a, b, c);
            if area <= 0.0 {
                return Err(Error::param("patches must be counterclockwise"));
            }
            if ![a, b, c].iter().all(|&q| self.contains(q)) {
                return Err(Error::param("patch vertex outside the polygon"));
            }
            patch_area += area;
        }
        let area = polygon_area(poly);
        if (patch_area - area).abs() > 1e-12 * area {
            return Err(Error::param("patches do not cover the polygon"));
        }
        Ok(())
    }
}

/// Corner angle of benchmark domain `m`: `(1 + 2^-m) * pi`.
pub fn benchmark_angle(m: usize) -> Result<f64> {
    match m {
        1..=3 => Ok((1.0 + 1.0 / (1u32 << m) as f64) * PI),
        _ => Err(Error::param(format!("benchmark index must be 1, 2 or 3, got {m}"))),
    }
}

/// Benchmark domain `m`: the square `(-1,1)^2` minus a closed wedge at the
/// origin. One corner wall is the negative `x2` axis; the domain sweeps
/// counterclockwise from it through the opening angle `omega_m`, so `m = 1`
/// removes the third quadrant, `m = 2` removes `{x1 < 0, x2 < -x1}` and
/// `m = 3` removes everything below the ray at angle `5 pi / 8`.
pub fn build_domain(m: usize) -> Result<DomainSpec> {
    let omega = benchmark_angle(m)?;
    let o = Point2::ORIGIN;
    let s = Point2::new(0.0, -1.0);
    let se = Point2::new(1.0, -1.0);
    let e = Point2::new(1.0, 0.0);
    let ne = Point2::new(1.0, 1.0);
    let n = Point2::new(0.0, 1.0);
    let nw = Point2::new(-1.0, 1.0);
    let w = Point2::new(-1.0, 0.0);

    let mut patch_vertices = vec![o, s, se, e, ne, n];
    let mut patches = vec![[0, 1, 2], [0, 2, 3], [0, 3, 4], [0, 4, 5]];
    let polygon = match m {
        1 => {
            patch_vertices.extend([nw, w]);
            patches.extend([[0, 5, 6], [0, 6, 7]]);
            vec![o, s, se, ne, nw, w]
        }
        2 => {
            patch_vertices.push(nw);
            patches.push([0, 5, 6]);
            vec![o, s, se, ne, nw]
        }
        _ => {
            // The cut ray leaves the origin at angle omega - pi/2 and meets x2 = 1.
            let dir = omega - 0.5 * PI;
            let p = Point2::new(libm::cos(dir) / libm::sin(dir), 1.0);
            patch_vertices.push(p);
            patches.push([0, 5, 6]);
            vec![o, s, se, ne, p]
        }
    };
    let mut spec = DomainSpec::from_patches(polygon, patch_vertices, patches, 1.0)?;
    // Keep the exact angle rather than the value measured from rounded vertices.
    spec.reentrant_angle = omega;
    Ok(spec)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BaseMesh {
    pub vertices: Vec<Point2>,
    pub triangles: Vec<[usize; 3]>,
    /// Leg length of the structured triangles.
    pub h: f64,
    pub subdivisions: usize,
}

impl BaseMesh {
    pub fn triangle(&self, t: usize) -> [Point2; 3] {
        self.triangles[t].map(|v| self.vertices[v])
    }
}

type LatticeKey = [(u32, u32); 3];

fn lattice_key(ids: [usize; 3], weights: [usize; 3]) -> LatticeKey {
    let mut key = [(u32::MAX, 0u32); 3];
    let mut k = 0;
    for (id, w) in ids.into_iter().zip(weights) {
        if w > 0 {
            key[k] = (id as u32, w as u32);
            k += 1;
        }
    }
    key.sort_unstable();
    key
}

/// Uniformly refines every patch of `domain` into triangles with legs of
/// length at most `h`.
pub fn triangulate(domain: &DomainSpec, h: f64) -> Result<BaseMesh> {
    if !(h > 0.0) || !h.is_finite() {
        return Err(Error::Refinement { h, reason: "step must be positive and finite".into() });
    }
    if h > domain.shortest_edge() {
        return Err(Error::Refinement {
            h,
            reason: format!("step exceeds the shortest polygon edge {}", domain.shortest_edge()),
        });
    }
    let n = libm::ceil(domain.patch_size / h - 1e-9).max(1.0) as usize;
    if n > MAX_SUBDIVISIONS {
        return Err(Error::Refinement { h, reason: format!("{n} subdivisions per patch is too fine") });
    }

    let mut index: BTreeMap<LatticeKey, usize> = BTreeMap::new();
    let mut vertices = Vec::new();
    let mut triangles = Vec::with_capacity(domain.patches.len() * n * n);
    let inv_n = 1.0 / n as f64;

    for patch in &domain.patches {
        // Lattice point (i, j) carries weights (n - i - j, i, j) on the patch vertices.
        let mut point_id = |i: usize, j: usize| -> usize {
            let key = lattice_key(*patch, [n - i - j, i, j]);
            *index.entry(key).or_insert_with(|| {
                let (mut x, mut y) = (0.0, 0.0);
                for &(id, w) in key.iter().filter(|(id, _)| *id != u32::MAX) {
                    let p = domain.patch_vertices[id as usize];
                    x += w as f64 * p.x;
                    y += w as f64 * p.y;
                }
                vertices.push(Point2::new(x * inv_n, y * inv_n));
                vertices.len() - 1
            })
        };
        for i in 0..n {
            for j in 0..n - i {
                let a = point_id(i, j);
                let b = point_id(i + 1, j);
                let c = point_id(i, j + 1);
                triangles.push([a, b, c]);
                if i + j + 1 < n {
                    let d = point_id(i + 1, j + 1);
                    triangles.push([b, d, c]);
                }
            }
        }
    }
    Ok(BaseMesh { vertices, triangles, h: domain.patch_size * inv_n, subdivisions: n })
}

#[derive(Debug, Clone, PartialEq)]
pub struct FineMesh {
    /// Base vertices followed by one centroid per base triangle.
    pub vertices: Vec<Point2>,
    pub elements: Vec<[usize; 3]>,
    /// Base triangle each element was cut from.
    pub parent: Vec<usize>,
    /// `(element, local edge)` pairs on the domain boundary. Local edge `e`
    /// joins local vertices `e` and `(e + 1) % 3`.
    pub boundary_edges: Vec<(usize, u8)>,
    pub boundary_vertices: Vec<bool>,
    pub h: f64,
    pub base_vertex_count: usize,
}

impl FineMesh {
    pub fn element(&self, e: usize) -> [Point2; 3] {
        self.elements[e].map(|v| self.vertices[v])
    }

    pub fn element_area(&self, e: usize) -> f64 {
        let [a, b, c] = self.element(e);
        geometry::signed_area(a, b, c)
    }

    pub fn num_elements(&self) -> usize {
        self.elements.len()
    }

    /// Index of the vertex at the origin, if the mesh has one.
    pub fn origin_vertex(&self) -> Option<usize> {
        self.vertices.iter().position(|p| *p == Point2::ORIGIN)
    }

    pub fn with_boundary(mut self, flags: BoundaryFlags) -> Self {
        self.boundary_vertices = flags.vertices;
        self.boundary_edges = flags.edges;
        self
    }
}

/// Splits every base triangle into three elements through its centroid.
pub fn split_barycentric(base: &BaseMesh) -> Result<FineMesh> {
    let nv = base.vertices.len();
    let mut vertices = base.vertices.clone();
    let mut elements = Vec::with_capacity(3 * base.triangles.len());
    let mut parent = Vec::with_capacity(3 * base.triangles.len());
    for (t, tri) in base.triangles.iter().enumerate() {
        if tri.iter().any(|&v| v >= nv) {
            return Err(Error::Consistency(format!("base triangle {t} references a missing vertex")));
        }
        let [a, b, c] = base.triangle(t);
        if geometry::signed_area(a, b, c) <= 0.0 {
            return Err(Error::Consistency(format!("base triangle {t} is not positively oriented")));
        }
        let g = vertices.len();
        vertices.push(geometry::centroid(a, b, c));
        let [i, j, k] = *tri;
        for el in [[i, j, g], [j, k, g], [k, i, g]] {
            elements.push(el);
            parent.push(t);
        }
    }
    Ok(FineMesh {
        boundary_vertices: vec![false; vertices.len()],
        vertices,
        elements,
        parent,
        boundary_edges: Vec::new(),
        h: base.h,
        base_vertex_count: nv,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryFlags {
    pub vertices: Vec<bool>,
    pub edges: Vec<(usize, u8)>,
}

/// Flags vertices and element edges on the domain boundary, checking that the
/// boundary of the mesh and the boundary of the polygon coincide.
pub fn classify_boundary(mesh: &FineMesh, domain: &DomainSpec) -> Result<BoundaryFlags> {
    let on_edges: Vec<Vec<usize>> =
        mesh.vertices.iter().map(|&p| domain.edges_containing(p).collect()).collect();
    let vertices: Vec<bool> = on_edges.iter().map(|e| !e.is_empty()).collect();

    // Element edges seen once form the mesh boundary.
    let mut count: BTreeMap<(usize, usize), u32> = BTreeMap::new();
    for el in &mesh.elements {
        for e in 0..3 {
            let (a, b) = (el[e], el[(e + 1) % 3]);
            *count.entry((a.min(b), a.max(b))).or_insert(0) += 1;
        }
    }

    let mut edges = Vec::new();
    let mut length = 0.0;
    for (ei, el) in mesh.elements.iter().enumerate() {
        for e in 0..3 {
            let (a, b) = (el[e], el[(e + 1) % 3]);
            let flagged = on_edges[a].iter().any(|s| on_edges[b].contains(s));
            let exposed = count[&(a.min(b), a.max(b))] == 1;
            if flagged != exposed {
                return Err(Error::Consistency(format!(
                    "edge ({a}, {b}) of element {ei}: on polygon boundary = {flagged}, mesh boundary = {exposed}"
                )));
            }
            if flagged {
                edges.push((ei, e as u8));
                length += mesh.vertices[a].dist(mesh.vertices[b]);
            }
        }
    }
    let perimeter = domain.perimeter();
    if (length - perimeter).abs() > 1e-10 * perimeter {
        return Err(Error::Consistency(format!(
            "boundary edges have length {length}, polygon perimeter is {perimeter}"
        )));
    }
    Ok(BoundaryFlags { vertices, edges })
}

/// Triangulate, split and classify in one go.
pub fn build_mesh(domain: &DomainSpec, h: f64) -> Result<FineMesh> {
    let base = triangulate(domain, h)?;
    let fine = split_barycentric(&base)?;
    let flags = classify_boundary(&fine, domain)?;
    Ok(fine.with_boundary(flags))
}

pub fn polygon_area(poly: &[Point2]) -> f64 {
    let n = poly.len();
    0.5 * (0..n).map(|i| poly[i].cross(poly[(i + 1) % n])).sum::<f64>()
}

/// Interior angle at `b` of a counterclockwise polygon with neighbours `a`, `c`.
fn interior_angle(a: Point2, b: Point2, c: Point2) -> f64 {
    let u = c - b;
    let v = a - b;
    let mut ang = libm::atan2(u.cross(v), u.dot(v));
    if ang <= 0.0 {
        ang += 2.0 * PI;
    }
    ang
}

fn segments_intersect(p1: Point2, p2: Point2, q1: Point2, q2: Point2) -> bool {
    let d1 = (p2 - p1).cross(q1 - p1);
    let d2 = (p2 - p1).cross(q2 - p1);
    let d3 = (q2 - q1).cross(p1 - q1);
    let d4 = (q2 - q1).cross(p2 - q1);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    let on = |a: Point2, b: Point2, p: Point2| geometry::point_segment_distance(p, a, b) == 0.0;
    on(p1, p2, q1) || on(p1, p2, q2) || on(q1, q2, p1) || on(q1, q2, p2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::angles;

    fn total_area(mesh: &FineMesh) -> f64 {
        (0..mesh.num_elements()).map(|e| mesh.element_area(e)).sum()
    }

    #[test]
    fn benchmark_domains_have_the_advertised_corner() {
        for (m, omega) in [(1, 1.5 * PI), (2, 1.25 * PI), (3, 1.125 * PI)] {
            let d = build_domain(m).unwrap();
            assert_eq!(d.reentrant_angle, omega);
            assert_eq!(d.corner_vertex, Point2::ORIGIN);
            let prev = d.polygon_vertices[d.polygon_vertices.len() - 1];
            let measured = interior_angle(prev, Point2::ORIGIN, d.polygon_vertices[1]);
            assert!((measured - omega).abs() < 1e-12, "m={m}: {measured}");
        }
        assert!((build_domain(1).unwrap().area() - 3.0).abs() < 1e-14);
        assert!(matches!(build_domain(4), Err(Error::Parameter(_))));
        assert!(matches!(build_domain(0), Err(Error::Parameter(_))));
    }

    #[test]
    fn l_shape_removes_the_third_quadrant() {
        let d = build_domain(1).unwrap();
        assert!(!d.contains(Point2::new(-0.5, -0.5)));
        assert!(d.contains(Point2::new(0.5, -0.5)));
        assert!(d.contains(Point2::new(-0.5, 0.5)));
        let d2 = build_domain(2).unwrap();
        assert!(!d2.contains(Point2::new(-0.5, 0.4)));
        assert!(d2.contains(Point2::new(-0.4, 0.5)));
    }

    #[test]
    fn unit_square_with_unit_step_gives_two_triangles() {
        let base = triangulate(&DomainSpec::unit_square(), 1.0).unwrap();
        assert_eq!(base.triangles.len(), 2);
        assert_eq!(base.vertices.len(), 4);
        let fine = split_barycentric(&base).unwrap();
        assert_eq!(fine.elements.len(), 6);
        assert_eq!(fine.vertices.len(), 6);
    }

    #[test]
    fn l_shape_triangle_count_at_half_step() {
        // Two triangles per h-by-h grid square: 2 * area / h^2 = 24.
        let base = triangulate(&build_domain(1).unwrap(), 0.5).unwrap();
        assert_eq!(base.triangles.len(), 24);
        assert_eq!(base.h, 0.5);
    }

    #[test]
    fn single_triangle_split() {
        let base = BaseMesh {
            vertices: vec![Point2::new(0.0, 0.0), Point2::new(1.0, 0.0), Point2::new(0.0, 1.0)],
            triangles: vec![[0, 1, 2]],
            h: 1.0,
            subdivisions: 1,
        };
        let fine = split_barycentric(&base).unwrap();
        assert_eq!(fine.elements.len(), 3);
        assert_eq!(fine.vertices.len(), 4);
        assert!(fine.elements.iter().all(|e| e.contains(&3)));
    }

    #[test]
    fn refinement_errors() {
        let d = build_domain(1).unwrap();
        assert!(matches!(triangulate(&d, 0.0), Err(Error::Refinement { .. })));
        assert!(matches!(triangulate(&d, f64::NAN), Err(Error::Refinement { .. })));
        assert!(matches!(triangulate(&d, 1.5), Err(Error::Refinement { .. })));
    }

    #[test]
    fn mesh_invariants_on_all_domains() {
        for m in 1..=3 {
            let d = build_domain(m).unwrap();
            for h in [0.25, 0.125] {
                let base = triangulate(&d, h).unwrap();
                let (mut emin, mut emax) = (f64::INFINITY, 0.0f64);
                let mut base_area = 0.0;
                for t in 0..base.triangles.len() {
                    let [a, b, c] = base.triangle(t);
                    let area = geometry::signed_area(a, b, c);
                    assert!(area > 0.0);
                    base_area += area;
                    for (p, q) in [(a, b), (b, c), (c, a)] {
                        emin = emin.min(p.dist(q));
                        emax = emax.max(p.dist(q));
                    }
                    let diam = a.dist(b).max(b.dist(c)).max(c.dist(a));
                    assert!(diam >= 0.5 * h && diam <= 2.0 * h, "diameter {diam} for h {h}");
                    assert!([a, b, c].iter().all(|&p| d.contains(p)));
                }
                assert!(emax / emin <= 4.0, "m={m}: edge ratio {}", emax / emin);
                assert!((base_area - d.area()).abs() < 1e-12 * d.area());

                let fine = build_mesh(&d, h).unwrap();
                assert_eq!(fine.elements.len(), 3 * base.triangles.len());
                assert!((total_area(&fine) - base_area).abs() < 1e-12 * base_area);
                let origin = fine.origin_vertex().expect("origin is a mesh vertex");
                assert!(fine.boundary_vertices[origin]);
                for e in 0..fine.num_elements() {
                    let [a, b, c] = fine.element(e);
                    let min = angles(a, b, c).into_iter().fold(f64::INFINITY, f64::min);
                    assert!(min > 10f64.to_radians(), "m={m}: angle {} deg", min.to_degrees());
                }
                for t in 0..base.triangles.len() {
                    assert!(!fine.boundary_vertices[base.vertices.len() + t]);
                }
                let len: f64 = fine
                    .boundary_edges
                    .iter()
                    .map(|&(e, k)| {
                        let el = fine.elements[e];
                        fine.vertices[el[k as usize]].dist(fine.vertices[el[(k as usize + 1) % 3]])
                    })
                    .sum();
                assert!((len - d.perimeter()).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn halving_the_step_quadruples_the_element_count() {
        for m in 1..=3 {
            let d = build_domain(m).unwrap();
            let coarse = triangulate(&d, 0.25).unwrap().triangles.len() as f64;
            let fine = triangulate(&d, 0.125).unwrap().triangles.len() as f64;
            let ratio = fine / coarse;
            assert!((ratio - 4.0).abs() <= 0.8, "ratio {ratio}");
        }
    }

    #[test]
    fn shared_vertices_are_deduplicated() {
        // Euler: V - E + F = 1 for a simply connected triangulated polygon.
        let base = triangulate(&build_domain(3).unwrap(), 0.1).unwrap();
        let mut edges = BTreeMap::new();
        for t in &base.triangles {
            for e in 0..3 {
                let (a, b) = (t[e], t[(e + 1) % 3]);
                edges.insert((a.min(b), a.max(b)), ());
            }
        }
        let chi = base.vertices.len() as i64 - edges.len() as i64 + base.triangles.len() as i64;
        assert_eq!(chi, 1);
    }

    #[test]
    fn nonconforming_mesh_is_rejected() {
        let d = DomainSpec::unit_square();
        let mut fine = split_barycentric(&triangulate(&d, 0.5).unwrap()).unwrap();
        // Drop the last base triangle: its edges on the diagonal become exposed.
        fine.elements.truncate(fine.elements.len() - 3);
        assert!(matches!(classify_boundary(&fine, &d), Err(Error::Consistency(_))));
    }
}

//! Shapes, illumination directions and their shadows.
//!
//! A 2D shape projected along a direction `k̂ = (cos φ, sin φ)` casts an
//! interval on the axis `p̂ = (−sin φ, cos φ)`; a 3D shape casts a convex
//! polygon on the plane spanned by `(θ̂, φ̂)` of the direction. Shapes are
//! validated when constructed, so everything downstream may assume it.

mod distance;
pub mod mesh;
mod polygon;
mod projection;

use std::f64::consts::{PI, TAU};

use nalgebra::{Vector2, Vector3};

use crate::error::{Error, Result};

pub use distance::{min_distance_2d, min_distance_3d};
pub use polygon::{convex_hull, point_in_convex, polygon_area, union_area};
pub(crate) use polygon::union_length;
pub use projection::{
    circle_intersection_area, convex_polygon_intersection, interval_intersection,
    project_shape_2d, project_shape_3d, project_shape_3d_with, ShadowRegion, DEFAULT_N_ARC,
};

pub type Point2 = Vector2<f64>;
pub type Point3 = Vector3<f64>;

/// Illumination (propagation) direction.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Direction {
    /// `k̂ = (cos φ, sin φ)`.
    Planar { phi: f64 },
    /// `k̂ = (sin θ cos φ, sin θ sin φ, cos θ)`.
    Spatial { theta: f64, phi: f64 },
}

impl Direction {
    pub fn planar(phi: f64) -> Self {
        Direction::Planar { phi: phi.rem_euclid(TAU) }
    }

    pub fn spatial(theta: f64, phi: f64) -> Self {
        Direction::Spatial { theta: theta.clamp(0.0, PI), phi: phi.rem_euclid(TAU) }
    }

    pub fn is_planar(&self) -> bool {
        matches!(self, Direction::Planar { .. })
    }

    /// Unit propagation vector; planar directions live in the z = 0 plane.
    pub fn unit(&self) -> Point3 {
        match *self {
            Direction::Planar { phi } => Vector3::new(phi.cos(), phi.sin(), 0.0),
            Direction::Spatial { theta, phi } => {
                let st = theta.sin();
                Vector3::new(st * phi.cos(), st * phi.sin(), theta.cos())
            }
        }
    }

    pub fn opposite(&self) -> Self {
        match *self {
            Direction::Planar { phi } => Direction::planar(phi + PI),
            Direction::Spatial { theta, phi } => Direction::spatial(PI - theta, phi + PI),
        }
    }

    /// Projection axis `p̂ ⊥ k̂` of a planar direction.
    pub fn projection_axis(&self) -> Point2 {
        let phi = match *self {
            Direction::Planar { phi } => phi,
            Direction::Spatial { phi, .. } => phi,
        };
        Vector2::new(-phi.sin(), phi.cos())
    }

    /// Orthonormal basis `(θ̂, φ̂)` of the plane orthogonal to a spatial
    /// direction. At the poles the basis is pinned to `(x̂, ŷ)`.
    pub fn projection_basis(&self) -> (Point3, Point3) {
        let (theta, phi) = match *self {
            Direction::Planar { phi } => (PI / 2.0, phi),
            Direction::Spatial { theta, phi } => (theta, phi),
        };
        if theta.sin().abs() < 1e-12 {
            return (Vector3::x(), Vector3::y());
        }
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        (Vector3::new(ct * cp, ct * sp, -st), Vector3::new(-sp, cp, 0.0))
    }
}

fn finite2(p: &Point2) -> bool {
    p.x.is_finite() && p.y.is_finite()
}

fn finite3(p: &Point3) -> bool {
    p.x.is_finite() && p.y.is_finite() && p.z.is_finite()
}

fn cross2(a: &Point2, b: &Point2) -> f64 {
    a.x * b.y - a.y * b.x
}

#[derive(Clone, Debug, PartialEq)]
pub struct Segment {
    start: Point2,
    end: Point2,
}

impl Segment {
    pub fn new(start: Point2, end: Point2) -> Result<Self> {
        if !finite2(&start) || !finite2(&end) {
            return Err(Error::InvalidShape("segment endpoint is not finite".into()));
        }
        if (end - start).norm() == 0.0 {
            return Err(Error::InvalidShape("segment endpoints coincide".into()));
        }
        Ok(Segment { start, end })
    }

    pub fn start(&self) -> Point2 {
        self.start
    }

    pub fn end(&self) -> Point2 {
        self.end
    }

    pub fn length(&self) -> f64 {
        (self.end - self.start).norm()
    }
}

/// Strictly convex polygon with counter-clockwise vertices.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvexPolygon {
    vertices: Vec<Point2>,
}

impl ConvexPolygon {
    /// Accepts either orientation; clockwise input is reversed.
    pub fn new(mut vertices: Vec<Point2>) -> Result<Self> {
        if vertices.len() < 3 {
            return Err(Error::InvalidShape("polygon needs at least 3 vertices".into()));
        }
        if !vertices.iter().all(finite2) {
            return Err(Error::InvalidShape("polygon vertex is not finite".into()));
        }
        if polygon_area(&vertices) < 0.0 {
            vertices.reverse();
        }
        let n = vertices.len();
        for i in 0..n {
            let a = vertices[i];
            let b = vertices[(i + 1) % n];
            let c = vertices[(i + 2) % n];
            if cross2(&(b - a), &(c - b)) <= 0.0 {
                return Err(Error::InvalidShape("polygon is not strictly convex".into()));
            }
        }
        Ok(ConvexPolygon { vertices })
    }

    /// Axis-aligned rectangle `[x0, x1] × [y0, y1]`.
    pub fn rectangle(x0: f64, y0: f64, x1: f64, y1: f64) -> Result<Self> {
        Self::new(vec![
            Vector2::new(x0, y0),
            Vector2::new(x1, y0),
            Vector2::new(x1, y1),
            Vector2::new(x0, y1),
        ])
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn area(&self) -> f64 {
        polygon_area(&self.vertices)
    }

    pub fn contains(&self, p: &Point2) -> bool {
        point_in_convex(p, &self.vertices)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Disc {
    center: Point2,
    radius: f64,
}

impl Disc {
    pub fn new(center: Point2, radius: f64) -> Result<Self> {
        if !finite2(&center) || !radius.is_finite() || radius <= 0.0 {
            return Err(Error::InvalidShape(format!("disc radius must be positive, got {radius}")));
        }
        Ok(Disc { center, radius })
    }

    pub fn center(&self) -> Point2 {
        self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }
}

/// Planar shape: a transmitter or receiver part in 2D.
#[derive(Clone, Debug, PartialEq)]
pub enum Shape2 {
    Segment(Segment),
    Polygon(ConvexPolygon),
    Disc(Disc),
}

impl Shape2 {
    pub fn segment(start: [f64; 2], end: [f64; 2]) -> Result<Self> {
        Ok(Shape2::Segment(Segment::new(start.into(), end.into())?))
    }

    pub fn polygon(vertices: &[[f64; 2]]) -> Result<Self> {
        Ok(Shape2::Polygon(ConvexPolygon::new(
            vertices.iter().map(|&v| Point2::from(v)).collect(),
        )?))
    }

    pub fn disc(center: [f64; 2], radius: f64) -> Result<Self> {
        Ok(Shape2::Disc(Disc::new(center.into(), radius)?))
    }

    pub fn centroid(&self) -> Point2 {
        match self {
            Shape2::Segment(s) => (s.start + s.end) / 2.0,
            Shape2::Polygon(p) => {
                p.vertices.iter().fold(Point2::zeros(), |acc, v| acc + v) / p.vertices.len() as f64
            }
            Shape2::Disc(d) => d.center,
        }
    }

    /// Length for segments, area otherwise.
    pub fn measure(&self) -> f64 {
        match self {
            Shape2::Segment(s) => s.length(),
            Shape2::Polygon(p) => p.area(),
            Shape2::Disc(d) => PI * d.radius * d.radius,
        }
    }

    /// `(min, max)` corners of the bounding box.
    pub fn bounding_box(&self) -> (Point2, Point2) {
        let pts: Vec<Point2> = match self {
            Shape2::Segment(s) => vec![s.start, s.end],
            Shape2::Polygon(p) => p.vertices.clone(),
            Shape2::Disc(d) => {
                let r = Vector2::new(d.radius, d.radius);
                vec![d.center - r, d.center + r]
            }
        };
        bbox2(&pts)
    }

    pub fn translated(&self, offset: Point2) -> Self {
        self.mapped(|p| p + offset)
    }

    pub fn rotated(&self, angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        self.mapped(|p| Vector2::new(c * p.x - s * p.y, s * p.x + c * p.y))
    }

    fn mapped(&self, f: impl Fn(Point2) -> Point2) -> Self {
        match self {
            Shape2::Segment(s) => Shape2::Segment(Segment { start: f(s.start), end: f(s.end) }),
            Shape2::Polygon(p) => Shape2::Polygon(ConvexPolygon {
                vertices: p.vertices.iter().map(|&v| f(v)).collect(),
            }),
            Shape2::Disc(d) => Shape2::Disc(Disc { center: f(d.center), radius: d.radius }),
        }
    }
}

pub(crate) fn bbox2(pts: &[Point2]) -> (Point2, Point2) {
    let mut lo = Vector2::repeat(f64::INFINITY);
    let mut hi = Vector2::repeat(f64::NEG_INFINITY);
    for p in pts {
        lo = lo.inf(p);
        hi = hi.sup(p);
    }
    (lo, hi)
}

/// Triangulated surface with unit normals following the triangle winding.
#[derive(Clone, Debug, PartialEq)]
pub struct TriangleMesh {
    vertices: Vec<Point3>,
    triangles: Vec<[usize; 3]>,
    normals: Vec<Point3>,
    areas: Vec<f64>,
    crossings: u32,
}

impl TriangleMesh {
    /// Builds a mesh and derives per-triangle normals from the winding order.
    ///
    /// The ray-crossing count used by the surface-integral shadow defaults to
    /// 2 for closed meshes (every edge shared by two triangles) and 1 otherwise.
    pub fn new(vertices: Vec<Point3>, triangles: Vec<[usize; 3]>) -> Result<Self> {
        if triangles.is_empty() {
            return Err(Error::InvalidShape("mesh has no triangles".into()));
        }
        if !vertices.iter().all(finite3) {
            return Err(Error::InvalidShape("mesh vertex is not finite".into()));
        }
        let mut normals = Vec::with_capacity(triangles.len());
        let mut areas = Vec::with_capacity(triangles.len());
        for t in &triangles {
            if t.iter().any(|&i| i >= vertices.len()) {
                return Err(Error::InvalidShape("triangle index out of range".into()));
            }
            let e1 = vertices[t[1]] - vertices[t[0]];
            let e2 = vertices[t[2]] - vertices[t[0]];
            let c = e1.cross(&e2);
            let twice_area = c.norm();
            let scale = e1.norm_squared().max(e2.norm_squared());
            if !(twice_area > 1e-14 * scale) {
                return Err(Error::InvalidShape("degenerate triangle".into()));
            }
            normals.push(c / twice_area);
            areas.push(twice_area / 2.0);
        }
        let crossings = if is_closed(&triangles) { 2 } else { 1 };
        Ok(TriangleMesh { vertices, triangles, normals, areas, crossings })
    }

    /// Overrides the ray-crossing count ξ (e.g. for non-convex closed surfaces).
    pub fn with_crossings(mut self, crossings: u32) -> Self {
        self.crossings = crossings.max(1);
        self
    }

    pub fn vertices(&self) -> &[Point3] {
        &self.vertices
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn normals(&self) -> &[Point3] {
        &self.normals
    }

    pub fn areas(&self) -> &[f64] {
        &self.areas
    }

    pub fn crossings(&self) -> u32 {
        self.crossings
    }

    pub fn area(&self) -> f64 {
        self.areas.iter().sum()
    }

    pub fn triangle_centroid(&self, i: usize) -> Point3 {
        let t = self.triangles[i];
        (self.vertices[t[0]] + self.vertices[t[1]] + self.vertices[t[2]]) / 3.0
    }

    /// Longest edge of triangle `i`.
    pub fn triangle_diameter(&self, i: usize) -> f64 {
        let t = self.triangles[i];
        let [a, b, c] = [self.vertices[t[0]], self.vertices[t[1]], self.vertices[t[2]]];
        (b - a).norm().max((c - b).norm()).max((a - c).norm())
    }

    pub fn triangle(&self, i: usize) -> [Point3; 3] {
        let t = self.triangles[i];
        [self.vertices[t[0]], self.vertices[t[1]], self.vertices[t[2]]]
    }

    pub fn is_closed(&self) -> bool {
        is_closed(&self.triangles)
    }

    fn mapped(&self, f: impl Fn(Point3) -> Point3, rot: impl Fn(Point3) -> Point3) -> Self {
        TriangleMesh {
            vertices: self.vertices.iter().map(|&v| f(v)).collect(),
            triangles: self.triangles.clone(),
            normals: self.normals.iter().map(|&n| rot(n)).collect(),
            areas: self.areas.clone(),
            crossings: self.crossings,
        }
    }
}

fn is_closed(triangles: &[[usize; 3]]) -> bool {
    use std::collections::HashMap;
    let mut count: HashMap<(usize, usize), u32> = HashMap::new();
    for t in triangles {
        for k in 0..3 {
            let (a, b) = (t[k], t[(k + 1) % 3]);
            *count.entry((a.min(b), a.max(b))).or_default() += 1;
        }
    }
    count.values().all(|&c| c == 2)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Sphere {
    center: Point3,
    radius: f64,
}

impl Sphere {
    pub fn new(center: Point3, radius: f64) -> Result<Self> {
        if !finite3(&center) || !radius.is_finite() || radius <= 0.0 {
            return Err(Error::InvalidShape(format!("sphere radius must be positive, got {radius}")));
        }
        Ok(Sphere { center, radius })
    }

    pub fn center(&self) -> Point3 {
        self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }
}

/// Convex polygon lying in a plane in 3D (a plate).
#[derive(Clone, Debug, PartialEq)]
pub struct PlanarPolygon {
    vertices: Vec<Point3>,
    normal: Point3,
}

impl PlanarPolygon {
    /// Vertices in order around the boundary; the normal follows the winding.
    pub fn new(vertices: Vec<Point3>) -> Result<Self> {
        if vertices.len() < 3 {
            return Err(Error::InvalidShape("plate needs at least 3 vertices".into()));
        }
        if !vertices.iter().all(finite3) {
            return Err(Error::InvalidShape("plate vertex is not finite".into()));
        }
        // Newell's method
        let n = vertices.len();
        let mut normal = Vector3::zeros();
        for i in 0..n {
            normal += vertices[i].cross(&vertices[(i + 1) % n]);
        }
        let len = normal.norm();
        if len == 0.0 {
            return Err(Error::InvalidShape("plate has zero area".into()));
        }
        let normal = normal / len;
        let scale = vertices.iter().map(|v| (v - vertices[0]).norm()).fold(0.0, f64::max);
        if vertices.iter().any(|v| (v - vertices[0]).dot(&normal).abs() > 1e-9 * scale) {
            return Err(Error::InvalidShape("plate vertices are not coplanar".into()));
        }
        let plate = PlanarPolygon { vertices, normal };
        // convexity in the plate's own frame
        ConvexPolygon::new(plate.local_coordinates())?;
        Ok(plate)
    }

    /// Rectangle with corner `origin` spanned by edge vectors `u` and `v`.
    pub fn rectangle(origin: Point3, u: Point3, v: Point3) -> Result<Self> {
        Self::new(vec![origin, origin + u, origin + u + v, origin + v])
    }

    pub fn vertices(&self) -> &[Point3] {
        &self.vertices
    }

    pub fn normal(&self) -> Point3 {
        self.normal
    }

    /// In-plane orthonormal basis, first axis along the first edge.
    pub fn plane_basis(&self) -> (Point3, Point3) {
        let u = (self.vertices[1] - self.vertices[0]).normalize();
        let v = self.normal.cross(&u);
        (u, v)
    }

    /// Vertices expressed in the in-plane basis relative to the first vertex.
    pub fn local_coordinates(&self) -> Vec<Point2> {
        let (u, v) = self.plane_basis();
        self.vertices
            .iter()
            .map(|p| {
                let d = p - self.vertices[0];
                Vector2::new(d.dot(&u), d.dot(&v))
            })
            .collect()
    }

    pub fn area(&self) -> f64 {
        polygon_area(&self.local_coordinates()).abs()
    }
}

/// Spatial shape: a transmitter or receiver part in 3D.
#[derive(Clone, Debug, PartialEq)]
pub enum Shape3 {
    Mesh(TriangleMesh),
    Sphere(Sphere),
    Plate(PlanarPolygon),
}

impl Shape3 {
    pub fn sphere(center: [f64; 3], radius: f64) -> Result<Self> {
        Ok(Shape3::Sphere(Sphere::new(center.into(), radius)?))
    }

    pub fn plate(vertices: &[[f64; 3]]) -> Result<Self> {
        Ok(Shape3::Plate(PlanarPolygon::new(
            vertices.iter().map(|&v| Point3::from(v)).collect(),
        )?))
    }

    pub fn centroid(&self) -> Point3 {
        match self {
            Shape3::Mesh(m) => {
                let mut acc = Vector3::zeros();
                for i in 0..m.triangles.len() {
                    acc += m.triangle_centroid(i) * m.areas[i];
                }
                acc / m.area()
            }
            Shape3::Sphere(s) => s.center,
            Shape3::Plate(p) => {
                p.vertices.iter().fold(Vector3::zeros(), |acc, v| acc + v) / p.vertices.len() as f64
            }
        }
    }

    /// Points whose convex hull is the shape (spheres excepted).
    pub fn hull_points(&self) -> &[Point3] {
        match self {
            Shape3::Mesh(m) => &m.vertices,
            Shape3::Plate(p) => &p.vertices,
            Shape3::Sphere(_) => &[],
        }
    }

    pub fn bounding_box(&self) -> (Point3, Point3) {
        match self {
            Shape3::Sphere(s) => {
                let r = Vector3::repeat(s.radius);
                (s.center - r, s.center + r)
            }
            _ => {
                let mut lo = Vector3::repeat(f64::INFINITY);
                let mut hi = Vector3::repeat(f64::NEG_INFINITY);
                for p in self.hull_points() {
                    lo = lo.inf(p);
                    hi = hi.sup(p);
                }
                (lo, hi)
            }
        }
    }

    pub fn translated(&self, offset: Point3) -> Self {
        self.mapped(|p| p + offset, |n| n)
    }

    /// Rigid rotation about the origin.
    pub fn rotated(&self, rotation: &nalgebra::Rotation3<f64>) -> Self {
        self.mapped(|p| rotation * p, |n| rotation * n)
    }

    fn mapped(&self, f: impl Fn(Point3) -> Point3, rot: impl Fn(Point3) -> Point3) -> Self {
        match self {
            Shape3::Mesh(m) => Shape3::Mesh(m.mapped(f, rot)),
            Shape3::Sphere(s) => Shape3::Sphere(Sphere { center: f(s.center), radius: s.radius }),
            Shape3::Plate(p) => Shape3::Plate(PlanarPolygon {
                vertices: p.vertices.iter().map(|&v| f(v)).collect(),
                normal: rot(p.normal),
            }),
        }
    }
}

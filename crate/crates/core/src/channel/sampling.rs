use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::geometry::{Point2, Point3, Shape2, Shape3};
use crate::shadow::{Parts, Region};

/// Point sources (or receivers) spread uniformly over a region.
#[derive(Clone, Debug, PartialEq)]
pub struct SampleSet {
    points: Vec<Point3>,
    dimension: usize,
    spacing: f64,
}

impl SampleSet {
    /// Wraps explicit points. Planar sets keep `z = 0`.
    pub fn from_points(points: Vec<Point3>, dimension: usize, spacing: f64) -> Result<Self> {
        if !(spacing > 0.0) || !spacing.is_finite() {
            return Err(Error::InvalidArgument(format!("sample spacing must be positive, got {spacing}")));
        }
        if dimension != 2 && dimension != 3 {
            return Err(Error::InvalidArgument(format!("dimension must be 2 or 3, got {dimension}")));
        }
        if points.is_empty() {
            return Err(Error::EmptySampling);
        }
        if dimension == 2 && points.iter().any(|p| p.z != 0.0) {
            return Err(Error::InvalidArgument("planar sample points must have z = 0".into()));
        }
        Ok(SampleSet { points, dimension, spacing })
    }

    pub fn points(&self) -> &[Point3] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }
}

/// Uniform grid of spacing `spacing` clipped to the region.
///
/// Segments use an arc-length grid from the start point, areas and volumes a
/// Cartesian grid anchored at the lower bounding-box corner, plates a grid in
/// their own plane and meshes a barycentric grid per triangle. Points shared
/// between parts or triangles are kept once.
pub fn sample_region(region: &Region, spacing: f64) -> Result<SampleSet> {
    if !(spacing > 0.0) || !spacing.is_finite() {
        return Err(Error::InvalidArgument(format!("sample spacing must be positive, got {spacing}")));
    }
    let mut points = Vec::new();
    match region.parts() {
        Parts::Planar(parts) => {
            for part in parts {
                sample_shape2(part, spacing, &mut points);
            }
        }
        Parts::Spatial(parts) => {
            for part in parts {
                sample_shape3(part, spacing, &mut points);
            }
        }
    }
    let points = dedup(points, spacing);
    SampleSet::from_points(points, region.dimension(), spacing)
}

/// Grid coordinates `lo + iΔ` up to `hi`, tolerant to rounding at the end.
fn grid(lo: f64, hi: f64, spacing: f64) -> impl Iterator<Item = f64> {
    let n = ((hi - lo) / spacing + 1e-9).floor().max(0.0) as usize;
    (0..=n).map(move |i| lo + i as f64 * spacing)
}

fn inside_convex(p: &Point2, poly: &[Point2], tol: f64) -> bool {
    let n = poly.len();
    (0..n).all(|i| {
        let a = poly[i];
        let e = poly[(i + 1) % n] - a;
        let d = p - a;
        e.x * d.y - e.y * d.x >= -tol * e.norm()
    })
}

fn sample_shape2(shape: &Shape2, spacing: f64, out: &mut Vec<Point3>) {
    let tol = 1e-9 * spacing;
    match shape {
        Shape2::Segment(s) => {
            let len = s.length();
            let dir = (s.end() - s.start()) / len;
            for t in grid(0.0, len, spacing) {
                let p = s.start() + dir * t.min(len);
                out.push(Point3::new(p.x, p.y, 0.0));
            }
        }
        Shape2::Polygon(poly) => {
            let (lo, hi) = shape.bounding_box();
            for y in grid(lo.y, hi.y, spacing) {
                for x in grid(lo.x, hi.x, spacing) {
                    if inside_convex(&Point2::new(x, y), poly.vertices(), tol) {
                        out.push(Point3::new(x, y, 0.0));
                    }
                }
            }
        }
        Shape2::Disc(d) => {
            let (lo, hi) = shape.bounding_box();
            for y in grid(lo.y, hi.y, spacing) {
                for x in grid(lo.x, hi.x, spacing) {
                    if (Point2::new(x, y) - d.center()).norm() <= d.radius() + tol {
                        out.push(Point3::new(x, y, 0.0));
                    }
                }
            }
        }
    }
}

fn sample_shape3(shape: &Shape3, spacing: f64, out: &mut Vec<Point3>) {
    let tol = 1e-9 * spacing;
    match shape {
        Shape3::Plate(plate) => {
            let (u, v) = plate.plane_basis();
            let local = plate.local_coordinates();
            let origin = plate.vertices()[0];
            let (lo, hi) = crate::geometry::bbox2(&local);
            for y in grid(lo.y, hi.y, spacing) {
                for x in grid(lo.x, hi.x, spacing) {
                    if inside_convex(&Point2::new(x, y), &local, tol) {
                        out.push(origin + u * x + v * y);
                    }
                }
            }
        }
        Shape3::Sphere(s) => {
            let (lo, hi) = shape.bounding_box();
            for z in grid(lo.z, hi.z, spacing) {
                for y in grid(lo.y, hi.y, spacing) {
                    for x in grid(lo.x, hi.x, spacing) {
                        let p = Point3::new(x, y, z);
                        if (p - s.center()).norm() <= s.radius() + tol {
                            out.push(p);
                        }
                    }
                }
            }
        }
        Shape3::Mesh(mesh) => {
            for i in 0..mesh.triangles().len() {
                let [a, b, c] = mesh.triangle(i);
                let longest = (b - a).norm().max((c - b).norm()).max((a - c).norm());
                let m = ((longest / spacing) - 1e-9).ceil().max(1.0) as usize;
                for p in 0..=m {
                    for q in 0..=(m - p) {
                        let (s, t) = (p as f64 / m as f64, q as f64 / m as f64);
                        out.push(a + (b - a) * s + (c - a) * t);
                    }
                }
            }
        }
    }
}

/// Drops points that coincide up to a tiny fraction of the spacing, keeping
/// the first occurrence.
fn dedup(points: Vec<Point3>, spacing: f64) -> Vec<Point3> {
    let q = 1e-6 * spacing;
    let mut seen = HashSet::with_capacity(points.len());
    points
        .into_iter()
        .filter(|p| seen.insert([(p.x / q).round() as i64, (p.y / q).round() as i64, (p.z / q).round() as i64]))
        .collect()
}

/// Smallest distance between a point of `a` and a point of `b`.
pub(crate) fn min_point_distance(a: &[Point3], b: &[Point3]) -> f64 {
    let per_point = crate::par::map_range(a.len(), |i| {
        b.iter().map(|q| (a[i] - q).norm()).fold(f64::INFINITY, f64::min)
    });
    per_point.into_iter().fold(f64::INFINITY, f64::min)
}

//! Minimum distances between shapes, used to check that transmitter and
//! receiver supports are disjoint.

use super::polygon::point_in_convex;
use super::{cross2, Point2, Point3, Shape2, Shape3};

fn point_segment_2d(p: Point2, a: Point2, b: Point2) -> f64 {
    let ab = b - a;
    let t = ((p - a).dot(&ab) / ab.norm_squared()).clamp(0.0, 1.0);
    (a + ab * t - p).norm()
}

fn segments_intersect_2d(p0: Point2, p1: Point2, q0: Point2, q1: Point2) -> bool {
    let d1 = cross2(&(q1 - q0), &(p0 - q0));
    let d2 = cross2(&(q1 - q0), &(p1 - q0));
    let d3 = cross2(&(p1 - p0), &(q0 - p0));
    let d4 = cross2(&(p1 - p0), &(q1 - p0));
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0)) && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0)) {
        return true;
    }
    let on = |d: f64, a: Point2, b: Point2, c: Point2| {
        d == 0.0 && c.x >= a.x.min(b.x) && c.x <= a.x.max(b.x) && c.y >= a.y.min(b.y) && c.y <= a.y.max(b.y)
    };
    on(d1, q0, q1, p0) || on(d2, q0, q1, p1) || on(d3, p0, p1, q0) || on(d4, p0, p1, q1)
}

fn edges(vs: &[Point2]) -> Vec<(Point2, Point2)> {
    if vs.len() == 2 {
        return vec![(vs[0], vs[1])];
    }
    (0..vs.len()).map(|i| (vs[i], vs[(i + 1) % vs.len()])).collect()
}

fn polygonal_distance(a: &[Point2], b: &[Point2]) -> f64 {
    let (ea, eb) = (edges(a), edges(b));
    if ea.iter().any(|&(p0, p1)| eb.iter().any(|&(q0, q1)| segments_intersect_2d(p0, p1, q0, q1))) {
        return 0.0;
    }
    if (b.len() >= 3 && point_in_convex(&a[0], b)) || (a.len() >= 3 && point_in_convex(&b[0], a)) {
        return 0.0;
    }
    let mut best = f64::INFINITY;
    for &(p0, p1) in &ea {
        for &(q0, q1) in &eb {
            best = best
                .min(point_segment_2d(p0, q0, q1))
                .min(point_segment_2d(p1, q0, q1))
                .min(point_segment_2d(q0, p0, p1))
                .min(point_segment_2d(q1, p0, p1));
        }
    }
    best
}

fn point_polygonal_distance(p: Point2, vs: &[Point2]) -> f64 {
    if vs.len() >= 3 && point_in_convex(&p, vs) {
        return 0.0;
    }
    edges(vs).iter().map(|&(a, b)| point_segment_2d(p, a, b)).fold(f64::INFINITY, f64::min)
}

enum Planar {
    Polygonal(Vec<Point2>),
    Round(Point2, f64),
}

fn planar(shape: &Shape2) -> Planar {
    match shape {
        Shape2::Segment(s) => Planar::Polygonal(vec![s.start(), s.end()]),
        Shape2::Polygon(p) => Planar::Polygonal(p.vertices().to_vec()),
        Shape2::Disc(d) => Planar::Round(d.center(), d.radius()),
    }
}

/// Minimum Euclidean distance between two planar shapes (0 if they touch).
pub fn min_distance_2d(a: &Shape2, b: &Shape2) -> f64 {
    match (planar(a), planar(b)) {
        (Planar::Polygonal(pa), Planar::Polygonal(pb)) => polygonal_distance(&pa, &pb),
        (Planar::Round(c, r), Planar::Polygonal(p)) | (Planar::Polygonal(p), Planar::Round(c, r)) => {
            (point_polygonal_distance(c, &p) - r).max(0.0)
        }
        (Planar::Round(c1, r1), Planar::Round(c2, r2)) => ((c1 - c2).norm() - r1 - r2).max(0.0),
    }
}

/// Closest point on triangle `abc` to `p` (Ericson, Real-Time Collision Detection §5.1.5).
fn closest_on_triangle(p: Point3, a: Point3, b: Point3, c: Point3) -> Point3 {
    let ab = b - a;
    let ac = c - a;
    let ap = p - a;
    let d1 = ab.dot(&ap);
    let d2 = ac.dot(&ap);
    if d1 <= 0.0 && d2 <= 0.0 {
        return a;
    }
    let bp = p - b;
    let d3 = ab.dot(&bp);
    let d4 = ac.dot(&bp);
    if d3 >= 0.0 && d4 <= d3 {
        return b;
    }
    let vc = d1 * d4 - d3 * d2;
    if vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0 {
        return a + ab * (d1 / (d1 - d3));
    }
    let cp = p - c;
    let d5 = ab.dot(&cp);
    let d6 = ac.dot(&cp);
    if d6 >= 0.0 && d5 <= d6 {
        return c;
    }
    let vb = d5 * d2 - d1 * d6;
    if vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0 {
        return a + ac * (d2 / (d2 - d6));
    }
    let va = d3 * d6 - d5 * d4;
    if va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0 {
        return b + (c - b) * ((d4 - d3) / ((d4 - d3) + (d5 - d6)));
    }
    let denom = 1.0 / (va + vb + vc);
    a + ab * (vb * denom) + ac * (vc * denom)
}

/// Distance between segments `p0p1` and `q0q1` in 3D.
fn segment_segment_3d(p0: Point3, p1: Point3, q0: Point3, q1: Point3) -> f64 {
    let d1 = p1 - p0;
    let d2 = q1 - q0;
    let r = p0 - q0;
    let a = d1.norm_squared();
    let e = d2.norm_squared();
    let f = d2.dot(&r);
    let c = d1.dot(&r);
    let b = d1.dot(&d2);
    let denom = a * e - b * b;
    let mut s = if denom > 1e-300 { ((b * f - c * e) / denom).clamp(0.0, 1.0) } else { 0.0 };
    let mut t = (b * s + f) / e;
    if t < 0.0 {
        t = 0.0;
        s = (-c / a).clamp(0.0, 1.0);
    } else if t > 1.0 {
        t = 1.0;
        s = ((b - c) / a).clamp(0.0, 1.0);
    }
    ((p0 + d1 * s) - (q0 + d2 * t)).norm()
}

fn segment_hits_triangle(p0: Point3, p1: Point3, tri: &[Point3; 3]) -> bool {
    let dir = p1 - p0;
    let e1 = tri[1] - tri[0];
    let e2 = tri[2] - tri[0];
    let h = dir.cross(&e2);
    let det = e1.dot(&h);
    if det.abs() < 1e-300 {
        return false;
    }
    let inv = 1.0 / det;
    let s = p0 - tri[0];
    let u = s.dot(&h) * inv;
    if !(0.0..=1.0).contains(&u) {
        return false;
    }
    let q = s.cross(&e1);
    let v = dir.dot(&q) * inv;
    if v < 0.0 || u + v > 1.0 {
        return false;
    }
    let t = e2.dot(&q) * inv;
    (0.0..=1.0).contains(&t)
}

fn triangle_distance(a: &[Point3; 3], b: &[Point3; 3]) -> f64 {
    for i in 0..3 {
        if segment_hits_triangle(a[i], a[(i + 1) % 3], b) || segment_hits_triangle(b[i], b[(i + 1) % 3], a) {
            return 0.0;
        }
    }
    let mut best = f64::INFINITY;
    for i in 0..3 {
        best = best.min((closest_on_triangle(a[i], b[0], b[1], b[2]) - a[i]).norm());
        best = best.min((closest_on_triangle(b[i], a[0], a[1], a[2]) - b[i]).norm());
        for j in 0..3 {
            best = best.min(segment_segment_3d(a[i], a[(i + 1) % 3], b[j], b[(j + 1) % 3]));
        }
    }
    best
}

enum Spatial {
    Triangles(Vec<[Point3; 3]>),
    Round(Point3, f64),
}

fn spatial(shape: &Shape3) -> Spatial {
    match shape {
        Shape3::Sphere(s) => Spatial::Round(s.center(), s.radius()),
        Shape3::Mesh(m) => Spatial::Triangles((0..m.triangles().len()).map(|i| m.triangle(i)).collect()),
        Shape3::Plate(p) => {
            let v = p.vertices();
            Spatial::Triangles((1..v.len() - 1).map(|i| [v[0], v[i], v[i + 1]]).collect())
        }
    }
}

fn bounding_sphere(t: &[Point3; 3]) -> (Point3, f64) {
    let c = (t[0] + t[1] + t[2]) / 3.0;
    let r = t.iter().map(|p| (p - c).norm()).fold(0.0, f64::max);
    (c, r)
}

/// Minimum Euclidean distance between two spatial shapes (0 if they touch).
pub fn min_distance_3d(a: &Shape3, b: &Shape3) -> f64 {
    match (spatial(a), spatial(b)) {
        (Spatial::Round(c1, r1), Spatial::Round(c2, r2)) => ((c1 - c2).norm() - r1 - r2).max(0.0),
        (Spatial::Round(c, r), Spatial::Triangles(ts)) | (Spatial::Triangles(ts), Spatial::Round(c, r)) => {
            let d = ts
                .iter()
                .map(|t| (closest_on_triangle(c, t[0], t[1], t[2]) - c).norm())
                .fold(f64::INFINITY, f64::min);
            (d - r).max(0.0)
        }
        (Spatial::Triangles(ta), Spatial::Triangles(tb)) => {
            let sa: Vec<_> = ta.iter().map(bounding_sphere).collect();
            let sb: Vec<_> = tb.iter().map(bounding_sphere).collect();
            let mut best = f64::INFINITY;
            for (i, t1) in ta.iter().enumerate() {
                for (j, t2) in tb.iter().enumerate() {
                    let lower = (sa[i].0 - sb[j].0).norm() - sa[i].1 - sb[j].1;
                    if lower >= best {
                        continue;
                    }
                    best = best.min(triangle_distance(t1, t2));
                    if best == 0.0 {
                        return 0.0;
                    }
                }
            }
            best
        }
    }
}

//! Which of two disjoint convex parts a ray along `k̂` meets first.
//!
//! The ray through a point of the mutual shadow meets both parts; comparing
//! the parameter intervals `t = k̂·r` along that ray settles the order. For
//! disjoint convex parts the answer is the same for every ray in the mutual
//! shadow, so one sample point suffices.

use crate::geometry::{Point2, Point3, Shape2, Shape3};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Order {
    TransmitterFirst,
    ReceiverFirst,
    Ambiguous,
}

fn compare(t: (f64, f64), r: (f64, f64)) -> Order {
    if t.1 < r.0 {
        Order::TransmitterFirst
    } else if r.1 < t.0 {
        Order::ReceiverFirst
    } else {
        Order::Ambiguous
    }
}

fn span(values: impl Iterator<Item = f64>) -> Option<(f64, f64)> {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), t| (lo.min(t), hi.max(t)));
    (lo <= hi).then_some((lo, hi))
}

/// Interval of `t = k̂·r` where the line `p̂·r = s` meets a planar shape.
fn line_interval_2d(shape: &Shape2, k: Point2, p: Point2, s: f64) -> Option<(f64, f64)> {
    let edge_hits = |a: Point2, b: Point2, out: &mut Vec<f64>| {
        let (pa, pb) = (p.dot(&a) - s, p.dot(&b) - s);
        let tol = 1e-12 * (1.0 + pa.abs().max(pb.abs()));
        if (pa - pb).abs() <= tol {
            if pa.abs() <= tol {
                out.push(k.dot(&a));
                out.push(k.dot(&b));
            }
        } else if pa.min(pb) <= tol && pa.max(pb) >= -tol {
            let lam = (-pa / (pb - pa)).clamp(0.0, 1.0);
            out.push(k.dot(&(a + (b - a) * lam)));
        }
    };
    let mut hits = Vec::new();
    match shape {
        Shape2::Segment(seg) => edge_hits(seg.start(), seg.end(), &mut hits),
        Shape2::Polygon(poly) => {
            let v = poly.vertices();
            for i in 0..v.len() {
                edge_hits(v[i], v[(i + 1) % v.len()], &mut hits);
            }
        }
        Shape2::Disc(d) => {
            let off = s - p.dot(&d.center());
            let q = d.radius() * d.radius() - off * off;
            if q < 0.0 {
                return None;
            }
            let t = k.dot(&d.center());
            return Some((t - q.sqrt(), t + q.sqrt()));
        }
    }
    span(hits.into_iter())
}

fn support_2d(shape: &Shape2, k: Point2) -> (f64, f64) {
    match shape {
        Shape2::Segment(seg) => span([k.dot(&seg.start()), k.dot(&seg.end())].into_iter()).unwrap(),
        Shape2::Polygon(poly) => span(poly.vertices().iter().map(|v| k.dot(v))).unwrap(),
        Shape2::Disc(d) => (k.dot(&d.center()) - d.radius(), k.dot(&d.center()) + d.radius()),
    }
}

pub(crate) fn order_2d(t: &Shape2, r: &Shape2, k: Point2, p: Point2, s: f64) -> Order {
    let ti = line_interval_2d(t, k, p, s).unwrap_or_else(|| support_2d(t, k));
    let ri = line_interval_2d(r, k, p, s).unwrap_or_else(|| support_2d(r, k));
    compare(ti, ri)
}

/// Projection frame of a spatial direction.
#[derive(Clone, Copy)]
pub(crate) struct Frame {
    pub k: Point3,
    pub e1: Point3,
    pub e2: Point3,
}

fn triangle_hits(frame: &Frame, tri: [Point3; 3], uv: Point2, out: &mut Vec<f64>) {
    let q: Vec<Point2> = tri.iter().map(|v| Point2::new(frame.e1.dot(v), frame.e2.dot(v))).collect();
    let (d1, d2) = (q[1] - q[0], q[2] - q[0]);
    let det = d1.x * d2.y - d1.y * d2.x;
    let scale = d1.norm_squared().max(d2.norm_squared());
    if det.abs() <= 1e-14 * scale {
        return;
    }
    let w = uv - q[0];
    let b1 = (w.x * d2.y - w.y * d2.x) / det;
    let b2 = (d1.x * w.y - d1.y * w.x) / det;
    let tol = 1e-9;
    if b1 >= -tol && b2 >= -tol && b1 + b2 <= 1.0 + tol {
        let b0 = 1.0 - b1 - b2;
        out.push(b0 * frame.k.dot(&tri[0]) + b1 * frame.k.dot(&tri[1]) + b2 * frame.k.dot(&tri[2]));
    }
}

/// Interval of `t = k̂·r` along the line through `uv` in the projection plane.
fn line_interval_3d(shape: &Shape3, frame: &Frame, uv: Point2) -> Option<(f64, f64)> {
    let mut hits = Vec::new();
    match shape {
        Shape3::Sphere(s) => {
            let c = s.center();
            let off = uv - Point2::new(frame.e1.dot(&c), frame.e2.dot(&c));
            let q = s.radius() * s.radius() - off.norm_squared();
            if q < 0.0 {
                return None;
            }
            let t = frame.k.dot(&c);
            return Some((t - q.sqrt(), t + q.sqrt()));
        }
        Shape3::Plate(p) => {
            let v = p.vertices();
            for i in 1..v.len() - 1 {
                triangle_hits(frame, [v[0], v[i], v[i + 1]], uv, &mut hits);
            }
        }
        Shape3::Mesh(m) => {
            for i in 0..m.triangles().len() {
                triangle_hits(frame, m.triangle(i), uv, &mut hits);
            }
        }
    }
    span(hits.into_iter())
}

fn support_3d(shape: &Shape3, k: Point3) -> (f64, f64) {
    match shape {
        Shape3::Sphere(s) => (k.dot(&s.center()) - s.radius(), k.dot(&s.center()) + s.radius()),
        _ => span(shape.hull_points().iter().map(|v| k.dot(v))).unwrap(),
    }
}

pub(crate) fn order_3d(t: &Shape3, r: &Shape3, frame: &Frame, uv: Point2) -> Order {
    if let (Shape3::Sphere(a), Shape3::Sphere(b)) = (t, r) {
        // The plane bisecting the centre line separates two disjoint balls.
        let s = frame.k.dot(&(b.center() - a.center()));
        return if s > 0.0 { Order::TransmitterFirst } else { Order::ReceiverFirst };
    }
    let ti = line_interval_3d(t, frame, uv).unwrap_or_else(|| support_3d(t, frame.k));
    let ri = line_interval_3d(r, frame, uv).unwrap_or_else(|| support_3d(r, frame.k));
    compare(ti, ri)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn long_transmitter_with_offset_receiver() {
        // Centroid order along k̂ is reversed here, the ray order is not.
        let t = Shape2::segment([0.0, 0.0], [10.0, 0.0]).unwrap();
        let r = Shape2::segment([0.0, 1.0], [1.0, 1.0]).unwrap();
        let phi = std::f64::consts::PI / 3.0;
        let k = Point2::new(phi.cos(), phi.sin());
        let p = Point2::new(-phi.sin(), phi.cos());
        assert!(k.dot(&(r.centroid() - t.centroid())) < 0.0);
        let s = p.dot(&Point2::new(0.9, 1.0));
        assert_eq!(order_2d(&t, &r, k, p, s), Order::TransmitterFirst);
        assert_eq!(order_2d(&r, &t, k, p, s), Order::ReceiverFirst);
    }

    #[test]
    fn disc_and_polygon_chords() {
        let disc = Shape2::disc([0.0, 3.0], 1.0).unwrap();
        let square = Shape2::polygon(&[[-1.0, -1.0], [1.0, -1.0], [1.0, 1.0], [-1.0, 1.0]]).unwrap();
        let k = Point2::new(0.0, 1.0);
        let p = Point2::new(-1.0, 0.0);
        assert_eq!(line_interval_2d(&disc, k, p, 0.0), Some((2.0, 4.0)));
        assert_eq!(line_interval_2d(&square, k, p, 0.5), Some((-1.0, 1.0)));
        assert_eq!(order_2d(&square, &disc, k, p, 0.2), Order::TransmitterFirst);
    }
}

//! Shadows of shapes along a direction and their intersections.

use std::f64::consts::{PI, TAU};

use nalgebra::Vector2;

use super::polygon::{clip_convex, convex_hull, polygon_area};
use super::{Direction, Point2, Shape2, Shape3};

/// Vertex count used when a sphere's disc-shaped shadow is polygonized.
pub const DEFAULT_N_ARC: usize = 256;

/// Shadow cast on the plane (or line) orthogonal to a direction.
#[derive(Clone, Debug, PartialEq)]
pub enum ShadowRegion {
    Empty,
    /// Interval on the projection axis `p̂`.
    Interval { min: f64, max: f64 },
    /// Counter-clockwise convex polygon in `(θ̂, φ̂)` coordinates.
    Polygon(Vec<Point2>),
}

impl ShadowRegion {
    /// Length of an interval or area of a polygon.
    pub fn measure(&self) -> f64 {
        match self {
            ShadowRegion::Empty => 0.0,
            ShadowRegion::Interval { min, max } => (max - min).max(0.0),
            ShadowRegion::Polygon(v) => polygon_area(v).abs(),
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, ShadowRegion::Empty)
    }

    pub fn vertices(&self) -> &[Point2] {
        match self {
            ShadowRegion::Polygon(v) => v,
            _ => &[],
        }
    }
}

/// Interval of `p̂·r` over a planar shape, `p̂ = (−sin φ, cos φ)`.
pub fn project_shape_2d(shape: &Shape2, dir: &Direction) -> ShadowRegion {
    let p = dir.projection_axis();
    let (min, max) = match shape {
        Shape2::Segment(s) => {
            let (a, b) = (p.dot(&s.start()), p.dot(&s.end()));
            (a.min(b), a.max(b))
        }
        Shape2::Polygon(poly) => poly
            .vertices()
            .iter()
            .map(|v| p.dot(v))
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| (lo.min(x), hi.max(x))),
        Shape2::Disc(d) => {
            let c = p.dot(&d.center());
            (c - d.radius(), c + d.radius())
        }
    };
    ShadowRegion::Interval { min, max }
}

/// Convex shadow of a spatial shape with the default sphere polygonization.
pub fn project_shape_3d(shape: &Shape3, dir: &Direction) -> ShadowRegion {
    project_shape_3d_with(shape, dir, DEFAULT_N_ARC)
}

/// Convex hull of the projected hull points; spheres project to an
/// `n_arc`-gon whose area equals the disc's `πa²`.
pub fn project_shape_3d_with(shape: &Shape3, dir: &Direction, n_arc: usize) -> ShadowRegion {
    let (e1, e2) = dir.projection_basis();
    let polygon = match shape {
        Shape3::Sphere(s) => {
            let c = Vector2::new(e1.dot(&s.center()), e2.dot(&s.center()));
            let n = n_arc.max(3);
            let step = TAU / n as f64;
            // equal-area radius of a regular n-gon
            let r = s.radius() * (PI / (0.5 * n as f64 * step.sin())).sqrt();
            (0..n)
                .map(|i| {
                    let a = i as f64 * step;
                    c + Vector2::new(a.cos(), a.sin()) * r
                })
                .collect()
        }
        _ => {
            let pts: Vec<Point2> = shape
                .hull_points()
                .iter()
                .map(|v| Vector2::new(e1.dot(v), e2.dot(v)))
                .collect();
            convex_hull(&pts)
        }
    };
    to_region(polygon)
}

fn to_region(polygon: Vec<Point2>) -> ShadowRegion {
    if polygon.len() < 3 || polygon_area(&polygon) <= 0.0 {
        ShadowRegion::Empty
    } else {
        ShadowRegion::Polygon(polygon)
    }
}

/// Intersection of two intervals; touching intervals count as empty.
pub fn interval_intersection(a: &ShadowRegion, b: &ShadowRegion) -> ShadowRegion {
    match (a, b) {
        (
            ShadowRegion::Interval { min: a0, max: a1 },
            ShadowRegion::Interval { min: b0, max: b1 },
        ) => {
            let lo = a0.max(*b0);
            let hi = a1.min(*b1);
            if hi <= lo {
                ShadowRegion::Empty
            } else {
                ShadowRegion::Interval { min: lo, max: hi }
            }
        }
        _ => ShadowRegion::Empty,
    }
}

/// Intersection of two convex polygons; zero-area results are empty.
pub fn convex_polygon_intersection(a: &ShadowRegion, b: &ShadowRegion) -> ShadowRegion {
    let (pa, pb) = match (a, b) {
        (ShadowRegion::Polygon(pa), ShadowRegion::Polygon(pb)) => (pa, pb),
        _ => return ShadowRegion::Empty,
    };
    let (alo, ahi) = super::bbox2(pa);
    let (blo, bhi) = super::bbox2(pb);
    if ahi.x <= blo.x || bhi.x <= alo.x || ahi.y <= blo.y || bhi.y <= alo.y {
        return ShadowRegion::Empty;
    }
    to_region(clip_convex(pa, pb))
}

/// Area of the lens formed by two discs of radii `a1`, `a2` whose centres are
/// `d` apart.
pub fn circle_intersection_area(a1: f64, a2: f64, d: f64) -> f64 {
    let (big, small) = if a1 >= a2 { (a1, a2) } else { (a2, a1) };
    if d >= big + small {
        return 0.0;
    }
    if d <= big - small {
        return PI * small * small;
    }
    let segment = |a: f64| {
        let c = ((d * d + 2.0 * a * a - a1 * a1 - a2 * a2) / (2.0 * d * a)).clamp(-1.0, 1.0);
        a * a * (c.acos() - c * (1.0 - c * c).sqrt())
    };
    segment(a1) + segment(a2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Shape3, polygon_area};
    use std::f64::consts::FRAC_PI_2;

    fn interval(min: f64, max: f64) -> ShadowRegion {
        ShadowRegion::Interval { min, max }
    }

    fn square(x: f64, y: f64) -> ShadowRegion {
        ShadowRegion::Polygon(vec![
            Vector2::new(x, y),
            Vector2::new(x + 1.0, y),
            Vector2::new(x + 1.0, y + 1.0),
            Vector2::new(x, y + 1.0),
        ])
    }

    #[test]
    fn segment_edge_on_and_broadside() {
        let seg = Shape2::segment([0.0, 0.0], [1.0, 0.0]).unwrap();
        assert_eq!(project_shape_2d(&seg, &Direction::planar(0.0)).measure(), 0.0);
        let broadside = project_shape_2d(&seg, &Direction::planar(FRAC_PI_2)).measure();
        assert!((broadside - 1.0).abs() < 1e-15);
        let diag = Shape2::segment([0.0, 0.0], [1.0, 1.0]).unwrap();
        assert!((project_shape_2d(&diag, &Direction::planar(0.0)).measure() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn disc_projects_to_diameter() {
        let disc = Shape2::disc([0.3, -0.2], 0.7).unwrap();
        for i in 0..16 {
            let s = project_shape_2d(&disc, &Direction::planar(i as f64 * 0.4));
            assert!((s.measure() - 1.4).abs() < 1e-14);
        }
    }

    #[test]
    fn interval_cases() {
        assert!((interval_intersection(&interval(0.0, 1.0), &interval(0.5, 2.0)).measure() - 0.5).abs() < 1e-15);
        assert!(interval_intersection(&interval(0.0, 1.0), &interval(1.0, 2.0)).is_empty());
        assert!((interval_intersection(&interval(0.0, 2.0), &interval(0.5, 1.0)).measure() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn square_overlaps() {
        assert!((convex_polygon_intersection(&square(0.0, 0.0), &square(0.0, 0.0)).measure() - 1.0).abs() < 1e-15);
        assert!((convex_polygon_intersection(&square(0.0, 0.0), &square(0.5, 0.5)).measure() - 0.25).abs() < 1e-15);
        assert!(convex_polygon_intersection(&square(0.0, 0.0), &square(1.0, 0.0)).is_empty());
    }

    #[test]
    fn sphere_shadow_area() {
        let s = Shape3::sphere([1.0, 2.0, 3.0], 0.5).unwrap();
        let area = project_shape_3d(&s, &Direction::spatial(0.7, 1.1)).measure();
        assert!((area - PI * 0.25).abs() < 1e-13);
        let coarse = project_shape_3d_with(&s, &Direction::spatial(0.7, 1.1), 12).measure();
        assert!((coarse - PI * 0.25).abs() < 1e-13);
    }

    #[test]
    fn plate_normal_and_edge_on() {
        let plate = Shape3::plate(&[[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [1.0, 1.0, 0.0], [0.0, 1.0, 0.0]]).unwrap();
        let normal = project_shape_3d(&plate, &Direction::spatial(0.0, 0.0));
        assert!((normal.measure() - 1.0).abs() < 1e-15);
        assert!((polygon_area(normal.vertices()) - 1.0).abs() < 1e-15);
        let edge_on = project_shape_3d(&plate, &Direction::spatial(FRAC_PI_2, 0.3));
        assert!(edge_on.measure() < 1e-15);
    }

    #[test]
    fn lens_limits() {
        assert!((circle_intersection_area(1.0, 1.0, 0.0) - PI).abs() < 1e-15);
        assert_eq!(circle_intersection_area(1.0, 0.5, 1.5), 0.0);
        assert!((circle_intersection_area(2.0, 0.5, 1.0) - PI * 0.25).abs() < 1e-15);
        // two unit discs one radius apart: 2π/3 − √3/2
        let lens = circle_intersection_area(1.0, 1.0, 1.0);
        assert!((lens - (2.0 * PI / 3.0 - 3f64.sqrt() / 2.0)).abs() < 1e-14);
    }

    #[test]
    fn lens_is_continuous_at_transitions() {
        for &(a1, a2) in &[(1.0, 0.5), (2.0, 1.5), (1.0, 1.0), (0.3, 0.9)] {
            for d0 in [f64::abs(a1 - a2), a1 + a2] {
                if d0 == 0.0 {
                    continue;
                }
                let lo = circle_intersection_area(a1, a2, d0 - 1e-9);
                let hi = circle_intersection_area(a1, a2, d0 + 1e-9);
                assert!((lo - hi).abs() < 1e-6, "a1={a1} a2={a2} d={d0}: {lo} vs {hi}");
            }
        }
    }
}

//! Total mutual shadow of a transmitter/receiver pair and the NDoF it predicts.
//!
//! For each illumination direction `k̂` both regions are projected onto the
//! line (2D) or plane (3D) orthogonal to `k̂`. The mutual shadow is the part
//! of the intersection crossed by rays that leave the transmitter and then
//! enter the receiver; rays going the other way are not counted, so each
//! shadow is integrated over one half of the directions.

mod closed_form;
mod ndof;
mod ordering;
mod surface;

use nalgebra::Vector2;

use crate::error::{Error, Result};
use crate::geometry::{
    circle_intersection_area, convex_polygon_intersection, min_distance_2d,
    min_distance_3d, project_shape_3d, union_area, union_length, Direction, Point2,
    Shape2, Shape3, ShadowRegion,
};
use crate::par;
use crate::quadrature::{DirectionQuadrature, QuadratureRule};

pub use closed_form::{paraxial_sphere_area, shadow_area_two_discs, shadow_area_two_spheres, shadow_length_two_lines};
pub use ndof::{ndof_from_shadow, reference_ndof, wavelength_for_ndof, NdofEstimate, NdofModel, ReferenceKind};
pub use surface::mesh_mutual_shadow;

use ordering::{order_2d, order_3d, Frame, Order};

#[derive(Clone, Debug, PartialEq)]
pub enum Parts {
    Planar(Vec<Shape2>),
    Spatial(Vec<Shape3>),
}

/// Transmitter or receiver support: one or more convex parts.
#[derive(Clone, Debug, PartialEq)]
pub struct Region {
    label: String,
    parts: Parts,
}

impl Region {
    pub fn planar(label: impl Into<String>, parts: Vec<Shape2>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidShape("region has no parts".into()));
        }
        Ok(Region { label: label.into(), parts: Parts::Planar(parts) })
    }

    pub fn spatial(label: impl Into<String>, parts: Vec<Shape3>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidShape("region has no parts".into()));
        }
        Ok(Region { label: label.into(), parts: Parts::Spatial(parts) })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn parts(&self) -> &Parts {
        &self.parts
    }

    pub fn dimension(&self) -> usize {
        match self.parts {
            Parts::Planar(_) => 2,
            Parts::Spatial(_) => 3,
        }
    }

    /// Smallest distance between any part of `self` and any part of `other`.
    pub fn min_distance(&self, other: &Region) -> Result<f64> {
        match (&self.parts, &other.parts) {
            (Parts::Planar(a), Parts::Planar(b)) => {
                Ok(a.iter().flat_map(|x| b.iter().map(move |y| min_distance_2d(x, y))).fold(f64::INFINITY, f64::min))
            }
            (Parts::Spatial(a), Parts::Spatial(b)) => {
                Ok(a.iter().flat_map(|x| b.iter().map(move |y| min_distance_3d(x, y))).fold(f64::INFINITY, f64::min))
            }
            _ => Err(dimension_mismatch(self, other)),
        }
    }

    /// Errors unless the two regions are at a positive distance.
    pub fn check_disjoint(&self, other: &Region) -> Result<()> {
        if self.min_distance(other)? > 0.0 {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!("regions not disjoint: {} and {}", self.label, other.label)))
        }
    }
}

fn dimension_mismatch(a: &Region, b: &Region) -> Error {
    Error::DimensionMismatch(format!(
        "region {} is {}D, region {} is {}D",
        a.label,
        a.dimension(),
        b.label,
        b.dimension()
    ))
}

/// One evaluated direction: `weight × measure` is its contribution to the total.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DirectionSample {
    pub dir: Direction,
    pub weight: f64,
    pub measure: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MutualShadowResult {
    /// `L_TR` (2D, length) or `A_TR` (3D, area).
    pub total: f64,
    pub per_direction: Vec<DirectionSample>,
    /// Rule of the quadrature the caller supplied.
    pub rule: QuadratureRule,
    pub dimension: usize,
}

impl MutualShadowResult {
    fn from_samples(samples: Vec<DirectionSample>, rule: QuadratureRule, dimension: usize) -> Self {
        let contributions: Vec<f64> = samples.iter().map(|s| s.weight * s.measure).collect();
        MutualShadowResult { total: par::ordered_sum(&contributions), per_direction: samples, rule, dimension }
    }
}

/// Value of the planar direction shadow plus a combinatorial signature that
/// changes exactly where the shadow stops being smooth in φ.
type Evaluated = (f64, Vec<i64>);

fn extremes(shape: &Shape2, p: Point2) -> (f64, f64, i64, i64) {
    let pts: Vec<Point2> = match shape {
        Shape2::Segment(s) => vec![s.start(), s.end()],
        Shape2::Polygon(poly) => poly.vertices().to_vec(),
        Shape2::Disc(d) => {
            let c = p.dot(&d.center());
            return (c - d.radius(), c + d.radius(), -1, -1);
        }
    };
    let (mut lo, mut hi, mut ilo, mut ihi) = (f64::INFINITY, f64::NEG_INFINITY, 0, 0);
    for (i, v) in pts.iter().enumerate() {
        let x = p.dot(v);
        if x < lo {
            lo = x;
            ilo = i as i64;
        }
        if x > hi {
            hi = x;
            ihi = i as i64;
        }
    }
    (lo, hi, ilo, ihi)
}

fn planar_mutual(t: &[Shape2], r: &[Shape2], phi: f64) -> Result<Evaluated> {
    let dir = Direction::planar(phi);
    let k = Vector2::new(phi.cos(), phi.sin());
    let p = dir.projection_axis();
    let tp: Vec<_> = t.iter().map(|s| extremes(s, p)).collect();
    let rp: Vec<_> = r.iter().map(|s| extremes(s, p)).collect();
    let mut sig: Vec<i64> = tp.iter().chain(&rp).flat_map(|e| [e.2, e.3]).collect();
    let mut spans = Vec::new();
    for (i, a) in tp.iter().enumerate() {
        for (j, b) in rp.iter().enumerate() {
            let lo = a.0.max(b.0);
            let hi = a.1.min(b.1);
            if hi <= lo {
                sig.push(0);
                continue;
            }
            let code = 1 + 2 * i64::from(a.0 >= b.0) + 4 * i64::from(a.1 <= b.1);
            match order_2d(&t[i], &r[j], k, p, 0.5 * (lo + hi)) {
                Order::TransmitterFirst => {
                    sig.push(code);
                    spans.push((lo, hi));
                }
                Order::ReceiverFirst => sig.push(-code),
                Order::Ambiguous => return Err(Error::OrderingUndefined { direction: dir.unit().into() }),
            }
        }
    }
    if spans.len() > 1 {
        let mut ends: Vec<(f64, usize)> =
            spans.iter().enumerate().flat_map(|(i, s)| [(s.0, 2 * i), (s.1, 2 * i + 1)]).collect();
        ends.sort_by(|a, b| a.0.total_cmp(&b.0));
        sig.extend(ends.iter().map(|e| e.1 as i64));
    }
    Ok((union_length(&mut spans), sig))
}

fn planar_far_field(t: &[Shape2], phi: f64) -> Evaluated {
    let p = Direction::planar(phi).projection_axis();
    let ext: Vec<_> = t.iter().map(|s| extremes(s, p)).collect();
    let mut sig: Vec<i64> = ext.iter().flat_map(|e| [e.2, e.3]).collect();
    let mut spans: Vec<(f64, f64)> = ext.iter().map(|e| (e.0, e.1)).collect();
    if spans.len() > 1 {
        let mut ends: Vec<(f64, usize)> =
            spans.iter().enumerate().flat_map(|(i, s)| [(s.0, 2 * i), (s.1, 2 * i + 1)]).collect();
        ends.sort_by(|a, b| a.0.total_cmp(&b.0));
        sig.extend(ends.iter().map(|e| e.1 as i64));
    }
    (union_length(&mut spans), sig)
}

const GAUSS3: [(f64, f64); 3] = [
    (-0.774_596_669_241_483_4, 5.0 / 9.0),
    (0.0, 8.0 / 9.0),
    (0.774_596_669_241_483_4, 5.0 / 9.0),
];

fn gauss_piece<F>(lo: f64, hi: f64, eval: &F, out: &mut Vec<DirectionSample>) -> Result<()>
where
    F: Fn(f64) -> Result<Evaluated>,
{
    let (mid, half) = (0.5 * (lo + hi), 0.5 * (hi - lo));
    for (x, w) in GAUSS3 {
        let phi = mid + half * x;
        out.push(DirectionSample { dir: Direction::planar(phi), weight: w * half, measure: eval(phi)?.0 });
    }
    Ok(())
}

/// Integrates one midpoint cell. The shadow is piecewise smooth in φ; every
/// breakpoint inside the cell is located by bisection on the signature and
/// each smooth piece gets a 3-point Gauss rule.
fn integrate_cell<F>(lo: f64, hi: f64, eval: &F) -> Result<Vec<DirectionSample>>
where
    F: Fn(f64) -> Result<Evaluated>,
{
    let mut out = Vec::with_capacity(3);
    let sig_hi = eval(hi)?.1;
    let (mut a, mut sig_a) = (lo, eval(lo)?.1);
    for _ in 0..64 {
        if sig_a == sig_hi {
            break;
        }
        let (mut x, mut y) = (a, hi);
        let mut sig_y = sig_hi.clone();
        while y - x > 1e-15 * (1.0 + y.abs()) {
            let m = 0.5 * (x + y);
            let s = eval(m)?.1;
            if s == sig_a {
                x = m;
            } else {
                y = m;
                sig_y = s;
            }
        }
        if x > a {
            gauss_piece(a, x, eval, &mut out)?;
        }
        a = y;
        sig_a = sig_y;
    }
    if hi > a {
        gauss_piece(a, hi, eval, &mut out)?;
    }
    Ok(out)
}

fn integrate_planar<F>(quad: &DirectionQuadrature, eval: F) -> Result<Vec<DirectionSample>>
where
    F: Fn(f64) -> Result<Evaluated> + Sync + Send,
{
    let QuadratureRule::Midpoint { phi0, phi1, n } = quad.rule() else {
        return Err(Error::DimensionMismatch("planar region needs a planar quadrature".into()));
    };
    let h = (phi1 - phi0) / n as f64;
    let cells = par::map_range(n, |i| {
        let lo = phi0 + i as f64 * h;
        let hi = if i + 1 == n { phi1 } else { phi0 + (i + 1) as f64 * h };
        integrate_cell(lo, hi, &eval)
    });
    let mut samples = Vec::with_capacity(3 * n);
    for cell in cells {
        samples.extend(cell?);
    }
    Ok(samples)
}

fn frame(dir: &Direction) -> Frame {
    let (e1, e2) = dir.projection_basis();
    Frame { k: dir.unit(), e1, e2 }
}

fn spatial_mutual(t: &[Shape3], r: &[Shape3], dir: &Direction) -> Result<f64> {
    let fr = frame(dir);
    if let ([Shape3::Sphere(a)], [Shape3::Sphere(b)]) = (t, r) {
        if fr.k.dot(&(b.center() - a.center())) <= 0.0 {
            return Ok(0.0);
        }
        let d = b.center() - a.center();
        let dist = Vector2::new(fr.e1.dot(&d), fr.e2.dot(&d)).norm();
        return Ok(circle_intersection_area(a.radius(), b.radius(), dist));
    }
    let tp: Vec<ShadowRegion> = t.iter().map(|s| project_shape_3d(s, dir)).collect();
    let rp: Vec<ShadowRegion> = r.iter().map(|s| project_shape_3d(s, dir)).collect();
    let mut pieces = Vec::new();
    for (i, a) in tp.iter().enumerate() {
        for (j, b) in rp.iter().enumerate() {
            let ShadowRegion::Polygon(poly) = convex_polygon_intersection(a, b) else {
                continue;
            };
            let uv = poly.iter().fold(Point2::zeros(), |acc, v| acc + v) / poly.len() as f64;
            match order_3d(&t[i], &r[j], &fr, uv) {
                Order::TransmitterFirst => pieces.push(poly),
                Order::ReceiverFirst => {}
                Order::Ambiguous => return Err(Error::OrderingUndefined { direction: fr.k.into() }),
            }
        }
    }
    Ok(match pieces.len() {
        0 => 0.0,
        1 => crate::geometry::polygon_area(&pieces[0]).abs(),
        _ => union_area(&pieces),
    })
}

fn spatial_far_field(t: &[Shape3], dir: &Direction) -> f64 {
    let polys: Vec<Vec<Point2>> = t
        .iter()
        .filter_map(|s| match project_shape_3d(s, dir) {
            ShadowRegion::Polygon(p) => Some(p),
            _ => None,
        })
        .collect();
    match polys.len() {
        0 => 0.0,
        1 => crate::geometry::polygon_area(&polys[0]).abs(),
        _ => union_area(&polys),
    }
}

/// Mutual shadow measure `|S_TR(k̂)|` for one direction.
pub fn mutual_shadow_direction(t: &Region, r: &Region, dir: &Direction) -> Result<f64> {
    match (&t.parts, &r.parts, dir) {
        (Parts::Planar(tp), Parts::Planar(rp), Direction::Planar { phi }) => Ok(planar_mutual(tp, rp, *phi)?.0),
        (Parts::Spatial(tp), Parts::Spatial(rp), Direction::Spatial { .. }) => spatial_mutual(tp, rp, dir),
        (Parts::Planar(_), Parts::Planar(_), _) | (Parts::Spatial(_), Parts::Spatial(_), _) => {
            Err(Error::DimensionMismatch("direction does not match the region dimension".into()))
        }
        _ => Err(dimension_mismatch(t, r)),
    }
}

/// `L_TR = ∫ |S_TR(φ)| dφ` or `A_TR = ∫ |S_TR(k̂)| dΩ` over the quadrature.
///
/// Planar quadratures are refined cell by cell at the breakpoints of the
/// shadow, so the total is accurate to roughly machine precision for
/// polygonal scenes; spatial quadratures are summed node by node.
pub fn total_mutual_shadow(t: &Region, r: &Region, quad: &DirectionQuadrature) -> Result<MutualShadowResult> {
    t.check_disjoint(r)?;
    match (&t.parts, &r.parts) {
        (Parts::Planar(tp), Parts::Planar(rp)) => {
            let samples = integrate_planar(quad, |phi| planar_mutual(tp, rp, phi))?;
            Ok(MutualShadowResult::from_samples(samples, quad.rule(), 2))
        }
        (Parts::Spatial(tp), Parts::Spatial(rp)) => {
            let nodes = spatial_nodes(quad)?;
            let values = par::map_range(nodes.len(), |i| spatial_mutual(tp, rp, &nodes[i].dir));
            let samples = collect_spatial(nodes, values)?;
            Ok(MutualShadowResult::from_samples(samples, quad.rule(), 3))
        }
        _ => Err(dimension_mismatch(t, r)),
    }
}

/// Shadow cast by `t` towards a far-field receiver occupying the directions
/// of `sector`: every ray leaving the transmitter inside the sector reaches
/// the receiver, so the mutual shadow is the transmitter's own shadow.
pub fn total_far_field_shadow(t: &Region, sector: &DirectionQuadrature) -> Result<MutualShadowResult> {
    match &t.parts {
        Parts::Planar(tp) => {
            let samples = integrate_planar(sector, |phi| Ok(planar_far_field(tp, phi)))?;
            Ok(MutualShadowResult::from_samples(samples, sector.rule(), 2))
        }
        Parts::Spatial(tp) => {
            let nodes = spatial_nodes(sector)?;
            let values = par::map_range(nodes.len(), |i| Ok(spatial_far_field(tp, &nodes[i].dir)));
            let samples = collect_spatial(nodes, values)?;
            Ok(MutualShadowResult::from_samples(samples, sector.rule(), 3))
        }
    }
}

fn spatial_nodes(quad: &DirectionQuadrature) -> Result<&[crate::quadrature::QuadNode]> {
    if quad.is_planar() {
        return Err(Error::DimensionMismatch("spatial region needs a spatial quadrature".into()));
    }
    Ok(quad.nodes())
}

fn collect_spatial(nodes: &[crate::quadrature::QuadNode], values: Vec<Result<f64>>) -> Result<Vec<DirectionSample>> {
    nodes
        .iter()
        .zip(values)
        .map(|(n, v)| Ok(DirectionSample { dir: n.dir, weight: n.weight, measure: v? }))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn lines(l1: f64, l2: f64, d: f64) -> (Region, Region) {
        let t = Region::planar("T", vec![Shape2::segment([-l1 / 2.0, 0.0], [l1 / 2.0, 0.0]).unwrap()]).unwrap();
        let r = Region::planar("R", vec![Shape2::segment([-l2 / 2.0, d], [l2 / 2.0, d]).unwrap()]).unwrap();
        (t, r)
    }

    #[test]
    fn broadside_lines_share_their_shadow() {
        let (t, r) = lines(1.0, 1.0, 1.0);
        let s = mutual_shadow_direction(&t, &r, &Direction::planar(FRAC_PI_2)).unwrap();
        assert!((s - 1.0).abs() < 1e-15);
        // receiver casting onto transmitter is not counted
        assert_eq!(mutual_shadow_direction(&t, &r, &Direction::planar(-FRAC_PI_2)).unwrap(), 0.0);
        // beyond tan φ₂ = β measured from broadside the shadows separate
        let beyond = FRAC_PI_2 - 1.0f64.atan() - 1e-3;
        assert_eq!(mutual_shadow_direction(&t, &r, &Direction::planar(beyond)).unwrap(), 0.0);
    }

    #[test]
    fn two_lines_match_closed_form() {
        let quad = DirectionQuadrature::circle(4096).unwrap();
        for (l2, d) in [(1.0, 1.0), (0.5, 5.0), (0.5, 0.1)] {
            let (t, r) = lines(1.0, l2, d);
            let res = total_mutual_shadow(&t, &r, &quad).unwrap();
            let exact = shadow_length_two_lines(1.0, l2, d);
            assert!((res.total / exact - 1.0).abs() < 1e-9, "l2 = {l2}, d = {d}: {} vs {exact}", res.total);
            let sum: f64 = res.per_direction.iter().map(|s| s.weight * s.measure).sum();
            assert!((sum - res.total).abs() <= 1e-12 * res.total);
        }
    }

    #[test]
    fn circle_far_field_shadow_is_four_pi_a() {
        let t = Region::planar("T", vec![Shape2::disc([0.2, 0.1], 0.7).unwrap()]).unwrap();
        let res = total_far_field_shadow(&t, &DirectionQuadrature::circle(64).unwrap()).unwrap();
        assert!((res.total - 4.0 * PI * 0.7).abs() < 1e-12);
        let quarter = total_far_field_shadow(&t, &DirectionQuadrature::arc(0.0, FRAC_PI_2, 16).unwrap()).unwrap();
        assert!((quarter.total - PI * 0.7).abs() < 1e-12);
    }

    #[test]
    fn sphere_pair_inside_small_angle_is_smaller_disc() {
        let t = Region::spatial("T", vec![Shape3::sphere([0.0; 3], 1.0).unwrap()]).unwrap();
        let r = Region::spatial("R", vec![Shape3::sphere([0.0, 0.0, 5.0], 0.5).unwrap()]).unwrap();
        let s = mutual_shadow_direction(&t, &r, &Direction::spatial(0.05, 1.0)).unwrap();
        assert!((s - PI * 0.25).abs() < 1e-14);
        assert_eq!(mutual_shadow_direction(&t, &r, &Direction::spatial(PI - 0.05, 1.0)).unwrap(), 0.0);
    }

    #[test]
    fn receiver_enclosed_by_transmitter_surface_is_rejected() {
        let shell = crate::geometry::mesh::icosphere(nalgebra::Vector3::zeros(), 2.0, 1);
        let t = Region::spatial("T", vec![Shape3::Mesh(shell)]).unwrap();
        let r = Region::spatial("R", vec![Shape3::sphere([0.0, 0.0, 0.0], 0.3).unwrap()]).unwrap();
        let err = mutual_shadow_direction(&t, &r, &Direction::spatial(0.3, 0.2));
        assert!(matches!(err, Err(Error::OrderingUndefined { .. })));
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let (t, _) = lines(1.0, 1.0, 1.0);
        let r = Region::spatial("R", vec![Shape3::sphere([0.0; 3], 1.0).unwrap()]).unwrap();
        assert!(matches!(
            total_mutual_shadow(&t, &r, &DirectionQuadrature::circle(8).unwrap()),
            Err(Error::DimensionMismatch(_))
        ));
        let (t, r) = lines(1.0, 1.0, 1.0);
        assert!(total_mutual_shadow(&t, &r, &DirectionQuadrature::sphere(4, 4).unwrap()).is_err());
    }
}

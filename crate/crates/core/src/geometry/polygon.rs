//! Planar polygon primitives used for 3D shadows.

use super::{cross2, Point2};

/// Signed shoelace area (positive for counter-clockwise vertices).
pub fn polygon_area(vertices: &[Point2]) -> f64 {
    let n = vertices.len();
    if n < 3 {
        return 0.0;
    }
    let mut twice = 0.0;
    for i in 0..n {
        let a = vertices[i];
        let b = vertices[(i + 1) % n];
        twice += a.x * b.y - a.y * b.x;
    }
    twice / 2.0
}

/// Convex hull by Andrew's monotone chain, counter-clockwise, collinear
/// points dropped. Fewer than three points come back for degenerate input.
pub fn convex_hull(points: &[Point2]) -> Vec<Point2> {
    let mut pts: Vec<Point2> = points.to_vec();
    pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut hull: Vec<Point2> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &Point2>> =
            if pass == 0 { Box::new(pts.iter()) } else { Box::new(pts.iter().rev()) };
        for p in iter {
            while hull.len() >= start + 2 {
                let a = hull[hull.len() - 2];
                let b = hull[hull.len() - 1];
                if cross2(&(b - a), &(p - a)) <= 0.0 {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push(*p);
        }
        hull.pop();
    }
    hull
}

/// Inclusive point-in-polygon test for a counter-clockwise convex polygon.
pub fn point_in_convex(p: &Point2, poly: &[Point2]) -> bool {
    let n = poly.len();
    if n < 3 {
        return false;
    }
    (0..n).all(|i| {
        let a = poly[i];
        let b = poly[(i + 1) % n];
        cross2(&(b - a), &(p - a)) >= 0.0
    })
}

/// Sutherland–Hodgman clipping of a convex `subject` by a convex `clip`
/// polygon, both counter-clockwise.
pub(crate) fn clip_convex(subject: &[Point2], clip: &[Point2]) -> Vec<Point2> {
    let mut output: Vec<Point2> = subject.to_vec();
    let m = clip.len();
    for i in 0..m {
        if output.is_empty() {
            break;
        }
        let a = clip[i];
        let b = clip[(i + 1) % m];
        let edge = b - a;
        let input = std::mem::take(&mut output);
        let side = |p: &Point2| cross2(&edge, &(p - a));
        let n = input.len();
        for j in 0..n {
            let cur = input[j];
            let prev = input[(j + n - 1) % n];
            let (sc, sp) = (side(&cur), side(&prev));
            if sc >= 0.0 {
                if sp < 0.0 {
                    output.push(prev + (cur - prev) * (sp / (sp - sc)));
                }
                output.push(cur);
            } else if sp >= 0.0 {
                output.push(prev + (cur - prev) * (sp / (sp - sc)));
            }
        }
    }
    output
}

/// Area of the union of convex polygons.
///
/// Up to eight polygons use inclusion–exclusion over all subset
/// intersections; larger sets use an exact vertical-slab sweep.
pub fn union_area(polygons: &[Vec<Point2>]) -> f64 {
    let polys: Vec<&Vec<Point2>> = polygons.iter().filter(|p| p.len() >= 3).collect();
    match polys.len() {
        0 => 0.0,
        1 => polygon_area(polys[0]).abs(),
        n if n <= 8 => inclusion_exclusion(&polys),
        _ => slab_union_area(&polys),
    }
}

fn inclusion_exclusion(polys: &[&Vec<Point2>]) -> f64 {
    fn recurse(polys: &[&Vec<Point2>], start: usize, current: &[Point2], depth: usize, acc: &mut f64) {
        for i in start..polys.len() {
            let next = if depth == 0 { polys[i].clone() } else { clip_convex(current, polys[i]) };
            let area = polygon_area(&next);
            if next.len() < 3 || area <= 0.0 {
                continue;
            }
            if depth % 2 == 0 {
                *acc += area;
            } else {
                *acc -= area;
            }
            recurse(polys, i + 1, &next, depth + 1, acc);
        }
    }
    let mut acc = 0.0;
    recurse(polys, 0, &[], 0, &mut acc);
    acc
}

/// Vertical extent of a convex polygon at abscissa `x`.
fn vertical_extent(poly: &[Point2], x: f64) -> Option<(f64, f64)> {
    let n = poly.len();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let a = poly[i];
        let b = poly[(i + 1) % n];
        let (x0, x1) = (a.x.min(b.x), a.x.max(b.x));
        if x < x0 || x > x1 || x0 == x1 {
            continue;
        }
        let t = (x - a.x) / (b.x - a.x);
        let y = a.y + t * (b.y - a.y);
        lo = lo.min(y);
        hi = hi.max(y);
    }
    (hi > lo).then_some((lo, hi))
}

fn segment_crossing_x(p0: Point2, p1: Point2, q0: Point2, q1: Point2) -> Option<f64> {
    let r = p1 - p0;
    let s = q1 - q0;
    let denom = cross2(&r, &s);
    if denom == 0.0 {
        return None;
    }
    let t = cross2(&(q0 - p0), &s) / denom;
    let u = cross2(&(q0 - p0), &r) / denom;
    ((0.0..=1.0).contains(&t) && (0.0..=1.0).contains(&u)).then(|| p0.x + t * r.x)
}

/// Within a slab bounded by consecutive vertex and edge-crossing abscissae
/// the union length is linear in x, so the midpoint rule is exact.
fn slab_union_area(polys: &[&Vec<Point2>]) -> f64 {
    let mut xs: Vec<f64> = polys.iter().flat_map(|p| p.iter().map(|v| v.x)).collect();
    for (i, a) in polys.iter().enumerate() {
        for b in &polys[i + 1..] {
            for ea in 0..a.len() {
                for eb in 0..b.len() {
                    if let Some(x) = segment_crossing_x(
                        a[ea],
                        a[(ea + 1) % a.len()],
                        b[eb],
                        b[(eb + 1) % b.len()],
                    ) {
                        xs.push(x);
                    }
                }
            }
        }
    }
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    let mut area = 0.0;
    let mut spans: Vec<(f64, f64)> = Vec::with_capacity(polys.len());
    for w in xs.windows(2) {
        let width = w[1] - w[0];
        if width <= 0.0 {
            continue;
        }
        let xm = 0.5 * (w[0] + w[1]);
        spans.clear();
        spans.extend(polys.iter().filter_map(|p| vertical_extent(p, xm)));
        area += union_length(&mut spans) * width;
    }
    area
}

pub(crate) fn union_length(spans: &mut [(f64, f64)]) -> f64 {
    spans.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut total = 0.0;
    let mut current: Option<(f64, f64)> = None;
    for &(lo, hi) in spans.iter() {
        match current {
            Some((clo, chi)) if lo <= chi => current = Some((clo, chi.max(hi))),
            Some((clo, chi)) => {
                total += chi - clo;
                current = Some((lo, hi));
            }
            None => current = Some((lo, hi)),
        }
    }
    if let Some((lo, hi)) = current {
        total += hi - lo;
    }
    total
}

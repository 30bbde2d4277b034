//! Closed-form mutual shadows of canonical pairs.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geometry::circle_intersection_area;
use crate::quadrature::gauss_legendre;

/// Total mutual shadow length of two parallel, centred lines of lengths
/// `l1`, `l2` at distance `d`: `2d(√(1+β²) − √(1+δ²))`.
pub fn shadow_length_two_lines(l1: f64, l2: f64, d: f64) -> f64 {
    let beta = (l1 + l2) / (2.0 * d);
    let delta = (l1 - l2).abs() / (2.0 * d);
    // √(1+β²) − √(1+δ²) = (β² − δ²)/(√(1+β²) + √(1+δ²)) avoids cancellation
    // at large d; β² − δ² = l1·l2/d².
    2.0 * d * (l1 * l2 / (d * d)) / ((1.0 + beta * beta).sqrt() + (1.0 + delta * delta).sqrt())
}

/// Total mutual shadow area of two coaxial parallel discs of radius `a` at
/// distance `d`: `(π²/4)(√(4a²+d²) − d)²`.
pub fn shadow_area_two_discs(a: f64, d: f64) -> f64 {
    // √(4a²+d²) − d = 4a²/(√(4a²+d²) + d)
    let gap = 4.0 * a * a / ((4.0 * a * a + d * d).sqrt() + d);
    PI * PI / 4.0 * gap * gap
}

/// Paraxial mutual shadow area of two spheres, `π²a₁²a₂²/h²`.
pub fn paraxial_sphere_area(a1: f64, a2: f64, h: f64) -> f64 {
    PI * PI * a1 * a1 * a2 * a2 / (h * h)
}

/// Total mutual shadow area of two spheres with radii `a1`, `a2` whose
/// centres are `h` apart.
///
/// Directions within `θ₁` of the centre line (`sin θ₁ = |a₁ − a₂|/h`) see the
/// smaller shadow inside the larger; between `θ₁` and `θ₂`
/// (`sin θ₂ = (a₁ + a₂)/h`) the lens area is integrated with `n_theta`
/// Gauss–Legendre nodes.
pub fn shadow_area_two_spheres(a1: f64, a2: f64, h: f64, n_theta: usize) -> Result<f64> {
    if !(a1 > 0.0 && a2 > 0.0) || n_theta == 0 {
        return Err(Error::InvalidArgument("sphere radii must be positive and n_theta ≥ 1".into()));
    }
    if h <= a1 + a2 {
        return Err(Error::SpheresOverlap { h, sum: a1 + a2 });
    }
    let small = a1.min(a2);
    let theta1 = ((a1 - a2).abs() / h).asin();
    let theta2 = ((a1 + a2) / h).asin();
    let contained = 2.0 * PI * PI * small * small * (1.0 - theta1.cos());
    let (x, w) = gauss_legendre(n_theta);
    let (mid, half) = (0.5 * (theta1 + theta2), 0.5 * (theta2 - theta1));
    let lens: f64 = x
        .iter()
        .zip(&w)
        .map(|(xi, wi)| {
            let theta = mid + half * xi;
            wi * circle_intersection_area(a1, a2, h * theta.sin()) * theta.sin()
        })
        .sum();
    Ok(contained + 2.0 * PI * half * lens)
}

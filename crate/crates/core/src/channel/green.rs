use std::f64::consts::PI;

use nalgebra::Matrix3;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::{Point2, Point3};
use crate::special::hankel2_0;

/// Smallest `kR` accepted by the dyadic kernel.
pub const NEAR_FIELD_CUTOFF: f64 = 1e-3;

/// 2D free-space Green's function `(j/4) H₀⁽²⁾(kR)` for the `e^{−jkR}` convention.
pub fn green_2d(r: &Point2, rp: &Point2, k: f64) -> Result<Complex64> {
    let dist = (r - rp).norm();
    if dist == 0.0 {
        return Err(Error::CoincidentPoints);
    }
    Ok(g2(k * dist))
}

/// 3D free-space Green's function `e^{−jkR}/(4πR)`.
pub fn green_3d(r: &Point3, rp: &Point3, k: f64) -> Result<Complex64> {
    let dist = (r - rp).norm();
    if dist == 0.0 {
        return Err(Error::CoincidentPoints);
    }
    Ok(g3(k, dist))
}

/// Dyadic Green's function `(I + k⁻²∇∇) G₃`.
pub fn green_dyadic_3d(r: &Point3, rp: &Point3, k: f64) -> Result<Matrix3<Complex64>> {
    let d = r - rp;
    let dist = d.norm();
    if dist == 0.0 {
        return Err(Error::CoincidentPoints);
    }
    if k * dist <= NEAR_FIELD_CUTOFF {
        return Err(Error::NearFieldCutoff { kr: k * dist });
    }
    Ok(dyadic(k, &d))
}

#[inline]
pub(crate) fn g2(kr: f64) -> Complex64 {
    Complex64::new(0.0, 0.25) * hankel2_0(kr)
}

#[inline]
pub(crate) fn g3(k: f64, dist: f64) -> Complex64 {
    let (s, c) = (k * dist).sin_cos();
    Complex64::new(c, -s) / (4.0 * PI * dist)
}

/// `g [(1 − j/x − 1/x²) I − (1 − 3j/x − 3/x²) R̂R̂]` with `x = kR`.
pub(crate) fn dyadic(k: f64, d: &Point3) -> Matrix3<Complex64> {
    let dist = d.norm();
    let x = k * dist;
    let g = g3(k, dist);
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let a = g * Complex64::new(1.0 - inv2, -inv);
    let b = g * Complex64::new(1.0 - 3.0 * inv2, -3.0 * inv);
    let u = d / dist;
    Matrix3::from_fn(|i, j| {
        let diag = if i == j { a } else { Complex64::new(0.0, 0.0) };
        diag - b * (u[i] * u[j])
    })
}

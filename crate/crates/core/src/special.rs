//! Bessel functions of order zero and the outgoing Hankel function.
//!
//! Ascending power series up to `x = 12`, Hankel's asymptotic expansion
//! beyond. Both branches are accurate to about 1e-12 absolute.

use std::f64::consts::{FRAC_PI_4, PI};

use num_complex::Complex64;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const SERIES_LIMIT: f64 = 12.0;

/// (J₀(x), Y₀(x)) by the ascending series.
fn series(x: f64) -> (f64, f64) {
    let q = 0.25 * x * x;
    let mut term = 1.0;
    let mut harmonic = 0.0;
    let (mut j0, mut s) = (1.0, 0.0);
    for k in 1..200 {
        let kf = k as f64;
        term *= -q / (kf * kf);
        harmonic += 1.0 / kf;
        j0 += term;
        s -= harmonic * term;
        if term.abs() < 1e-18 * j0.abs().max(1e-300) && kf > q.sqrt() {
            break;
        }
    }
    let y0 = 2.0 / PI * (((0.5 * x).ln() + EULER_GAMMA) * j0 + s);
    (j0, y0)
}

/// (J₀(x), Y₀(x)) by Hankel's asymptotic expansion, summed to its smallest term.
fn asymptotic(x: f64) -> (f64, f64) {
    let (mut p, mut q) = (1.0, 0.0);
    let mut a = 1.0;
    let mut xk = 1.0;
    let mut last = f64::INFINITY;
    for k in 1..200 {
        let kf = k as f64;
        a *= -(2.0 * kf - 1.0).powi(2) / (8.0 * kf);
        xk *= x;
        let t = a / xk;
        if t.abs() >= last {
            break;
        }
        last = t.abs();
        // a_k / x^k enters P for even k and Q for odd k, with sign (−1)^⌊k/2⌋.
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            p += sign * t;
        } else {
            q += sign * t;
        }
        if last < 1e-17 {
            break;
        }
    }
    let (s, c) = (x - FRAC_PI_4).sin_cos();
    let amp = (2.0 / (PI * x)).sqrt();
    (amp * (p * c - q * s), amp * (p * s + q * c))
}

/// J₀(x) for x ≥ 0.
pub fn bessel_j0(x: f64) -> f64 {
    bessel_j0_y0(x).0
}

/// Y₀(x) for x > 0.
pub fn bessel_y0(x: f64) -> f64 {
    bessel_j0_y0(x).1
}

/// Both J₀(x) and Y₀(x); x must be positive.
pub fn bessel_j0_y0(x: f64) -> (f64, f64) {
    debug_assert!(x > 0.0);
    if x <= SERIES_LIMIT {
        series(x)
    } else {
        asymptotic(x)
    }
}

/// H₀⁽²⁾(x) = J₀(x) − j Y₀(x).
pub fn hankel2_0(x: f64) -> Complex64 {
    let (j0, y0) = bessel_j0_y0(x);
    Complex64::new(j0, -y0)
}

//! Direction quadratures over circle arcs and sphere sectors.
//!
//! All weights are positive. Circles use the composite midpoint rule in φ;
//! spheres use Gauss–Legendre in cos θ times the midpoint rule in φ.

use std::f64::consts::{PI, TAU};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::Direction;

/// Gauss–Legendre nodes and weights on `[-1, 1]`, nodes ascending.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    if n == 1 {
        return (vec![0.0], vec![2.0]);
    }
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = (n + 1) / 2;
    for i in 0..m {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadNode {
    pub dir: Direction,
    pub weight: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum QuadratureRule {
    /// Midpoint rule on `[phi0, phi1)`.
    Midpoint { phi0: f64, phi1: f64, n: usize },
    /// Gauss–Legendre in cos θ on `[theta0, theta1]`, midpoint in φ on `[phi0, phi1)`.
    GaussLegendreMidpoint { theta0: f64, theta1: f64, phi0: f64, phi1: f64, n_theta: usize, n_phi: usize },
}

#[derive(Clone, Debug, PartialEq)]
pub struct DirectionQuadrature {
    nodes: Vec<QuadNode>,
    rule: QuadratureRule,
}

impl DirectionQuadrature {
    /// Full circle, `n` midpoint nodes.
    pub fn circle(n: usize) -> Result<Self> {
        Self::arc(0.0, TAU, n)
    }

    /// Arc `φ ∈ [phi0, phi1)` with `n` midpoint nodes.
    pub fn arc(phi0: f64, phi1: f64, n: usize) -> Result<Self> {
        let span = phi1 - phi0;
        if n == 0 || !(span > 0.0) || span > TAU + 1e-12 {
            return Err(Error::InvalidArgument(format!("bad arc [{phi0}, {phi1}) with {n} nodes")));
        }
        let h = span / n as f64;
        let nodes = (0..n)
            .map(|i| QuadNode { dir: Direction::planar(phi0 + (i as f64 + 0.5) * h), weight: h })
            .collect();
        Ok(DirectionQuadrature { nodes, rule: QuadratureRule::Midpoint { phi0, phi1, n } })
    }

    /// Full sphere.
    pub fn sphere(n_theta: usize, n_phi: usize) -> Result<Self> {
        Self::sphere_sector(0.0, PI, 0.0, TAU, n_theta, n_phi)
    }

    /// Sector `θ ∈ [theta0, theta1]`, `φ ∈ [phi0, phi1)`.
    pub fn sphere_sector(
        theta0: f64,
        theta1: f64,
        phi0: f64,
        phi1: f64,
        n_theta: usize,
        n_phi: usize,
    ) -> Result<Self> {
        let span = phi1 - phi0;
        if n_theta == 0
            || n_phi == 0
            || !(theta0 >= 0.0 && theta1 <= PI && theta1 > theta0)
            || !(span > 0.0)
            || span > TAU + 1e-12
        {
            return Err(Error::InvalidArgument(format!(
                "bad sphere sector θ ∈ [{theta0}, {theta1}], φ ∈ [{phi0}, {phi1}) with {n_theta}×{n_phi} nodes"
            )));
        }
        let (x, w) = gauss_legendre(n_theta);
        // u = cos θ runs over [cos theta1, cos theta0].
        let (u0, u1) = (theta1.cos(), theta0.cos());
        let (mid, half) = ((u1 + u0) / 2.0, (u1 - u0) / 2.0);
        let h = span / n_phi as f64;
        let mut nodes = Vec::with_capacity(n_theta * n_phi);
        for (xi, wi) in x.iter().zip(&w) {
            let theta = (mid + half * xi).clamp(-1.0, 1.0).acos();
            for j in 0..n_phi {
                nodes.push(QuadNode {
                    dir: Direction::spatial(theta, phi0 + (j as f64 + 0.5) * h),
                    weight: wi * half * h,
                });
            }
        }
        let rule = QuadratureRule::GaussLegendreMidpoint { theta0, theta1, phi0, phi1, n_theta, n_phi };
        Ok(DirectionQuadrature { nodes, rule })
    }

    pub fn nodes(&self) -> &[QuadNode] {
        &self.nodes
    }

    pub fn rule(&self) -> QuadratureRule {
        self.rule
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn is_planar(&self) -> bool {
        matches!(self.rule, QuadratureRule::Midpoint { .. })
    }

    /// Angular measure covered (sum of weights).
    pub fn total_weight(&self) -> f64 {
        self.nodes.iter().map(|n| n.weight).sum()
    }

    /// Whether `dir` falls inside the covered arc or sector (boundaries inclusive).
    pub fn covers(&self, dir: &Direction) -> bool {
        let in_arc = |phi: f64, phi0: f64, phi1: f64| {
            if phi1 - phi0 >= TAU - 1e-12 {
                return true;
            }
            let rel = (phi - phi0).rem_euclid(TAU);
            rel <= phi1 - phi0 + 1e-12 || rel >= TAU - 1e-12
        };
        match (self.rule, *dir) {
            (QuadratureRule::Midpoint { phi0, phi1, .. }, Direction::Planar { phi }) => in_arc(phi, phi0, phi1),
            (QuadratureRule::GaussLegendreMidpoint { theta0, theta1, phi0, phi1, .. }, Direction::Spatial { theta, phi }) => {
                theta >= theta0 - 1e-12
                    && theta <= theta1 + 1e-12
                    && (theta < 1e-12 || theta > PI - 1e-12 || in_arc(phi, phi0, phi1))
            }
            _ => false,
        }
    }
}

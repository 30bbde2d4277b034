//! Scenario files.
//!
//! A scenario is a TOML document: top-level keys for the wavelength (or the
//! target NDoF) and sampling, a `[transmitter]` and a `[receiver]` table with
//! `[[...parts]]` arrays, and optional `[quadrature]`, `[spectrum]` and
//! `[capacity]` tables. The README lists every key.

use std::f64::consts::{PI, TAU};
use std::path::Path;

use ndof::channel::KernelKind;
use ndof::geometry::{mesh, Point3, Shape2, Shape3};
use ndof::quadrature::DirectionQuadrature;
use ndof::shadow::{NdofModel, Region};
use ndof::spectra::DEFAULT_DENSE_CAP;
use ndof::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub name: String,
    pub dimension: usize,
    pub wavelength: Option<f64>,
    pub n_a: Option<f64>,
    /// Sample spacing is `λ / sampling_factor`.
    #[serde(default = "default_sampling")]
    pub sampling_factor: f64,
    pub kernel: Option<KernelKind>,
    pub ndof_model: Option<NdofModel>,
    pub transmitter: RegionConfig,
    pub receiver: ReceiverConfig,
    #[serde(default)]
    pub quadrature: QuadratureConfig,
    #[serde(default)]
    pub spectrum: SpectrumConfig,
    #[serde(default)]
    pub capacity: CapacityConfig,
}

fn default_sampling() -> f64 {
    5.0
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegionConfig {
    pub label: Option<String>,
    pub parts: Vec<PartConfig>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReceiverConfig {
    pub label: Option<String>,
    #[serde(default)]
    pub parts: Vec<PartConfig>,
    pub far_field: Option<FarFieldConfig>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum PartConfig {
    Segment { start: [f64; 2], end: [f64; 2] },
    Polygon { vertices: Vec<[f64; 2]> },
    Rectangle { min: [f64; 2], max: [f64; 2] },
    Disc { center: [f64; 2], radius: f64 },
    Sphere { center: [f64; 3], radius: f64 },
    Plate { vertices: Vec<[f64; 3]> },
    MeshRectangle { origin: [f64; 3], u: [f64; 3], v: [f64; 3], nu: usize, nv: usize },
    MeshDisc { center: [f64; 3], normal: [f64; 3], radius: f64, h: f64 },
    Icosphere { center: [f64; 3], radius: f64, subdivisions: usize },
}

/// Far-field receiver: a sector of directions with its own quadrature.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FarFieldConfig {
    #[serde(default = "full_phi")]
    pub phi: [f64; 2],
    #[serde(default = "full_theta")]
    pub theta: [f64; 2],
    #[serde(default = "default_ports_2d")]
    pub n: usize,
    #[serde(default = "default_ports_theta")]
    pub n_theta: usize,
    #[serde(default = "default_ports_phi")]
    pub n_phi: usize,
    #[serde(default)]
    pub polarized: bool,
}

fn full_phi() -> [f64; 2] {
    [0.0, TAU]
}
fn full_theta() -> [f64; 2] {
    [0.0, PI]
}
fn default_ports_2d() -> usize {
    512
}
fn default_ports_theta() -> usize {
    32
}
fn default_ports_phi() -> usize {
    64
}

/// Directions for the mutual shadow between two regions.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadratureConfig {
    #[serde(default = "default_n")]
    pub n: usize,
    #[serde(default = "default_n_theta")]
    pub n_theta: usize,
    #[serde(default = "default_n_phi")]
    pub n_phi: usize,
}

fn default_n() -> usize {
    4096
}
fn default_n_theta() -> usize {
    128
}
fn default_n_phi() -> usize {
    256
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig { n: default_n(), n_theta: default_n_theta(), n_phi: default_n_phi() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum MethodKind {
    Dense,
    Randomized,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumConfig {
    #[serde(default = "default_method")]
    pub method: MethodKind,
    /// Sketch size `P = ⌈p_factor · N_a⌉`.
    #[serde(default = "default_p_factor")]
    pub p_factor: f64,
    #[serde(default = "default_power_iters")]
    pub power_iters: usize,
    pub seed: Option<u64>,
    #[serde(default = "default_cap")]
    pub dense_cap: usize,
}

fn default_method() -> MethodKind {
    MethodKind::Dense
}
fn default_p_factor() -> f64 {
    3.0
}
fn default_power_iters() -> usize {
    1
}
fn default_cap() -> usize {
    DEFAULT_DENSE_CAP
}

impl Default for SpectrumConfig {
    fn default() -> Self {
        SpectrumConfig {
            method: default_method(),
            p_factor: default_p_factor(),
            power_iters: default_power_iters(),
            seed: None,
            dense_cap: default_cap(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CapacityConfig {
    #[serde(default = "default_gammas")]
    pub gammas: Vec<f64>,
    /// `R_x = rho · I`.
    #[serde(default = "default_rho")]
    pub rho: f64,
}

fn default_gammas() -> Vec<f64> {
    vec![0.1, 1.0, 10.0, 100.0]
}
fn default_rho() -> f64 {
    1.0
}

impl Default for CapacityConfig {
    fn default() -> Self {
        CapacityConfig { gammas: default_gammas(), rho: default_rho() }
    }
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}

impl ScenarioConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: ScenarioConfig = toml::from_str(text).map_err(|e| invalid(format!("scenario: {e}")))?;
        cfg.check()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_toml(&text)
    }

    /// Structural checks that need no geometry computation.
    pub fn check(&self) -> Result<()> {
        if self.dimension != 2 && self.dimension != 3 {
            return Err(invalid(format!("dimension must be 2 or 3, got {}", self.dimension)));
        }
        match (self.wavelength, self.n_a) {
            (Some(l), None) if l > 0.0 && l.is_finite() => {}
            (None, Some(n)) if n > 0.0 && n.is_finite() => {}
            (Some(_), Some(_)) | (None, None) => return Err(invalid("give exactly one of wavelength and n_a")),
            _ => return Err(invalid("wavelength and n_a must be positive")),
        }
        if !(self.sampling_factor > 0.0) {
            return Err(invalid("sampling_factor must be positive"));
        }
        let far = self.receiver.far_field.is_some();
        if far == !self.receiver.parts.is_empty() {
            return Err(invalid("receiver needs either parts or a far_field table, not both"));
        }
        let kind = self.kernel();
        if kind.dimension() != self.dimension {
            return Err(invalid(format!("kernel {kind:?} does not match dimension {}", self.dimension)));
        }
        if kind.is_far_field() != far {
            return Err(invalid(format!("kernel {kind:?} does not match the receiver type")));
        }
        if self.ndof_model().dimension() != self.dimension {
            return Err(invalid("ndof_model does not match dimension"));
        }
        if !(self.spectrum.p_factor > 0.0) {
            return Err(invalid("spectrum.p_factor must be positive"));
        }
        if self.capacity.gammas.iter().any(|g| !(*g > 0.0)) || !(self.capacity.rho > 0.0) {
            return Err(invalid("capacity gammas and rho must be positive"));
        }
        Ok(())
    }

    pub fn kernel(&self) -> KernelKind {
        self.kernel.unwrap_or(match (self.dimension, self.receiver.far_field.is_some()) {
            (2, false) => KernelKind::Scalar2d,
            (2, true) => KernelKind::FarField2d,
            (_, false) => KernelKind::Scalar3d,
            (_, true) => KernelKind::FarField3d,
        })
    }

    pub fn ndof_model(&self) -> NdofModel {
        self.ndof_model.unwrap_or_else(|| {
            let vector = self.kernel() == KernelKind::Dyadic3d
                || self.receiver.far_field.as_ref().is_some_and(|f| f.polarized);
            match (self.dimension, vector) {
                (2, _) => NdofModel::Scalar2d,
                (_, true) => NdofModel::Em3d,
                (_, false) => NdofModel::Scalar3d,
            }
        })
    }

    pub fn transmitter_region(&self) -> Result<Region> {
        build_region(self.transmitter.label.as_deref().unwrap_or("transmitter"), &self.transmitter.parts, self.dimension)
    }

    /// `None` for a far-field receiver.
    pub fn receiver_region(&self) -> Result<Option<Region>> {
        if self.receiver.far_field.is_some() {
            return Ok(None);
        }
        build_region(self.receiver.label.as_deref().unwrap_or("receiver"), &self.receiver.parts, self.dimension).map(Some)
    }

    /// Directions integrated for the shadow: the port sector for a far-field
    /// receiver, the full circle or sphere otherwise.
    pub fn shadow_quadrature(&self) -> Result<DirectionQuadrature> {
        match &self.receiver.far_field {
            Some(ff) => self.port_quadrature(ff),
            None if self.dimension == 2 => DirectionQuadrature::circle(self.quadrature.n),
            None => DirectionQuadrature::sphere(self.quadrature.n_theta, self.quadrature.n_phi),
        }
    }

    pub fn port_quadrature(&self, ff: &FarFieldConfig) -> Result<DirectionQuadrature> {
        if self.dimension == 2 {
            DirectionQuadrature::arc(ff.phi[0], ff.phi[1], ff.n)
        } else {
            DirectionQuadrature::sphere_sector(ff.theta[0], ff.theta[1], ff.phi[0], ff.phi[1], ff.n_theta, ff.n_phi)
        }
    }
}

fn build_region(label: &str, parts: &[PartConfig], dimension: usize) -> Result<Region> {
    if parts.is_empty() {
        return Err(invalid(format!("region {label} has no parts")));
    }
    if dimension == 2 {
        let shapes = parts.iter().map(to_shape2).collect::<Result<Vec<_>>>()?;
        Region::planar(label, shapes)
    } else {
        let shapes = parts.iter().map(to_shape3).collect::<Result<Vec<_>>>()?;
        Region::spatial(label, shapes)
    }
}

fn to_shape2(part: &PartConfig) -> Result<Shape2> {
    match part {
        PartConfig::Segment { start, end } => Shape2::segment(*start, *end),
        PartConfig::Polygon { vertices } => Shape2::polygon(vertices),
        PartConfig::Rectangle { min, max } => {
            Shape2::polygon(&[[min[0], min[1]], [max[0], min[1]], [max[0], max[1]], [min[0], max[1]]])
        }
        PartConfig::Disc { center, radius } => Shape2::disc(*center, *radius),
        other => Err(invalid(format!("{other:?} is not a planar part"))),
    }
}

fn to_shape3(part: &PartConfig) -> Result<Shape3> {
    let v = |a: &[f64; 3]| Point3::new(a[0], a[1], a[2]);
    match part {
        PartConfig::Sphere { center, radius } => Shape3::sphere(*center, *radius),
        PartConfig::Plate { vertices } => Shape3::plate(vertices),
        PartConfig::MeshRectangle { origin, u, v: w, nu, nv } => {
            if v(u).cross(&v(w)).norm() == 0.0 || *nu == 0 || *nv == 0 {
                return Err(invalid("mesh_rectangle needs independent edges and positive counts"));
            }
            Ok(Shape3::Mesh(mesh::rectangle(v(origin), v(u), v(w), *nu, *nv)))
        }
        PartConfig::MeshDisc { center, normal, radius, h } => {
            if !(*radius > 0.0 && *h > 0.0 && v(normal).norm() > 0.0) {
                return Err(invalid("mesh_disc needs a positive radius, element size and a nonzero normal"));
            }
            Ok(Shape3::Mesh(mesh::disc(v(center), v(normal), *radius, *h)))
        }
        PartConfig::Icosphere { center, radius, subdivisions } => {
            if !(*radius > 0.0) || *subdivisions > 7 {
                return Err(invalid("icosphere needs a positive radius and at most 7 subdivisions"));
            }
            Ok(Shape3::Mesh(mesh::icosphere(v(center), *radius, *subdivisions)))
        }
        other => Err(invalid(format!("{other:?} is not a spatial part"))),
    }
}

use std::ops::Range;

use faer::linalg::matmul::matmul;
use faer::{c64, Accum, Mat, MatRef, Par};
use serde::{Deserialize, Serialize};

use super::green::{dyadic, g2, g3, NEAR_FIELD_CUTOFF};
use super::sampling::{min_point_distance, SampleSet};
use crate::error::{Error, Result};
use crate::geometry::{Direction, Point3};
use crate::par;
use crate::quadrature::DirectionQuadrature;

const ROW_BLOCK: usize = 64;
const COL_BLOCK: usize = 512;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelKind {
    Scalar2d,
    Scalar3d,
    Dyadic3d,
    FarField2d,
    FarField3d,
}

impl KernelKind {
    pub fn dimension(self) -> usize {
        match self {
            KernelKind::Scalar2d | KernelKind::FarField2d => 2,
            _ => 3,
        }
    }

    pub fn is_far_field(self) -> bool {
        matches!(self, KernelKind::FarField2d | KernelKind::FarField3d)
    }
}

/// Far-field receiver: a direction, its quadrature weight `Λ²` and, for
/// vector sources, the polarization the row responds to.
#[derive(Clone, Debug, PartialEq)]
pub struct FarFieldPort {
    direction: Direction,
    polarization: Option<Point3>,
    weight: f64,
}

impl FarFieldPort {
    pub fn new(direction: Direction, weight: f64) -> Result<Self> {
        check_weight(weight)?;
        Ok(FarFieldPort { direction, polarization: None, weight })
    }

    pub fn polarized(direction: Direction, polarization: Point3, weight: f64) -> Result<Self> {
        check_weight(weight)?;
        if direction.is_planar() {
            return Err(Error::InvalidArgument("polarized ports need a spatial direction".into()));
        }
        let norm = polarization.norm();
        if !(norm > 0.0) {
            return Err(Error::InvalidArgument("polarization must be nonzero".into()));
        }
        let e = polarization / norm;
        if e.dot(&direction.unit()).abs() > 1e-12 {
            return Err(Error::InvalidArgument("polarization must be orthogonal to the direction".into()));
        }
        Ok(FarFieldPort { direction, polarization: Some(e), weight })
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn polarization(&self) -> Option<Point3> {
        self.polarization
    }

    pub fn weight(&self) -> f64 {
        self.weight
    }
}

fn check_weight(weight: f64) -> Result<()> {
    if weight > 0.0 && weight.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("port weight must be positive, got {weight}")))
    }
}

/// One port per quadrature node, or two (`θ̂` and `φ̂`) when `polarized`.
pub fn far_field_ports(quad: &DirectionQuadrature, polarized: bool) -> Result<Vec<FarFieldPort>> {
    let mut ports = Vec::with_capacity(quad.len() * if polarized { 2 } else { 1 });
    for node in quad.nodes() {
        if polarized {
            let (e_theta, e_phi) = node.dir.projection_basis();
            ports.push(FarFieldPort::polarized(node.dir, e_theta, node.weight)?);
            ports.push(FarFieldPort::polarized(node.dir, e_phi, node.weight)?);
        } else {
            ports.push(FarFieldPort::new(node.dir, node.weight)?);
        }
    }
    Ok(ports)
}

#[derive(Clone, Copy, Debug)]
pub enum Receiver<'a> {
    Points(&'a SampleSet),
    FarField(&'a [FarFieldPort]),
}

/// Anything that can produce blocks of a complex matrix on demand.
///
/// `apply` and `adjoint_apply` stream over fixed-size blocks, so memory stays
/// at a few blocks and each output entry is summed in the same order
/// regardless of how many threads run.
pub trait LinearOperator: Sync {
    fn nrows(&self) -> usize;
    fn ncols(&self) -> usize;
    fn block(&self, rows: Range<usize>, cols: Range<usize>) -> Mat<c64>;

    /// `H X` for an `ncols × p` block of vectors.
    fn apply(&self, x: MatRef<'_, c64>) -> Mat<c64> {
        let (m, n, p) = (self.nrows(), self.ncols(), x.ncols());
        assert_eq!(x.nrows(), n, "apply: vector length does not match the operator");
        let parts = par::map_range(m.div_ceil(ROW_BLOCK), |b| {
            let rows = b * ROW_BLOCK..((b + 1) * ROW_BLOCK).min(m);
            let mut acc = Mat::<c64>::zeros(rows.len(), p);
            for c0 in (0..n).step_by(COL_BLOCK) {
                let cols = c0..(c0 + COL_BLOCK).min(n);
                let h = self.block(rows.clone(), cols.clone());
                matmul(acc.as_mut(), Accum::Add, h.as_ref(), x.subrows(cols.start, cols.len()), c64::new(1.0, 0.0), Par::Seq);
            }
            acc
        });
        stack_rows(parts, m, p, ROW_BLOCK)
    }

    /// `Hᴴ Y` for an `nrows × p` block of vectors.
    fn adjoint_apply(&self, y: MatRef<'_, c64>) -> Mat<c64> {
        let (m, n, p) = (self.nrows(), self.ncols(), y.ncols());
        assert_eq!(y.nrows(), m, "adjoint_apply: vector length does not match the operator");
        let parts = par::map_range(n.div_ceil(ROW_BLOCK), |b| {
            let cols = b * ROW_BLOCK..((b + 1) * ROW_BLOCK).min(n);
            let mut acc = Mat::<c64>::zeros(cols.len(), p);
            for r0 in (0..m).step_by(COL_BLOCK) {
                let rows = r0..(r0 + COL_BLOCK).min(m);
                let h = self.block(rows.clone(), cols.clone());
                matmul(acc.as_mut(), Accum::Add, h.adjoint(), y.subrows(rows.start, rows.len()), c64::new(1.0, 0.0), Par::Seq);
            }
            acc
        });
        stack_rows(parts, n, p, ROW_BLOCK)
    }

    fn to_dense(&self) -> Mat<c64> {
        let (m, n) = (self.nrows(), self.ncols());
        let parts = par::map_range(m.div_ceil(ROW_BLOCK), |b| self.block(b * ROW_BLOCK..((b + 1) * ROW_BLOCK).min(m), 0..n));
        stack_rows(parts, m, n, ROW_BLOCK)
    }
}

fn stack_rows(parts: Vec<Mat<c64>>, m: usize, p: usize, step: usize) -> Mat<c64> {
    let mut out = Mat::<c64>::zeros(m, p);
    for (b, part) in parts.iter().enumerate() {
        out.as_mut().subrows_mut(b * step, part.nrows()).copy_from(part);
    }
    out
}

/// An explicit matrix behind the operator interface.
#[derive(Clone, Debug)]
pub struct DenseOperator {
    mat: Mat<c64>,
}

impl DenseOperator {
    pub fn new(mat: Mat<c64>) -> Self {
        DenseOperator { mat }
    }

    pub fn matrix(&self) -> MatRef<'_, c64> {
        self.mat.as_ref()
    }
}

impl LinearOperator for DenseOperator {
    fn nrows(&self) -> usize {
        self.mat.nrows()
    }

    fn ncols(&self) -> usize {
        self.mat.ncols()
    }

    fn block(&self, rows: Range<usize>, cols: Range<usize>) -> Mat<c64> {
        self.mat.as_ref().submatrix(rows.start, cols.start, rows.len(), cols.len()).to_owned()
    }

    fn to_dense(&self) -> Mat<c64> {
        self.mat.clone()
    }
}

#[derive(Clone, Debug)]
enum Rx {
    Points(Vec<Point3>),
    Ports { dirs: Vec<Point3>, amps: Vec<f64>, pols: Option<Vec<Point3>> },
}

/// Matrix-free channel `H[p, n] = kernel(receiver_p, t_n)`.
///
/// Vector kernels (dyadic, polarized far field) use three columns per
/// transmitter, ordered `x, y, z`; the dyadic kernel also uses three rows per
/// receiver point.
#[derive(Clone, Debug)]
pub struct ChannelOperator {
    kind: KernelKind,
    k: f64,
    tx: Vec<Point3>,
    rx: Rx,
    vector: bool,
}

/// Builds the channel from transmitter samples to a receiver.
pub fn assemble_channel(tx: &SampleSet, receiver: Receiver<'_>, k: f64, kind: KernelKind) -> Result<ChannelOperator> {
    if !(k > 0.0) || !k.is_finite() {
        return Err(Error::InvalidArgument(format!("wavenumber must be positive, got {k}")));
    }
    if tx.dimension() != kind.dimension() {
        return Err(Error::DimensionMismatch(format!(
            "{kind:?} kernel needs {}D transmitters, got {}D",
            kind.dimension(),
            tx.dimension()
        )));
    }
    let (rx, vector) = match receiver {
        Receiver::Points(set) => {
            if kind.is_far_field() {
                return Err(Error::InvalidArgument(format!("{kind:?} kernel needs far-field ports")));
            }
            if set.dimension() != tx.dimension() {
                return Err(Error::DimensionMismatch("transmitter and receiver dimensions differ".into()));
            }
            let distance = min_point_distance(tx.points(), set.points());
            let spacing = tx.spacing().max(set.spacing());
            if distance < spacing {
                return Err(Error::RegionsTooClose { distance, spacing });
            }
            if kind == KernelKind::Dyadic3d && k * distance <= NEAR_FIELD_CUTOFF {
                return Err(Error::NearFieldCutoff { kr: k * distance });
            }
            (Rx::Points(set.points().to_vec()), kind == KernelKind::Dyadic3d)
        }
        Receiver::FarField(ports) => {
            if !kind.is_far_field() {
                return Err(Error::InvalidArgument(format!("{kind:?} kernel needs receiver points")));
            }
            if ports.is_empty() {
                return Err(Error::InvalidArgument("no far-field ports".into()));
            }
            if ports.iter().any(|p| p.direction.is_planar() != (kind == KernelKind::FarField2d)) {
                return Err(Error::DimensionMismatch("port directions do not match the kernel dimension".into()));
            }
            let polarized = ports[0].polarization.is_some();
            if ports.iter().any(|p| p.polarization.is_some() != polarized) {
                return Err(Error::InvalidArgument("ports mix polarized and scalar responses".into()));
            }
            let pols = polarized.then(|| ports.iter().map(|p| p.polarization.unwrap()).collect());
            let rx = Rx::Ports {
                dirs: ports.iter().map(|p| p.direction.unit()).collect(),
                amps: ports.iter().map(|p| p.weight.sqrt()).collect(),
                pols,
            };
            (rx, polarized)
        }
    };
    Ok(ChannelOperator { kind, k, tx: tx.points().to_vec(), rx, vector })
}

impl ChannelOperator {
    pub fn kind(&self) -> KernelKind {
        self.kind
    }

    pub fn wavenumber(&self) -> f64 {
        self.k
    }

    pub fn n_transmitters(&self) -> usize {
        self.tx.len()
    }

    pub fn n_receivers(&self) -> usize {
        match &self.rx {
            Rx::Points(p) => p.len(),
            Rx::Ports { dirs, .. } => dirs.len(),
        }
    }

    fn fill_dyadic(&self, rx: &[Point3], rows: &Range<usize>, cols: &Range<usize>, out: &mut Mat<c64>) {
        for pr in rows.start / 3..=(rows.end - 1) / 3 {
            for pc in cols.start / 3..=(cols.end - 1) / 3 {
                let g = dyadic(self.k, &(rx[pr] - self.tx[pc]));
                for a in 0..3 {
                    let i = 3 * pr + a;
                    if !rows.contains(&i) {
                        continue;
                    }
                    for b in 0..3 {
                        let j = 3 * pc + b;
                        if cols.contains(&j) {
                            out[(i - rows.start, j - cols.start)] = g[(a, b)];
                        }
                    }
                }
            }
        }
    }
}

impl LinearOperator for ChannelOperator {
    fn nrows(&self) -> usize {
        match self.kind {
            KernelKind::Dyadic3d => 3 * self.n_receivers(),
            _ => self.n_receivers(),
        }
    }

    fn ncols(&self) -> usize {
        if self.vector {
            3 * self.tx.len()
        } else {
            self.tx.len()
        }
    }

    fn block(&self, rows: Range<usize>, cols: Range<usize>) -> Mat<c64> {
        let mut out = Mat::<c64>::zeros(rows.len(), cols.len());
        if rows.is_empty() || cols.is_empty() {
            return out;
        }
        let k = self.k;
        match (&self.rx, self.kind) {
            (Rx::Points(rx), KernelKind::Dyadic3d) => self.fill_dyadic(rx, &rows, &cols, &mut out),
            (Rx::Points(rx), kind) => {
                for (i, p) in rows.clone().enumerate() {
                    for (j, n) in cols.clone().enumerate() {
                        let dist = (rx[p] - self.tx[n]).norm();
                        out[(i, j)] = if kind == KernelKind::Scalar2d { g2(k * dist) } else { g3(k, dist) };
                    }
                }
            }
            (Rx::Ports { dirs, amps, pols }, _) => {
                for (i, p) in rows.clone().enumerate() {
                    for (j, c) in cols.clone().enumerate() {
                        let (n, comp) = if self.vector { (c / 3, c % 3) } else { (c, 0) };
                        let (s, co) = (k * dirs[p].dot(&self.tx[n])).sin_cos();
                        let scale = match pols {
                            Some(e) => amps[p] * e[p][comp],
                            None => amps[p],
                        };
                        out[(i, j)] = c64::new(co * scale, s * scale);
                    }
                }
            }
        }
        out
    }
}

//! Radiation modes, the trace identity and water-filling.
//!
//! Modes solve `Fᴴ Λ² F I = ν R_x I`. With `R_x = L Lᴴ` the change of
//! variables `V = Lᴴ I` turns this into the SVD of `H = ΛF L⁻ᴴ`: `ν` are the
//! squared singular values and `I_n = L⁻ᴴ v_n`. The far-field operator passed
//! in already carries the `√Λ²` row weights.

use faer::linalg::solvers::Solve;
use faer::linalg::triangular_solve::solve_lower_triangular_in_place;
use faer::{c64, Mat, MatRef, Par, Side};
use serde::Serialize;

use crate::channel::LinearOperator;
use crate::error::{Error, Result};

/// Power constraint matrix `R_x`.
#[derive(Clone, Debug, PartialEq)]
pub enum ConstraintMatrix {
    /// `ρ I`, the Gram matrix of uniformly spaced point sources up to scale.
    ScaledIdentity(f64),
    /// Any Hermitian positive definite matrix.
    Matrix(Mat<c64>),
}

impl ConstraintMatrix {
    fn validate(&self, n: usize) -> Result<()> {
        match self {
            ConstraintMatrix::ScaledIdentity(rho) => {
                if *rho > 0.0 && rho.is_finite() {
                    Ok(())
                } else {
                    Err(Error::NotSpd)
                }
            }
            ConstraintMatrix::Matrix(r) => {
                if r.nrows() != n || r.ncols() != n {
                    return Err(Error::DimensionMismatch(format!(
                        "constraint matrix is {}x{}, channel has {n} columns",
                        r.nrows(),
                        r.ncols()
                    )));
                }
                let asym = (r - r.adjoint()).norm_l2();
                if !(asym <= 1e-12 * r.norm_l2()) {
                    return Err(Error::NotSpd);
                }
                Ok(())
            }
        }
    }

    fn cholesky(r: &Mat<c64>) -> Result<Mat<c64>> {
        let llt = r.llt(Side::Lower).map_err(|_| Error::NotSpd)?;
        Ok(llt.L().to_owned())
    }
}

#[derive(Clone, Debug)]
pub struct RadiationModes {
    /// `ν_n`, descending.
    pub efficiencies: Vec<f64>,
    /// Columns are the modal currents `I_n`.
    pub currents: Mat<c64>,
    /// Columns are the received fields `f_n = ΛF I_n`.
    pub fields: Mat<c64>,
}

/// Generalized radiation modes of the weighted far-field operator.
pub fn radiation_modes(f: &dyn LinearOperator, rx: &ConstraintMatrix) -> Result<RadiationModes> {
    rx.validate(f.ncols())?;
    let lf = f.to_dense();
    let (h, l) = match rx {
        ConstraintMatrix::ScaledIdentity(rho) => (scale(&lf, 1.0 / rho.sqrt()), None),
        ConstraintMatrix::Matrix(r) => {
            let l = ConstraintMatrix::cholesky(r)?;
            // Hᴴ = L⁻¹ (ΛF)ᴴ.
            let mut h_adj = lf.adjoint().to_owned();
            solve_lower_triangular_in_place(l.as_ref(), h_adj.as_mut(), Par::Seq);
            (h_adj.adjoint().to_owned(), Some(l))
        }
    };
    let svd = h.thin_svd().map_err(|e| Error::Linalg(format!("{e:?}")))?;
    let s: Vec<f64> = svd.S().column_vector().iter().map(|x| x.re).collect();
    let v = svd.V().to_owned();
    let currents = match (&l, rx) {
        (None, ConstraintMatrix::ScaledIdentity(rho)) => scale(&v, 1.0 / rho.sqrt()),
        (Some(l), _) => {
            // I = L⁻ᴴ V, i.e. Lᴴ I = V.
            let mut i = v.clone();
            faer::linalg::triangular_solve::solve_upper_triangular_in_place(l.adjoint(), i.as_mut(), Par::Seq);
            i
        }
        _ => unreachable!(),
    };
    let mut fields = svd.U().to_owned();
    for (j, sj) in s.iter().enumerate() {
        for i in 0..fields.nrows() {
            fields[(i, j)] *= *sj;
        }
    }
    Ok(RadiationModes { efficiencies: s.iter().map(|x| x * x).collect(), currents, fields })
}

fn scale(m: &Mat<c64>, c: f64) -> Mat<c64> {
    Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)] * c)
}

/// Both sides of `Σν_n = Σ_p Λ_p² F_p R_x⁻¹ F_pᴴ`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TraceIdentity {
    pub lhs: f64,
    pub rhs: f64,
    pub rel_mismatch: f64,
}

/// The left side comes from the mode decomposition, the right side from an
/// LU solve with `R_x`, so the two share no factorization.
pub fn trace_identity(f: &dyn LinearOperator, rx: &ConstraintMatrix) -> Result<TraceIdentity> {
    let lhs: f64 = radiation_modes(f, rx)?.efficiencies.iter().sum();
    let lf = f.to_dense();
    let rhs = match rx {
        ConstraintMatrix::ScaledIdentity(rho) => frobenius_sq(lf.as_ref()) / rho,
        ConstraintMatrix::Matrix(r) => {
            let x = r.partial_piv_lu().solve(lf.adjoint().to_owned());
            quadratic_rows(lf.as_ref(), x.as_ref())
        }
    };
    Ok(TraceIdentity { lhs, rhs, rel_mismatch: (lhs - rhs).abs() / lhs.abs().max(f64::MIN_POSITIVE) })
}

fn frobenius_sq(m: MatRef<'_, c64>) -> f64 {
    let mut s = 0.0;
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            s += m[(i, j)].norm_sqr();
        }
    }
    s
}

/// `Σ_p F_p x_p` where `x_p` is column `p` of `R⁻¹ Fᴴ`.
fn quadratic_rows(f: MatRef<'_, c64>, x: MatRef<'_, c64>) -> f64 {
    let mut s = 0.0;
    for p in 0..f.nrows() {
        for n in 0..f.ncols() {
            s += (f[(p, n)] * x[(n, p)]).re;
        }
    }
    s
}

/// `λ² F_p R⁻¹ F_pᴴ` for one unweighted far-field row.
pub fn max_effective_area(row: &[c64], r: &ConstraintMatrix, wavelength: f64) -> Result<f64> {
    if !(wavelength > 0.0) {
        return Err(Error::InvalidArgument(format!("wavelength must be positive, got {wavelength}")));
    }
    r.validate(row.len())?;
    let f = Mat::from_fn(1, row.len(), |_, j| row[j]);
    let q = match r {
        ConstraintMatrix::ScaledIdentity(rho) => frobenius_sq(f.as_ref()) / rho,
        ConstraintMatrix::Matrix(m) => {
            let l = ConstraintMatrix::cholesky(m)?;
            let mut y = f.adjoint().to_owned();
            solve_lower_triangular_in_place(l.as_ref(), y.as_mut(), Par::Seq);
            frobenius_sq(y.as_ref())
        }
    };
    Ok(wavelength * wavelength * q)
}

/// Maximal effective area of every row of a weighted far-field operator;
/// `weights[p]` is the `Λ_p²` the row was scaled with.
pub fn max_effective_areas(f: &dyn LinearOperator, weights: &[f64], r: &ConstraintMatrix, wavelength: f64) -> Result<Vec<f64>> {
    if weights.len() != f.nrows() {
        return Err(Error::DimensionMismatch(format!("{} weights for {} rows", weights.len(), f.nrows())));
    }
    let lf = f.to_dense();
    (0..f.nrows())
        .map(|p| {
            let inv = 1.0 / weights[p].sqrt();
            let row: Vec<c64> = (0..lf.ncols()).map(|n| lf[(p, n)] * inv).collect();
            max_effective_area(&row, r, wavelength)
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WaterfillResult {
    /// `P̃_n`, in the order of the input efficiencies.
    pub allocations: Vec<f64>,
    pub water_level: f64,
    /// Bits per channel use.
    pub capacity: f64,
    pub gamma: f64,
    pub active: usize,
    efficiencies: Vec<f64>,
}

impl WaterfillResult {
    /// Largest violation of the optimality conditions.
    pub fn kkt_residual(&self) -> f64 {
        let mut worst: f64 = (self.allocations.iter().sum::<f64>() - 1.0).abs();
        for (&p, &nu) in self.allocations.iter().zip(&self.efficiencies) {
            let floor = if nu > 0.0 { 1.0 / (self.gamma * nu) } else { f64::INFINITY };
            if p > 0.0 {
                worst = worst.max((p + floor - self.water_level).abs() / self.water_level);
            } else {
                worst = worst.max((self.water_level - floor).max(0.0) / self.water_level);
            }
            worst = worst.max((-p).max(0.0));
        }
        worst
    }
}

/// Unit total power spread over modes to maximize `Σ log₂(1 + γ ν_n P̃_n)`.
///
/// Modes are filled strongest first; the active count is the largest `k`
/// for which the level `μ_k = (1 + Σ_{i<k} 1/(γν_i)) / k` still lies above the
/// floor `1/(γν_k)` of the weakest active mode.
pub fn waterfill(nu: &[f64], gamma: f64) -> Result<WaterfillResult> {
    if !(gamma > 0.0) || !gamma.is_finite() {
        return Err(Error::InvalidArgument(format!("SNR must be positive, got {gamma}")));
    }
    if nu.iter().any(|v| !(*v >= 0.0) || !v.is_finite()) {
        return Err(Error::InvalidArgument("efficiencies must be finite and nonnegative".into()));
    }
    let mut order: Vec<usize> = (0..nu.len()).filter(|&i| nu[i] > 0.0).collect();
    if order.is_empty() {
        return Err(Error::AllZeroEfficiencies);
    }
    order.sort_by(|&a, &b| nu[b].total_cmp(&nu[a]));
    let floors: Vec<f64> = order.iter().map(|&i| 1.0 / (gamma * nu[i])).collect();
    let mut active = 1;
    let mut level = 1.0 + floors[0];
    let mut acc = floors[0];
    for k in 2..=floors.len() {
        acc += floors[k - 1];
        let mu = (1.0 + acc) / k as f64;
        if mu > floors[k - 1] {
            active = k;
            level = mu;
        } else {
            break;
        }
    }
    let mut allocations = vec![0.0; nu.len()];
    let mut capacity = 0.0;
    for (&i, &floor) in order.iter().zip(&floors).take(active) {
        let p = level - floor;
        allocations[i] = p;
        capacity += (1.0 + gamma * nu[i] * p).log2();
    }
    Ok(WaterfillResult { allocations, water_level: level, capacity, gamma, active, efficiencies: nu.to_vec() })
}

/// `(ζ_n N_a)⁻¹`, the curve compared against the water level.
pub fn inverse_eigen_curve(zeta: &[f64], n_a: f64) -> Result<Vec<f64>> {
    if !(n_a > 0.0) {
        return Err(Error::InvalidArgument(format!("N_a must be positive, got {n_a}")));
    }
    Ok(zeta.iter().map(|z| 1.0 / (z * n_a)).collect())
}

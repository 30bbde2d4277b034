//! Channel spectra: `σ_n = eig(H Hᴴ)`, their normalization `ζ_n = σ_n / Σσ`,
//! the effective NDoF `N_e = (Σσ)² / Σσ²` and the knee NDoF `N_k`.

use faer::{c64, Mat, MatRef};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::channel::LinearOperator;
use crate::error::{Error, Result};
use crate::par;

/// Largest `N_R × N_T` materialized by [`dense_spectrum`].
pub const DEFAULT_DENSE_CAP: usize = 20_000 * 20_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SpectrumMethod {
    Dense,
    Randomized { p: usize, seed: u64, power_iters: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectrumResult {
    /// Eigenvalues of `H Hᴴ`, descending.
    pub sigma: Vec<f64>,
    pub zeta: Vec<f64>,
    pub n_e: f64,
    pub n_k: usize,
    pub method: SpectrumMethod,
    /// Share of `‖H‖_F² = Σσ` held by the returned values.
    pub captured: f64,
}

impl SpectrumResult {
    /// Sorts (stably, descending), normalizes and derives both NDoF estimates.
    /// `total` is the full `Σσ` when only part of the spectrum is known.
    pub fn from_sigma(mut sigma: Vec<f64>, method: SpectrumMethod, total: Option<f64>) -> Result<Self> {
        if sigma.iter().any(|s| !s.is_finite()) {
            return Err(Error::Linalg("non-finite eigenvalue".into()));
        }
        for s in sigma.iter_mut() {
            *s = s.max(0.0);
        }
        sigma.sort_by(|a, b| b.total_cmp(a));
        let zeta = normalize(&sigma)?;
        let n_e = effective_ndof(&sigma)?;
        let n_k = knee_ndof(&zeta);
        let sum: f64 = sigma.iter().sum();
        let captured = total.map_or(1.0, |t| if t > 0.0 { sum / t } else { 1.0 });
        Ok(SpectrumResult { sigma, zeta, n_e, n_k, method, captured })
    }
}

/// `ζ_n = σ_n / Σσ`.
pub fn normalize(sigma: &[f64]) -> Result<Vec<f64>> {
    let sum: f64 = sigma.iter().sum();
    if !(sum > 0.0) {
        return Err(Error::AllZero);
    }
    Ok(sigma.iter().map(|s| s / sum).collect())
}

pub fn effective_ndof(sigma: &[f64]) -> Result<f64> {
    if sigma.iter().any(|&s| s < 0.0) {
        return Err(Error::InvalidArgument("eigenvalues must be nonnegative".into()));
    }
    let sum: f64 = sigma.iter().sum();
    if !(sum > 0.0) {
        return Err(Error::AllZero);
    }
    // Scaling by the largest value keeps the squares in range.
    let top = sigma.iter().cloned().fold(0.0, f64::max);
    let (s1, s2) = sigma.iter().fold((0.0, 0.0), |(a, b), &s| {
        let x = s / top;
        (a + x, b + x * x)
    });
    Ok(s1 * s1 / s2)
}

/// Number of `ζ_n` at least half the plateau value, where the plateau is the
/// median of the largest `⌈N_e / 4⌉` values. Expects `zeta` descending.
pub fn knee_ndof(zeta: &[f64]) -> usize {
    let sum_sq: f64 = zeta.iter().map(|z| z * z).sum();
    if zeta.is_empty() || !(sum_sq > 0.0) {
        return 0;
    }
    let n_e = zeta.iter().sum::<f64>().powi(2) / sum_sq;
    let m = ((0.25 * n_e).ceil() as usize).clamp(1, zeta.len());
    let mut top = zeta[..m].to_vec();
    top.sort_by(|a, b| a.total_cmp(b));
    let plateau = if m % 2 == 1 { top[m / 2] } else { 0.5 * (top[m / 2 - 1] + top[m / 2]) };
    zeta.iter().filter(|&&z| z >= 0.5 * plateau).count()
}

/// Full spectrum from the singular values of the materialized channel.
pub fn dense_spectrum(h: &dyn LinearOperator) -> Result<SpectrumResult> {
    dense_spectrum_with_cap(h, DEFAULT_DENSE_CAP)
}

pub fn dense_spectrum_with_cap(h: &dyn LinearOperator, cap: usize) -> Result<SpectrumResult> {
    let (rows, cols) = (h.nrows(), h.ncols());
    if rows.saturating_mul(cols) > cap {
        return Err(Error::TooLargeForDense { rows, cols, cap });
    }
    if rows == 0 || cols == 0 {
        return Err(Error::AllZero);
    }
    let dense = h.to_dense();
    let s = dense.singular_values().map_err(|e| Error::Linalg(format!("{e:?}")))?;
    SpectrumResult::from_sigma(s.iter().map(|x| x * x).collect(), SpectrumMethod::Dense, None)
}

/// Top `p` eigenvalues of `H Hᴴ` by a randomized range finder.
///
/// `Y = H A` for a complex Gaussian `A` fixed by `seed`, `W = orth(Y)`, then
/// `power_iters` passes of `W ← orth(H orth(Hᴴ W))`. With `Bᴴ = Hᴴ W` the
/// returned values are the squared singular values of `B = Wᴴ H`.
pub fn randomized_spectrum(h: &dyn LinearOperator, p: usize, seed: u64, power_iters: usize) -> Result<SpectrumResult> {
    let (rows, cols) = (h.nrows(), h.ncols());
    if p == 0 || p > rows.min(cols) {
        return Err(Error::InvalidArgument(format!("sketch size {p} must be in 1..={}", rows.min(cols))));
    }
    let a = gaussian(cols, p, seed);
    let mut w = orthonormal(h.apply(a.as_ref()).as_ref());
    for _ in 0..power_iters {
        let z = orthonormal(h.adjoint_apply(w.as_ref()).as_ref());
        w = orthonormal(h.apply(z.as_ref()).as_ref());
    }
    let b_adj = h.adjoint_apply(w.as_ref());
    let s = b_adj.singular_values().map_err(|e| Error::Linalg(format!("{e:?}")))?;
    let total = frobenius_sq(h);
    SpectrumResult::from_sigma(
        s.iter().map(|x| x * x).collect(),
        SpectrumMethod::Randomized { p, seed, power_iters },
        Some(total),
    )
}

/// Complex standard normal entries, `E|a|² = 1`, drawn column by column.
fn gaussian(rows: usize, cols: usize, seed: u64) -> Mat<c64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    let mut a = Mat::<c64>::zeros(rows, cols);
    for j in 0..cols {
        for i in 0..rows {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            a[(i, j)] = c64::new(re * scale, im * scale);
        }
    }
    a
}

fn orthonormal(y: MatRef<'_, c64>) -> Mat<c64> {
    y.qr().compute_thin_Q()
}

/// `‖H‖_F²` streamed over row blocks.
fn frobenius_sq(h: &dyn LinearOperator) -> f64 {
    const STEP: usize = 64;
    let (m, n) = (h.nrows(), h.ncols());
    let parts = par::map_range(m.div_ceil(STEP), |b| {
        let blk = h.block(b * STEP..((b + 1) * STEP).min(m), 0..n);
        let mut s = 0.0;
        for j in 0..blk.ncols() {
            for i in 0..blk.nrows() {
                s += blk[(i, j)].norm_sqr();
            }
        }
        s
    });
    par::ordered_sum(&parts)
}

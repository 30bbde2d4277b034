//! NDoF estimates from shadows and the classical reference formulas.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::MutualShadowResult;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NdofModel {
    /// `L_TR/λ`
    Scalar2d,
    /// `A_TR/λ²`
    Scalar3d,
    /// `2A_TR/λ²`, two polarizations.
    Em3d,
}

impl NdofModel {
    pub fn dimension(&self) -> usize {
        match self {
            NdofModel::Scalar2d => 2,
            _ => 3,
        }
    }

    fn polarizations(&self) -> f64 {
        match self {
            NdofModel::Em3d => 2.0,
            _ => 1.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct NdofEstimate {
    pub n_a: f64,
    pub model: NdofModel,
    pub wavelength: f64,
}

fn check_model(msr: &MutualShadowResult, model: NdofModel) -> Result<()> {
    if msr.dimension != model.dimension() {
        return Err(Error::DimensionMismatch(format!(
            "{}D shadow used with the {:?} model",
            msr.dimension, model
        )));
    }
    Ok(())
}

/// Shadow NDoF `N_a` at wavelength `λ`.
pub fn ndof_from_shadow(msr: &MutualShadowResult, wavelength: f64, model: NdofModel) -> Result<NdofEstimate> {
    check_model(msr, model)?;
    if !(wavelength > 0.0) {
        return Err(Error::InvalidArgument(format!("wavelength must be positive, got {wavelength}")));
    }
    let n_a = match model {
        NdofModel::Scalar2d => msr.total / wavelength,
        _ => model.polarizations() * (msr.total / (wavelength * wavelength)),
    };
    Ok(NdofEstimate { n_a, model, wavelength })
}

/// Wavelength at which the shadow predicts `n_a` degrees of freedom.
pub fn wavelength_for_ndof(msr: &MutualShadowResult, n_a: f64, model: NdofModel) -> Result<f64> {
    check_model(msr, model)?;
    if !(n_a > 0.0) || !(msr.total > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "need a positive NDoF and shadow, got N_a = {n_a}, total = {}",
            msr.total
        )));
    }
    Ok(match model {
        NdofModel::Scalar2d => msr.total / n_a,
        _ => (model.polarizations() * msr.total / n_a).sqrt(),
    })
}

/// Closed-form NDoF references.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ReferenceKind {
    /// `2L/λ` for a line of length `L`.
    Weyl2d { length: f64, wavelength: f64 },
    /// `πA/λ²` for a surface of area `A`.
    Weyl3d { area: f64, wavelength: f64 },
    /// `L_s/λ` for a total shadow length `L_s`.
    Shadow2d { shadow_length: f64, wavelength: f64 },
    /// `A_s/λ²` for a total shadow area `A_s`.
    Shadow3d { shadow_area: f64, wavelength: f64 },
    /// `L_T L_R/(dλ)`.
    Paraxial2d { length_t: f64, length_r: f64, distance: f64, wavelength: f64 },
    /// `A_T A_R/(d²λ²)`, per polarization.
    Paraxial3d { area_t: f64, area_r: f64, distance: f64, wavelength: f64 },
}

pub fn reference_ndof(kind: ReferenceKind) -> Result<f64> {
    let (value, params): (f64, Vec<f64>) = match kind {
        ReferenceKind::Weyl2d { length, wavelength } => (2.0 * length / wavelength, vec![length, wavelength]),
        ReferenceKind::Weyl3d { area, wavelength } => (PI * area / (wavelength * wavelength), vec![area, wavelength]),
        ReferenceKind::Shadow2d { shadow_length, wavelength } => {
            (shadow_length / wavelength, vec![shadow_length, wavelength])
        }
        ReferenceKind::Shadow3d { shadow_area, wavelength } => {
            (shadow_area / (wavelength * wavelength), vec![shadow_area, wavelength])
        }
        ReferenceKind::Paraxial2d { length_t, length_r, distance, wavelength } => (
            length_t * length_r / (distance * wavelength),
            vec![length_t, length_r, distance, wavelength],
        ),
        ReferenceKind::Paraxial3d { area_t, area_r, distance, wavelength } => (
            area_t * area_r / (distance * distance * wavelength * wavelength),
            vec![area_t, area_r, distance, wavelength],
        ),
    };
    if params.iter().all(|&p| p > 0.0 && p.is_finite()) {
        Ok(value)
    } else {
        Err(Error::InvalidArgument(format!("reference parameters must be positive: {kind:?}")))
    }
}

//! Spatial degrees of freedom (NDoF) of free-space channels.
//!
//! Two independent routes are provided and cross-checked:
//!
//! * **geometric** — the total mutual shadow length (2D) or area (3D) between a
//!   transmitting and a receiving region, integrated over illumination
//!   directions and measured in wavelengths ([`shadow`]);
//! * **spectral** — the eigenvalues of `H Hᴴ` for a channel matrix sampled
//!   from free-space Green's functions ([`channel`], [`spectra`]), either
//!   densely or with a matrix-free randomized SVD.
//!
//! [`capacity`] adds generalized radiation modes, the trace identity that ties
//! their efficiencies to maximal effective areas, and water-filling.
//!
//! Inner loops (directions, panel pairs, channel row blocks) run on rayon when
//! the `parallel` feature is enabled (the default) and sequentially otherwise.
//! Every reduction is summed in a fixed index order, so results are bit-identical
//! across thread counts and between both modes.

pub mod capacity;
pub mod channel;
pub mod error;
pub mod geometry;
pub mod io;
mod par;
pub mod quadrature;
pub mod shadow;
pub mod special;
pub mod spectra;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// `true` when built with the rayon backend.
pub const PARALLEL: bool = cfg!(feature = "parallel");

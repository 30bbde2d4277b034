//! Point-source sampling, free-space kernels and the channel operator.
//!
//! The channel maps transmitter point currents to received fields, either at
//! receiver points (`G₂`, `G₃` or the dyadic `G`) or at far-field directions
//! (plane-wave rows `√Λ² e^{jk k̂·r}`). It is matrix-free: blocks are
//! evaluated when needed and never stored.

mod export;
mod green;
mod operator;
mod sampling;

pub use export::{read_binary, write_binary, Precision};
pub use green::{green_2d, green_3d, green_dyadic_3d, NEAR_FIELD_CUTOFF};
pub use operator::{
    assemble_channel, far_field_ports, ChannelOperator, DenseOperator, FarFieldPort, KernelKind, LinearOperator,
    Receiver,
};
pub use sampling::{sample_region, SampleSet};

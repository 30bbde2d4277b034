use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid shape: {0}")]
    InvalidShape(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("transmitter and receiver parts interleave along direction {direction:?}")]
    OrderingUndefined { direction: [f64; 3] },

    #[error("spheres overlap: separation {h} <= a1 + a2 = {sum}")]
    SpheresOverlap { h: f64, sum: f64 },

    #[error("panels too close: centroid distance {distance} < 2 x panel diameter {diameter}; refine the mesh")]
    PanelsTooClose { distance: f64, diameter: f64 },

    #[error("sampling produced no points inside the region")]
    EmptySampling,

    #[error("coincident source and observation points")]
    CoincidentPoints,

    #[error("kR = {kr} is below the near-field cutoff")]
    NearFieldCutoff { kr: f64 },

    #[error("regions too close: minimum distance {distance} < sample spacing {spacing}")]
    RegionsTooClose { distance: f64, spacing: f64 },

    #[error("{rows} x {cols} channel exceeds the dense cap of {cap} entries")]
    TooLargeForDense { rows: usize, cols: usize, cap: usize },

    #[error("all eigenvalues are zero")]
    AllZero,

    #[error("all modal efficiencies are zero")]
    AllZeroEfficiencies,

    #[error("constraint matrix is not symmetric positive definite")]
    NotSpd,

    #[error("linear algebra failure: {0}")]
    Linalg(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

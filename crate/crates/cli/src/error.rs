use serde::Serialize;

/// Machine-readable failure written to stderr.
#[derive(Debug, Serialize)]
pub struct Failure {
    pub error: &'static str,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub context: Option<String>,
}

impl Failure {
    pub fn new(err: &ndof::Error, context: Option<&str>) -> Self {
        Failure { error: kind(err), message: err.to_string(), context: context.map(str::to_owned) }
    }
}

pub fn kind(err: &ndof::Error) -> &'static str {
    use ndof::Error::*;
    match err {
        InvalidShape(_) => "InvalidShape",
        InvalidArgument(_) => "InvalidArgument",
        DimensionMismatch(_) => "DimensionMismatch",
        OrderingUndefined { .. } => "OrderingUndefined",
        SpheresOverlap { .. } => "SpheresOverlap",
        PanelsTooClose { .. } => "PanelsTooClose",
        EmptySampling => "EmptySampling",
        CoincidentPoints => "CoincidentPoints",
        NearFieldCutoff { .. } => "NearFieldCutoff",
        RegionsTooClose { .. } => "RegionsTooClose",
        TooLargeForDense { .. } => "TooLargeForDense",
        AllZero => "AllZero",
        AllZeroEfficiencies => "AllZeroEfficiencies",
        NotSpd => "NotSPD",
        Linalg(_) => "Linalg",
        Io(_) => "Io",
    }
}

use thiserror::Error;

/// Errors reported by the geometry, solver and estimation layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum PoseError {
    #[error("contract violation: {0}")]
    ContractViolation(&'static str),
    #[error("degenerate input: {0}")]
    DegenerateInput(&'static str),
    #[error("degenerate geometry: {0}")]
    DegenerateGeometry(&'static str),
    #[error("rotation is a plane rotation about the y-axis; cannot complete from five entries")]
    PlaneRotationDegenerate,
    #[error("world points P1, P2 and the first line point are collinear")]
    CollinearConfiguration,
    #[error("image points are degenerate with respect to the image line (b2*a1 - b1*a2 ~ 0)")]
    DegenerateImagePoints,
    #[error("special frame is near-degenerate: {0}")]
    NearDegenerateFrame(&'static str),
    #[error("ground-truth translation is zero")]
    ZeroBaseline,
    #[error("insufficient data: {0}")]
    InsufficientData(&'static str),
    #[error("no hypothesis produced a valid model")]
    NoModel,
}

impl PoseError {
    /// True for errors caused by the configuration of the input geometry
    /// (as opposed to API misuse or missing data).
    pub fn is_degenerate(&self) -> bool {
        matches!(
            self,
            PoseError::DegenerateInput(_)
                | PoseError::DegenerateGeometry(_)
                | PoseError::PlaneRotationDegenerate
                | PoseError::CollinearConfiguration
                | PoseError::DegenerateImagePoints
                | PoseError::NearDegenerateFrame(_)
        )
    }
}

pub type Result<T, E = PoseError> = std::result::Result<T, E>;

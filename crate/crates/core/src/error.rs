use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("matrix dimension {0} outside supported range 1..=8")]
    UnsupportedDimension(usize),

    #[error("{what} is off its space by {deviation:e}")]
    OffSpace { what: String, deviation: f64 },

    #[error("space mismatch: expected {expected}, found {found}")]
    SpaceMismatch { expected: String, found: String },

    #[error("path endpoint mismatch: gap {gap:e}")]
    EndpointMismatch { gap: f64 },

    #[error("loop is not based at the basepoint (drift {drift:e})")]
    Unbased { drift: f64 },

    #[error("ambiguous lift at sample {index}: nearest representative at distance {distance}")]
    AmbiguousLift { index: usize, distance: f64 },

    #[error("lifted loop does not close (gap {gap}); the loop is not trivial in the fundamental group")]
    LiftNotClosed { gap: f64 },

    #[error("sphere contraction failed: {0}")]
    ContractionFailed(String),

    #[error("phase step {step:.4} rad at sample {index} exceeds the pi/2 safety bound; refine the mesh")]
    PhaseStepTooLarge { index: usize, step: f64 },

    #[error("winding residue {residue:.4} exceeds 0.01")]
    WindingResidue { residue: f64 },

    #[error("matrix is not unitary: deviation {deviation:e}")]
    NotUnitary { deviation: f64 },

    #[error("unsupported map {map} for space {space}")]
    UnsupportedMap { map: String, space: String },

    #[error("edge mismatch between layers '{upper}' and '{lower}': max eval-metric gap {gap:e}")]
    EdgeMismatch {
        upper: String,
        lower: String,
        gap: f64,
    },

    #[error("malformed grid: {0}")]
    MalformedGrid(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("mesh too coarse: {0}")]
    MeshTooCoarse(String),

    #[error("constructed certificate failed verification: {0}")]
    ConstructionRejected(String),
}

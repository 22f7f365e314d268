use thiserror::Error;

/// Errors reported by the library. Domain errors carry enough context to be
/// serialized as CLI diagnostics.
#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero rational function")]
    DivisionByZero,

    #[error("series truncation window is empty or inverted: [{lo}, {hi}]")]
    BadWindow { lo: i64, hi: i64 },

    #[error("series directions are incompatible: {0}")]
    DirectionMismatch(String),

    #[error("requested coefficient u^{0} lies outside the exact window [{1}, {2}]")]
    OutsideWindow(i64, i64, i64),

    #[error("series has a non-invertible leading coefficient")]
    NonInvertibleLeading,

    #[error("pole of order {order} at the requested point exceeds the supported order 2")]
    PoleOrderTooHigh { order: usize },

    #[error("residue at u = 0 is not supported through this entry point; expand instead")]
    PoleAtZero,

    #[error("mismatched dimension-vector supports: {0}")]
    SupportMismatch(String),

    #[error("unknown quiver construction kind `{0}`")]
    UnknownKind(String),

    #[error("degree map is missing arrow `{0}`")]
    MissingDegree(String),

    #[error("graded quiver construction requires a window [k_min, k_max]")]
    MissingWindow,

    #[error("hall pairing requires ungraded dimension vectors")]
    GradedHallPairing,

    #[error("unsupported quiver type for this operation: {0}")]
    UnsupportedQuiver(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("character expansion exceeded the step cap of {0}; partial result discarded")]
    StepCapExceeded(usize),

    #[error("character data is inconsistent in direction {0}: {1}")]
    CharacterInconsistent(u32, String),

    #[error("graded piece ({vertex},{degree}) has dimension {dim} with repeated torus weights; submodule set may form a positive-dimensional family")]
    FamilyDetected { vertex: u32, degree: i64, dim: usize },

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

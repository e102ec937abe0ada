use thiserror::Error;

/// Errors raised by the geometry, solver and analysis pipelines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum GnpError {
    #[error("induced outer boundary self-intersects between segments {first} and {second}")]
    NonSimpleBoundary { first: usize, second: usize },

    #[error("profile has {profile} samples but the core has {core}")]
    SampleMismatch { core: usize, profile: usize },

    #[error("invalid thickness profile: {0}")]
    InvalidProfile(String),

    #[error("invalid convex body: {0}")]
    InvalidCore(String),

    #[error("point set is empty")]
    EmptySet,

    #[error("grids differ: {0}")]
    GridMismatch(String),

    #[error("linear system is singular (no interior unknowns)")]
    SingularSystem,

    #[error("iteration did not converge after {iterations} iterations (residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("level {t} is outside the admissible range [0, {limit})")]
    LevelOutOfRange { t: f64, limit: f64 },

    #[error("level set at t = {t} is degenerate (area {area:e})")]
    DegenerateSlice { t: f64, area: f64 },

    #[error("normal ray from core sample {index} never reaches level {t}")]
    RayMisses { index: usize, t: f64 },

    #[error("gradient magnitude {value:e} is below the floor {floor:e}")]
    VanishingGradient { value: f64, floor: f64 },

    #[error("shell between core and level set is empty")]
    EmptyShell,

    #[error("domain masks are not nested ({violations} nodes of the small domain lie outside the large one)")]
    InclusionViolated { violations: usize },

    #[error("realized domain #{index} is invalid: {reason}")]
    SequenceMember { index: usize, reason: String },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for GnpError {
    fn from(e: std::io::Error) -> Self {
        GnpError::Io(e.to_string())
    }
}

impl From<csv::Error> for GnpError {
    fn from(e: csv::Error) -> Self {
        GnpError::Io(e.to_string())
    }
}

impl From<serde_json::Error> for GnpError {
    fn from(e: serde_json::Error) -> Self {
        GnpError::Config(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, GnpError>;

//! Error taxonomy shared across the toolkit.

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// A parameter violated its documented range.
    #[error("domain error: {field}: {message}")]
    Domain { field: &'static str, message: String },

    /// Geometry failed the feasibility screen (degenerate chord, bad
    /// spanwise ordering, self-intersecting loft). Callers treat this as a
    /// filtered sample, not a fault.
    #[error("geometry infeasible: {0}")]
    GeometryInfeasible(String),

    /// Hydrodynamic evaluation failed (e.g. singular influence matrix).
    #[error("evaluation failed: {0}")]
    EvaluationFailed(String),

    /// The polar produced no sample with positive lift.
    #[error("no polar sample with positive lift")]
    NoPositiveLift,

    /// Mesh is not a closed orientable surface.
    #[error("mesh not watertight: {0}")]
    NonWatertight(String),

    /// Internal components do not fit inside the outer shell volume.
    #[error("infeasible packaging: internal volume exceeds shell volume by {excess} m^3")]
    InfeasiblePackaging { excess: f64 },

    /// Data filtering removed every record.
    #[error("ensemble empty after filtering: {0}")]
    EmptyAfterFilter(String),

    /// Eigen-solver failure, with conditioning diagnostics.
    #[error("eigen solve failed: {0}")]
    Eigen(String),

    /// Linear system is rank deficient.
    #[error("rank-deficient system: {0}; use a regularization weight mu > 0")]
    RankDeficient(String),

    /// Reduced-space bounds collapsed to a point.
    #[error("degenerate bounds: {0}")]
    DegenerateBounds(String),

    /// A Pareto scan or archive came out empty.
    #[error("empty front: {0}")]
    EmptyFront(String),

    /// Configuration is malformed or inconsistent.
    #[error("invalid config: {0}")]
    InvalidConfig(String),

    /// An artifact hash does not match the producing config.
    #[error("stale artifact: {0}")]
    StaleArtifact(String),

    /// External solver adapter failure (missing files, timeout, bad format).
    #[error("external solver adapter: {0}")]
    Adapter(String),

    /// Generic numerical failure.
    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("serialization: {0}")]
    Serde(String),
}

impl Error {
    pub fn domain(field: &'static str, message: impl Into<String>) -> Self {
        Error::Domain {
            field,
            message: message.into(),
        }
    }

    /// Process exit code per the CLI contract: 2 validation, 3 numerical.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Domain { .. } | Error::InvalidConfig(_) | Error::StaleArtifact(_) => 2,
            Error::Io(_) | Error::Serde(_) | Error::Adapter(_) => 2,
            _ => 3,
        }
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Serde(e.to_string())
    }
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("curvature radius {min_curvature:.6e} falls below the floor {floor:.6e}")]
    CurvatureFloorViolation { min_curvature: f64, floor: f64 },

    #[error("support function is not positive everywhere; origin is not interior")]
    OriginNotInterior,

    #[error("point is not strictly interior to the body")]
    NotInterior,

    #[error("random body generation failed after {attempts} rejections")]
    GenerationFailed { attempts: usize },

    #[error("point set is degenerate (fewer than 3 points or collinear)")]
    DegenerateSet,

    #[error("mesh contains a degenerate element (min quality {quality:.3e})")]
    MeshQualityFailure { quality: f64 },

    #[error("solver stage {stage} did not converge within {iterations} iterations (gradient norm {grad_norm:.3e})")]
    NonConvergence {
        stage: usize,
        iterations: usize,
        grad_norm: f64,
    },

    #[error("inward offset leaves the ring; ring is too thin for the requested offset")]
    OffsetOutsideRing,

    #[error("level {level} is outside the resolvable range (0, {max})")]
    LevelOutOfRange { level: f64, max: f64 },

    #[error("level {level} cannot be resolved by the mesh (needs at least {min_resolvable:.3e})")]
    LevelUnresolvable { level: f64, min_resolvable: f64 },

    #[error("|∂_t h| below 1e-8 at a grid point; level family is singular there")]
    SingularLevel,

    #[error("support-coordinate tables have mismatched grids")]
    GridMismatch,

    #[error("neighborhood parameter t = {t} breaks containment of the inner body")]
    NeighborhoodTooLarge { t: f64 },

    #[error("transported data point leaves the presolved ring")]
    DataOutOfPresolveRange,

    #[error("invalid problem: {0}")]
    InvalidProblem(String),

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

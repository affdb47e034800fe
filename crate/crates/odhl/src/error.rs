use std::path::PathBuf;

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("grid size must be a positive even integer, got {0}")]
    InvalidGridSize(usize),

    #[error("box length must be positive, got {0}")]
    InvalidBoxLength(f64),

    #[error("fields live on different grids: {0}x{0} (L={1}) vs {2}x{2} (L={3})")]
    GridMismatch(usize, f64, usize, f64),

    #[error("physical samples have shape {got:?}, grid expects {expected}x{expected}")]
    ShapeMismatch { expected: usize, got: (usize, usize) },

    #[error("negative-order derivative needs a mean-zero field (|mean coefficient| = {0:e})")]
    MeanMode(f64),

    #[error("dyadic block index {j} outside filter bank range [{j_min}, {j_max}]")]
    BlockOutOfRange { j: i32, j_min: i32, j_max: i32 },

    #[error("density too close to vacuum: min(1+rho) = {min_density} < floor {floor}")]
    VacuumProximity { min_density: f64, floor: f64 },

    #[error("initial amplitude {amplitude} drives density below floor; largest admissible amplitude ~ {max_amplitude:.3e}")]
    AmplitudeRejected { amplitude: f64, max_amplitude: f64 },

    #[error("state became non-finite at t = {t}")]
    BlowUp { t: f64 },

    #[error("eta = {eta} exceeds the coercivity threshold {eta_max} for this grid")]
    Coercivity { eta: f64, eta_max: f64 },

    #[error("config: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("snapshot: {0}")]
    Snapshot(String),

    #[error("series: {0}")]
    Series(String),

    #[error("fit: {0}")]
    Fit(String),
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

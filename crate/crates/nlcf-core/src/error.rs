//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("fields live on different grids")]
    GridMismatch,

    #[error("density 1+a = {value:.6e} <= 0 at grid point {index:?} (t = {time})")]
    NonPositiveDensity {
        index: Vec<usize>,
        value: f64,
        time: f64,
    },

    #[error("director has zero length at grid point {index:?}")]
    DegenerateDirector { index: Vec<usize> },

    #[error("velocity field is not divergence-free (|div| = {norm:.3e})")]
    NonSolenoidal { norm: f64 },

    #[error("time step {dt:.3e} exceeds CFL limit {dt_max:.3e} at t = {time}")]
    CflViolation { dt: f64, dt_max: f64, time: f64 },

    #[error("non-finite value in {what} at t = {time}")]
    NonFinite { what: String, time: f64 },

    #[error("dyadic block index {j} outside resolved range [{j_min}, {j_max}]")]
    BlockOutOfRange { j: i32, j_min: i32, j_max: i32 },

    #[error("config error at line {line}: {msg}")]
    Config { line: usize, msg: String },

    #[error("snapshot format error: {0}")]
    Snapshot(String),

    #[error("power-law fit: {0}")]
    Fit(String),

    #[error("validation failed: {0}")]
    Validation(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

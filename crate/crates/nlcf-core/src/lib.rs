//! Pseudo-spectral simulation and analysis toolkit for the compressible
//! flow of nematic liquid crystals and its incompressible (large bulk
//! viscosity) limit on the periodic torus `[0,2π)^n`, `n = 2, 3`.
//!
//! The crate is organised around a small set of layers:
//!
//! * [`grid`], [`field`], [`ops`] — periodic grids, Fourier-coefficient
//!   fields and exact spectral calculus (gradients, Helmholtz projectors,
//!   2/3-rule dealiasing).
//! * [`besov`], [`inequalities`] — a numerically faithful Littlewood–Paley
//!   decomposition, homogeneous Besov norms and empirical verification of
//!   the Bernstein / product / commutator / interpolation inequalities.
//! * [`physics`], [`integrator`] — right-hand sides for the compressible
//!   and incompressible systems and a stiff-capable exponential integrator
//!   with exact per-mode propagation of the damped acoustic block.
//! * [`diagnostics`], [`experiments`] — functionals along paired
//!   trajectories, blow-up monitors, decomposition residuals and the
//!   viscosity-sweep convergence-rate study.
//! * [`snapshot`], [`config`] — binary field snapshots and the plain-text
//!   run configuration format.

pub mod besov;
pub mod config;
pub mod diagnostics;
pub mod error;
pub mod experiments;
pub mod field;
pub mod grid;
pub mod inequalities;
pub mod integrator;
pub mod ops;
pub mod physics;
pub mod random;
pub mod snapshot;

pub use error::{Error, Result};
pub use field::{SpectralScalar, SpectralVector};
pub use grid::Grid;

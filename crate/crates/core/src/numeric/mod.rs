//! Finite-difference momentum-space laboratory.

mod cases;
mod grid;
mod ops;
mod realize;

use thiserror::Error;

pub use cases::{
    convergence, level_passes, residual_case, CaseId, LevelRow, Policy, ResidualReport, TestFamily, TestFunction,
    DEFAULT_PHASE, DEFAULT_SIGMA, EXACT_TOLERANCE, FINEST_TOLERANCE, LIMIT_TOLERANCE, MIN_NORM, ORDER_WINDOW,
};
pub use grid::{GridSpec, WaveFunction, MIN_MOMENTUM};
pub use ops::{apply, commutator_apply, derivative, Dispersion, OperatorDesc, Position};
pub use realize::{atom_operator, realize, OpTree};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumericError {
    #[error("grid comes within |p| = {min_norm:.4} of the origin (minimum {MIN_MOMENTUM})")]
    GridOrigin { min_norm: f64 },
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("test function {name} has interior norm {norm:e}")]
    DegenerateTestFunction { name: String, norm: f64 },
}

//! Trigonometric polynomials on 𝕋ᴺ: martingale structure, Hardy and
//! analyticity predicates, relabeling, and quadrature-based Jensen checks.

mod jensen;
mod poly;
mod quadrature;

use thiserror::Error;

use crate::lattice::IntVector;
use crate::order::OrderError;

pub use jensen::{
    jensen_check, p_mean_check, step_check, JensenReport, PMeanReport, StepReport, Verdict,
    LOG_TOLERANCE_FLOOR, P_MEAN_TOLERANCE,
};
pub use poly::{
    cond_expect, is_analytic, is_hardy, is_hardy_by_differences, is_hardy_by_support,
    martingale_differences, mdiff, random_hardy, relabel, TrigPoly, RANDOM_FREQUENCY_RADIUS,
};
pub use quadrature::{
    abs_pow_mean, grid_mean, log_abs_integral, QuadratureOptions, QuadratureResult, DEFAULT_FLOOR,
    MAX_GRID_POINTS,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TorusError {
    #[error("polynomial is identically zero")]
    ZeroPolynomial,
    #[error("polynomial is not a Hardy polynomial")]
    NotHardy,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("duplicate frequency {0}")]
    DuplicateFrequency(IntVector),
    #[error("index {index} out of range 0..={dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("exponent {0} outside (0, 1)")]
    InvalidExponent(f64),
    #[error("grid size {0} is below 2")]
    GridTooSmall(usize),
    #[error("grid of {grid} points on {axes} axes exceeds the point cap")]
    GridTooLarge { grid: usize, axes: usize },
    #[error(transparent)]
    Order(#[from] OrderError),
}

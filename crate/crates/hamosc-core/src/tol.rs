//! Central numerical thresholds.
//!
//! Every threshold that decides a *classification* (singular vs invertible,
//! Hermitian vs not, rank) lives here so the whole crate agrees on them.

/// Relative threshold below which an eigenvalue counts as zero:
/// `lambda_1 <= SINGULAR_REL * max(1, lambda_n)` marks a singular matrix.
pub const SINGULAR_REL: f64 = 1.0e-12;

/// Relative threshold for pivot magnitudes in rank-revealing elimination:
/// pivots `<= RANK_REL * max_abs(M)` are treated as zero.
pub const RANK_REL: f64 = 1.0e-10;

/// Default tolerance for Hermitian checks, scaled by `max(1, max_abs(M))`.
pub const HERMITIAN_REL: f64 = 1.0e-8;

/// Residual acceptance for linear matrix-equation solutions:
/// `residual <= RESIDUAL_REL * (1 + norm(rhs))`.
pub const RESIDUAL_REL: f64 = 1.0e-8;

/// Off-diagonal norm at which the Jacobi eigensolver declares convergence,
/// scaled by `max(1, max_abs(M))`.
pub const JACOBI_OFF_REL: f64 = 1.0e-13;

/// Sweep budget for the cyclic Jacobi eigensolver.
pub const JACOBI_MAX_SWEEPS: usize = 100;

/// Largest matrix dimension the dense kernels accept.
pub const MAX_DIM: usize = 16;

/// Largest dimension for general (non-normal) eigenvalue estimation.
pub const MAX_DIM_GENERAL_EIGEN: usize = 8;

/// Returns the singularity cutoff for a spectrum with largest eigenvalue `lambda_max`.
pub fn singular_cutoff(lambda_max: f64) -> f64 {
    SINGULAR_REL * lambda_max.abs().max(1.0)
}

/// Returns the Hermitian-check tolerance for a matrix with max-abs entry `scale`.
pub fn hermitian_tolerance(scale: f64) -> f64 {
    HERMITIAN_REL * scale.max(1.0)
}

//! Matrix exponential.

use super::{hermitian_eigen, C64, ComplexMatrix};
use crate::error::Result;

/// `exp(M)` by scaling-and-squaring with a truncated Taylor series on the
/// scaled matrix; Hermitian inputs instead go through the eigendecomposition.
pub fn matrix_exp(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    if m.is_hermitian(None) {
        let spec = hermitian_eigen(m, None)?;
        return Ok(spec.apply(f64::exp));
    }

    // scale M/2^s to norm <= 0.5, exponentiate by series, square s times
    let norm = m.max_abs() * m.dim() as f64;
    let s = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as u32
    } else {
        0
    };
    let scaled = m.scale(C64::new(0.5_f64.powi(s as i32), 0.0));

    let n = m.dim();
    let mut term = ComplexMatrix::identity(n)?;
    let mut sum = ComplexMatrix::identity(n)?;
    for k in 1..=24 {
        term = &term * &scaled;
        term = term.scale(C64::new(1.0 / k as f64, 0.0));
        sum = &sum + &term;
        if term.max_abs() < 1e-18 * sum.max_abs().max(1.0) {
            break;
        }
    }
    let mut result = sum;
    for _ in 0..s {
        result = &result * &result;
    }
    Ok(result)
}

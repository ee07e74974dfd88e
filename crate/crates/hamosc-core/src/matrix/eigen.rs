//! Hermitian eigendecomposition via cyclic Jacobi rotations.
//!
//! Each rotation removes one off-diagonal pair: the complex phase of the
//! pivot entry is absorbed first, then a real Jacobi rotation annihilates it.
//! For the dimensions this crate supports (<= 16) the cyclic sweep converges
//! well inside the fixed sweep budget.

use super::{C64, ComplexMatrix};
use crate::error::{Error, Result};
use crate::tol;

/// Result of a Hermitian eigendecomposition: `M = U diag(values) U*`,
/// eigenvalues ascending, eigenvectors as the columns of `U`.
#[derive(Debug, Clone)]
pub struct EigenSpectrum {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl EigenSpectrum {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn lambda_min(&self) -> f64 {
        self.values[0]
    }

    pub fn lambda_max(&self) -> f64 {
        *self.values.last().unwrap()
    }

    /// Singularity cutoff for this spectrum: eigenvalues at or below it count as zero.
    pub fn singular_cutoff(&self) -> f64 {
        tol::singular_cutoff(self.lambda_max())
    }

    /// True when the smallest eigenvalue magnitude falls below the cutoff.
    pub fn is_singular(&self) -> bool {
        self.values.iter().any(|v| v.abs() <= self.singular_cutoff())
    }

    /// Rebuilds `U f(diag) U*` for a real function of the eigenvalues.
    pub fn apply(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.dim();
        let u = &self.vectors;
        let mut out = ComplexMatrix::zeros(n).expect("dimension already validated");
        for j in 0..n {
            for k in 0..n {
                let mut acc = C64::new(0.0, 0.0);
                for m in 0..n {
                    acc += u[(j, m)] * f(self.values[m]) * u[(k, m)].conj();
                }
                out[(j, k)] = acc;
            }
        }
        out
    }

    /// Reconstructs the original matrix from the decomposition.
    pub fn reconstruct(&self) -> ComplexMatrix {
        self.apply(|x| x)
    }

    /// Moore-Penrose pseudoinverse: inverts eigenvalues above the cutoff, zeroes the rest.
    pub fn pseudo_inverse(&self) -> ComplexMatrix {
        let cut = self.singular_cutoff();
        self.apply(|x| if x.abs() > cut { 1.0 / x } else { 0.0 })
    }
}

/// Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.
///
/// The input must be Hermitian within `tolerance` (default: scale-aware);
/// the iteration itself runs on the exactly-Hermitian part `(M + M*)/2`.
pub fn hermitian_eigen(m: &ComplexMatrix, tolerance: Option<f64>) -> Result<EigenSpectrum> {
    m.require_hermitian(tolerance)?;
    let n = m.dim();
    let mut a = m.hermitian_part();
    let mut u = ComplexMatrix::identity(n)?;
    let scale = a.max_abs().max(1.0);
    let off_target = tol::JACOBI_OFF_REL * scale;

    let mut sweeps = 0usize;
    while off_norm(&a) > off_target {
        if sweeps >= tol::JACOBI_MAX_SWEEPS {
            return Err(Error::NoConvergence {
                what: "Jacobi eigensolver",
                iterations: sweeps,
                residual: off_norm(&a),
            });
        }
        for p in 0..n.saturating_sub(1) {
            for q in p + 1..n {
                rotate(&mut a, &mut u, p, q);
            }
        }
        sweeps += 1;
    }

    // diagonal of a Hermitian matrix is real; rounding leaves tiny imaginary dust
    let mut pairs: Vec<(f64, usize)> = (0..n).map(|j| (a[(j, j)].re, j)).collect();
    pairs.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());

    let values: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    let mut vectors = ComplexMatrix::zeros(n)?;
    for (new_col, &(_, old_col)) in pairs.iter().enumerate() {
        for j in 0..n {
            vectors[(j, new_col)] = u[(j, old_col)];
        }
    }
    Ok(EigenSpectrum { values, vectors })
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn lambda_min(m: &ComplexMatrix) -> Result<f64> {
    Ok(hermitian_eigen(m, None)?.lambda_min())
}

/// Largest eigenvalue of a Hermitian matrix.
pub fn lambda_max(m: &ComplexMatrix) -> Result<f64> {
    Ok(hermitian_eigen(m, None)?.lambda_max())
}

/// Principal square root of a positive semidefinite Hermitian matrix.
///
/// Eigenvalues inside the negative rounding band are clamped to zero; an
/// eigenvalue below `-cutoff` means the input is not PSD.
pub fn sqrt_psd(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let spec = hermitian_eigen(m, None)?;
    let cut = spec.singular_cutoff();
    if spec.lambda_min() < -cut {
        return Err(Error::NotPsd {
            lambda_min: spec.lambda_min(),
        });
    }
    Ok(spec.apply(|x| x.max(0.0).sqrt()))
}

fn off_norm(a: &ComplexMatrix) -> f64 {
    let n = a.dim();
    let mut s = 0.0;
    for j in 0..n {
        for k in 0..n {
            if j != k {
                s += a[(j, k)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// One two-sided Jacobi rotation annihilating the (p,q) entry of `a`,
/// accumulated into `u` (so that the original matrix equals `u a u*`).
fn rotate(a: &mut ComplexMatrix, u: &mut ComplexMatrix, p: usize, q: usize) {
    let n = a.dim();
    let apq = a[(p, q)];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let phase = apq / r; // e^{i theta}
    let alpha = a[(p, p)].re;
    let beta = a[(q, q)].re;
    // annihilation condition: c s (beta - alpha) + (c^2 - s^2) r = 0,
    // i.e. t^2 - 2 tau t - 1 = 0 for t = s/c; take the smaller root
    let tau = (beta - alpha) / (2.0 * r);
    let t = if tau >= 0.0 {
        -1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    let jp = C64::new(c, 0.0);
    let jq_p = phase.conj() * s; // J[q,p] = s e^{-i theta}
    let jq_q = phase.conj() * c; // J[q,q] = c e^{-i theta}

    // rows p and q: M <- J* M
    for k in 0..n {
        let mp = a[(p, k)];
        let mq = a[(q, k)];
        a[(p, k)] = jp * mp + phase * s * mq;
        a[(q, k)] = -s * mp + phase * c * mq;
    }
    // columns p and q: M <- M J
    for j in 0..n {
        let mp = a[(j, p)];
        let mq = a[(j, q)];
        a[(j, p)] = jp * mp + jq_p * mq;
        a[(j, q)] = -s * mp + jq_q * mq;
    }
    a[(p, q)] = C64::new(0.0, 0.0);
    a[(q, p)] = C64::new(0.0, 0.0);
    a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = C64::new(a[(q, q)].re, 0.0);

    // accumulate eigenvectors: U <- U J
    for j in 0..n {
        let up = u[(j, p)];
        let uq = u[(j, q)];
        u[(j, p)] = jp * up + jq_p * uq;
        u[(j, q)] = -s * up + jq_q * uq;
    }
}

//! Positive linear functionals on Hermitian matrices, the derived quantity
//! `nu_g`, and the entry-sum calculus (`Sum`, separator matrix).

use super::{hermitian_eigen, C64, ComplexMatrix};
use crate::error::{Error, Result};

/// Positive linear functional `g(M) = trace(W M)` with a Hermitian positive
/// semidefinite weight `W`. `normalized` records whether `trace(W) = 1`,
/// which the spectral bounds `lambda_1(D) <= g(D) <= lambda_n(D)` require;
/// the plain matrix trace (`W = I`) is deliberately allowed unnormalized.
#[derive(Debug, Clone)]
pub struct PositiveFunctional {
    weight: ComplexMatrix,
    normalized: bool,
}

impl PositiveFunctional {
    /// The unnormalized trace functional on `n x n` matrices (`W = I`).
    pub fn trace(n: usize) -> Result<Self> {
        Ok(Self {
            weight: ComplexMatrix::identity(n)?,
            normalized: n == 1,
        })
    }

    /// The normalized trace `g(M) = trace(M)/n`.
    pub fn trace_normalized(n: usize) -> Result<Self> {
        let w = ComplexMatrix::identity(n)?.scale(C64::new(1.0 / n as f64, 0.0));
        Ok(Self {
            weight: w,
            normalized: true,
        })
    }

    /// Functional with an explicit weight; `W` must be Hermitian, positive
    /// semidefinite and nonzero.
    pub fn from_weight(weight: ComplexMatrix) -> Result<Self> {
        weight.require_hermitian(None)?;
        let spec = hermitian_eigen(&weight, None)?;
        if spec.lambda_min() < -spec.singular_cutoff() {
            return Err(Error::NotPsd {
                lambda_min: spec.lambda_min(),
            });
        }
        let tr = weight.trace().re;
        if tr <= 0.0 {
            return Err(Error::NotPsd { lambda_min: 0.0 });
        }
        let normalized = (tr - 1.0).abs() <= 1e-9;
        Ok(Self { weight, normalized })
    }

    pub fn weight(&self) -> &ComplexMatrix {
        &self.weight
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn dim(&self) -> usize {
        self.weight.dim()
    }

    /// `g(M) = trace(W M)`; complex in general, real when `M` is Hermitian.
    pub fn apply(&self, m: &ComplexMatrix) -> Result<C64> {
        if m.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: m.dim(),
                context: "apply_functional",
            });
        }
        Ok((&self.weight * m).trace())
    }

    /// `g(M)` for Hermitian `M`, returned as a real number.
    pub fn apply_real(&self, m: &ComplexMatrix) -> Result<f64> {
        let v = self.apply(m)?;
        debug_assert!(
            v.im.abs() <= 1e-8 * (1.0 + v.re.abs()),
            "functional of a Hermitian matrix should be real, got {v}"
        );
        Ok(v.re)
    }
}

/// Applies the functional: `g(M) = trace(W M)`.
pub fn apply_functional(g: &PositiveFunctional, m: &ComplexMatrix) -> Result<C64> {
    g.apply(m)
}

/// `nu_g(B) = 0` when `B` is singular, otherwise `1 / g(B^{-1})`.
///
/// `B` must be Hermitian positive semidefinite; singularity is decided by
/// the spectrum's relative cutoff.
pub fn nu_g(g: &PositiveFunctional, b: &ComplexMatrix) -> Result<f64> {
    let spec = hermitian_eigen(b, None)?;
    let cut = spec.singular_cutoff();
    if spec.lambda_min() < -cut {
        return Err(Error::NotPsd {
            lambda_min: spec.lambda_min(),
        });
    }
    if spec.lambda_min() <= cut {
        return Ok(0.0);
    }
    let inv = spec.apply(|x| 1.0 / x);
    Ok(1.0 / g.apply_real(&inv)?)
}

/// `nu_0(B) = 0` when `B` is singular, otherwise `1 / trace(B^{-1})`.
pub fn nu_0(b: &ComplexMatrix) -> Result<f64> {
    let spec = hermitian_eigen(b, None)?;
    let cut = spec.singular_cutoff();
    if spec.lambda_min() < -cut {
        return Err(Error::NotPsd {
            lambda_min: spec.lambda_min(),
        });
    }
    if spec.lambda_min() <= cut {
        return Ok(0.0);
    }
    Ok(1.0 / spec.values.iter().map(|v| 1.0 / v).sum::<f64>())
}

/// Sum of all matrix entries.
pub fn sum_entries(m: &ComplexMatrix) -> C64 {
    m.entries().iter().sum()
}

/// Separator of `L`: the Hermitian matrix `H` with
///
/// * `h_kk = -sum_j Re(l_jk)` on the diagonal,
/// * last-row entries `h_nk = i (Im(Sum L)/n - sum_j Im(l_jk))` for `k < n`,
///   mirrored conjugately into the last column,
/// * zeros elsewhere.
///
/// Every column of `L + Sep(L)` then sums to the constant `i Im(Sum L)/n`,
/// which gives the identity `Sum((L + Sep L) U) = (i Im(Sum L)/n) Sum(U)`.
pub fn separator(l: &ComplexMatrix) -> ComplexMatrix {
    let n = l.dim();
    let mut col_re = vec![0.0; n];
    let mut col_im = vec![0.0; n];
    for k in 0..n {
        for j in 0..n {
            col_re[k] += l[(j, k)].re;
            col_im[k] += l[(j, k)].im;
        }
    }
    let total_im: f64 = col_im.iter().sum();
    let mut h = ComplexMatrix::zeros(n).expect("same dimension as a valid matrix");
    for k in 0..n {
        h[(k, k)] = C64::new(-col_re[k], 0.0);
    }
    for k in 0..n - 1 {
        let v = total_im / n as f64 - col_im[k];
        h[(n - 1, k)] = C64::new(0.0, v);
        h[(k, n - 1)] = C64::new(0.0, -v);
    }
    h
}

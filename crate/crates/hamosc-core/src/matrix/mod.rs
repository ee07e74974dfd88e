//! Dense complex matrices and the Hermitian machinery built on them.
//!
//! The systems this crate studies are small (dimension 1..=16), so all
//! kernels are direct dense algorithms: LU with partial pivoting for
//! determinants and inverses, cyclic Jacobi rotations for Hermitian
//! eigendecompositions, scaling-and-squaring for the matrix exponential.

mod eigen;
mod expm;
mod functional;

pub use eigen::{hermitian_eigen, lambda_max, lambda_min, sqrt_psd, EigenSpectrum};
pub use expm::matrix_exp;
pub use functional::{apply_functional, nu_0, nu_g, separator, sum_entries, PositiveFunctional};

use crate::error::{Error, Result};
use crate::tol;
use num_complex::Complex;
use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

/// Complex scalar used throughout the crate.
pub type C64 = Complex<f64>;

/// Shorthand for a complex scalar.
pub fn c64(re: f64, im: f64) -> C64 {
    Complex::new(re, im)
}

/// Square complex matrix in row-major storage.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    n: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    /// Zero matrix of dimension `n`. Dimensions outside `1..=16` are rejected.
    pub fn zeros(n: usize) -> Result<Self> {
        if n == 0 || n > tol::MAX_DIM {
            return Err(Error::UnsupportedDimension {
                got: n,
                max: tol::MAX_DIM,
                context: "ComplexMatrix",
            });
        }
        Ok(Self {
            n,
            data: vec![C64::new(0.0, 0.0); n * n],
        })
    }

    /// Identity matrix of dimension `n`.
    pub fn identity(n: usize) -> Result<Self> {
        let mut m = Self::zeros(n)?;
        for j in 0..n {
            m[(j, j)] = C64::new(1.0, 0.0);
        }
        Ok(m)
    }

    /// Builds a matrix by evaluating `f(row, col)` for each entry.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> C64) -> Result<Self> {
        let mut m = Self::zeros(n)?;
        for j in 0..n {
            for k in 0..n {
                m[(j, k)] = f(j, k);
            }
        }
        Ok(m)
    }

    /// Builds a matrix from nested rows of complex entries.
    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let n = rows.len();
        let mut m = Self::zeros(n)?;
        for (j, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Schema(format!(
                    "row {j} has {} entries, expected {n}",
                    row.len()
                )));
            }
            for (k, v) in row.iter().enumerate() {
                m[(j, k)] = *v;
            }
        }
        Ok(m)
    }

    /// Builds a real matrix from nested rows of `f64`.
    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let complex: Vec<Vec<C64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| C64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&complex)
    }

    /// Diagonal matrix with the given (complex) diagonal.
    pub fn diagonal(diag: &[C64]) -> Result<Self> {
        let mut m = Self::zeros(diag.len())?;
        for (j, v) in diag.iter().enumerate() {
            m[(j, j)] = *v;
        }
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Raw row-major entries.
    pub fn entries(&self) -> &[C64] {
        &self.data
    }

    /// Conjugate transpose `M*`.
    pub fn adjoint(&self) -> Self {
        let mut out = self.clone();
        for j in 0..self.n {
            for k in 0..self.n {
                out[(j, k)] = self[(k, j)].conj();
            }
        }
        out
    }

    pub fn trace(&self) -> C64 {
        (0..self.n).map(|j| self[(j, j)]).sum()
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Frobenius norm.
    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Entrywise scaling by a complex factor.
    pub fn scale(&self, factor: C64) -> Self {
        let mut out = self.clone();
        for v in &mut out.data {
            *v *= factor;
        }
        out
    }

    /// `max |M - M*|` over all entries.
    pub fn hermitian_residual(&self) -> f64 {
        let mut r: f64 = 0.0;
        for j in 0..self.n {
            for k in j..self.n {
                r = r.max((self[(j, k)] - self[(k, j)].conj()).norm());
            }
        }
        r
    }

    /// Hermitian check against an explicit tolerance, or the default
    /// scale-aware tolerance when `tolerance` is `None`.
    pub fn is_hermitian(&self, tolerance: Option<f64>) -> bool {
        let tol = tolerance.unwrap_or_else(|| tol::hermitian_tolerance(self.max_abs()));
        self.hermitian_residual() <= tol
    }

    /// Errors with [`Error::NotHermitian`] unless the matrix is Hermitian.
    pub fn require_hermitian(&self, tolerance: Option<f64>) -> Result<()> {
        let tol = tolerance.unwrap_or_else(|| tol::hermitian_tolerance(self.max_abs()));
        let residual = self.hermitian_residual();
        if residual <= tol {
            Ok(())
        } else {
            Err(Error::NotHermitian {
                residual,
                tolerance: tol,
            })
        }
    }

    /// Largest imaginary-part magnitude; zero for real matrices.
    pub fn max_imag(&self) -> f64 {
        self.data.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
    }

    /// Hermitian part `(M + M*)/2`.
    pub fn hermitian_part(&self) -> Self {
        let adj = self.adjoint();
        let mut out = self.clone();
        for (v, a) in out.data.iter_mut().zip(adj.data.iter()) {
            *v = (*v + *a) * 0.5;
        }
        out
    }

    /// Anti-Hermitian part `(M - M*)/2`.
    pub fn anti_hermitian_part(&self) -> Self {
        let adj = self.adjoint();
        let mut out = self.clone();
        for (v, a) in out.data.iter_mut().zip(adj.data.iter()) {
            *v = (*v - *a) * 0.5;
        }
        out
    }

    fn require_same_dim(&self, other: &Self, context: &'static str) -> Result<()> {
        if self.n == other.n {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                left: self.n,
                right: other.n,
                context,
            })
        }
    }

    /// Matrix product; errors on dimension mismatch.
    pub fn mul_checked(&self, rhs: &Self, context: &'static str) -> Result<Self> {
        self.require_same_dim(rhs, context)?;
        Ok(self * rhs)
    }

    /// Determinant via LU with partial pivoting. Singular matrices return 0.
    pub fn det(&self) -> C64 {
        match Lu::decompose(self) {
            Some(lu) => lu.det(),
            None => C64::new(0.0, 0.0),
        }
    }

    /// Inverse via LU; errors when a pivot falls below the singularity cutoff.
    pub fn inverse(&self) -> Result<Self> {
        let lu = Lu::decompose(self).ok_or(Error::NumericalBreakdown {
            t: f64::NAN,
            detail: "LU decomposition degenerate".into(),
        })?;
        if lu.near_singular() {
            return Err(Error::NotPositiveDefinite {
                lambda_min: lu.min_pivot(),
            });
        }
        let id = Self::identity(self.n)?;
        lu.solve_matrix(&id)
    }

    /// Solves `self * X = rhs` via LU with partial pivoting.
    pub fn solve(&self, rhs: &Self) -> Result<Self> {
        self.require_same_dim(rhs, "solve")?;
        let lu = Lu::decompose(self).ok_or(Error::NumericalBreakdown {
            t: f64::NAN,
            detail: "LU decomposition degenerate".into(),
        })?;
        if lu.near_singular() {
            return Err(Error::NotPositiveDefinite {
                lambda_min: lu.min_pivot(),
            });
        }
        lu.solve_matrix(rhs)
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    fn index(&self, (row, col): (usize, usize)) -> &C64 {
        &self.data[row * self.n + col]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (row, col): (usize, usize)) -> &mut C64 {
        &mut self.data[row * self.n + col]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        debug_assert_eq!(self.n, rhs.n);
        let mut out = self.clone();
        for (v, r) in out.data.iter_mut().zip(rhs.data.iter()) {
            *v += *r;
        }
        out
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        debug_assert_eq!(self.n, rhs.n);
        let mut out = self.clone();
        for (v, r) in out.data.iter_mut().zip(rhs.data.iter()) {
            *v -= *r;
        }
        out
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        let mut out = self.clone();
        for v in &mut out.data {
            *v = -*v;
        }
        out
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        debug_assert_eq!(self.n, rhs.n);
        let n = self.n;
        let mut out = ComplexMatrix {
            n,
            data: vec![C64::new(0.0, 0.0); n * n],
        };
        for j in 0..n {
            for m in 0..n {
                let a = self[(j, m)];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for k in 0..n {
                    out.data[j * n + k] += a * rhs.data[m * n + k];
                }
            }
        }
        out
    }
}

impl fmt::Display for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for j in 0..self.n {
            write!(f, "[")?;
            for k in 0..self.n {
                let z = self[(j, k)];
                if k > 0 {
                    write!(f, ", ")?;
                }
                if z.im == 0.0 {
                    write!(f, "{:.6}", z.re)?;
                } else {
                    write!(f, "{:.6}{:+.6}i", z.re, z.im)?;
                }
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

/// LU factorization with partial pivoting.
struct Lu {
    n: usize,
    lu: Vec<C64>,
    piv: Vec<usize>,
    swaps: usize,
}

impl Lu {
    fn decompose(m: &ComplexMatrix) -> Option<Self> {
        let n = m.n;
        let mut lu = m.data.clone();
        let mut piv: Vec<usize> = (0..n).collect();
        let mut swaps = 0usize;
        for col in 0..n {
            let mut best = col;
            let mut best_mag = lu[col * n + col].norm();
            for row in col + 1..n {
                let mag = lu[row * n + col].norm();
                if mag > best_mag {
                    best = row;
                    best_mag = mag;
                }
            }
            if best != col {
                for k in 0..n {
                    lu.swap(col * n + k, best * n + k);
                }
                piv.swap(col, best);
                swaps += 1;
            }
            let pivot = lu[col * n + col];
            if pivot.norm() == 0.0 {
                continue;
            }
            for row in col + 1..n {
                let factor = lu[row * n + col] / pivot;
                lu[row * n + col] = factor;
                for k in col + 1..n {
                    let sub = factor * lu[col * n + k];
                    lu[row * n + k] -= sub;
                }
            }
        }
        Some(Self { n, lu, piv, swaps })
    }

    fn det(&self) -> C64 {
        let mut d = C64::new(if self.swaps % 2 == 0 { 1.0 } else { -1.0 }, 0.0);
        for j in 0..self.n {
            d *= self.lu[j * self.n + j];
        }
        d
    }

    fn min_pivot(&self) -> f64 {
        (0..self.n)
            .map(|j| self.lu[j * self.n + j].norm())
            .fold(f64::INFINITY, f64::min)
    }

    fn near_singular(&self) -> bool {
        let scale = (0..self.n)
            .map(|j| self.lu[j * self.n + j].norm())
            .fold(0.0, f64::max)
            .max(1.0);
        self.min_pivot() <= tol::SINGULAR_REL * scale
    }

    fn solve_matrix(&self, rhs: &ComplexMatrix) -> Result<ComplexMatrix> {
        let n = self.n;
        let mut x = ComplexMatrix::zeros(n)?;
        // permute rhs rows, then forward/back substitution per column
        for col in 0..n {
            let mut y = vec![C64::new(0.0, 0.0); n];
            for row in 0..n {
                y[row] = rhs[(self.piv[row], col)];
            }
            for row in 0..n {
                for k in 0..row {
                    let sub = self.lu[row * n + k] * y[k];
                    y[row] -= sub;
                }
            }
            for row in (0..n).rev() {
                for k in row + 1..n {
                    let sub = self.lu[row * n + k] * y[k];
                    y[row] -= sub;
                }
                y[row] /= self.lu[row * n + row];
            }
            for row in 0..n {
                x[(row, col)] = y[row];
            }
        }
        Ok(x)
    }
}

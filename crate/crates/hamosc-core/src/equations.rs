//! Solvers and solvability tests for the linear matrix equations behind
//! coefficient constructions: `B X = A`, the weighted equation
//! `√B · X · G = G`, the two-sided equation `B X + X B = R`, and
//! `B X = Sep(·)` with its special-case dispatch.
//!
//! Solvability of the one-sided equations is decided by comparing the rank
//! of the coefficient with the rank of the augmented matrix; non-unique
//! solutions are reported as the minimum-norm representative so results are
//! reproducible.

use crate::dsl::{eval_expr, Expr, MatrixFunction};
use crate::error::{Error, Result};
use crate::matrix::{
    c64, hermitian_eigen, matrix_exp, separator, sqrt_psd, ComplexMatrix, C64,
};
use crate::calculus::Quadrature;
use crate::tol;

/// How a linear matrix equation was resolved.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    Unique,
    NonUniqueSolutionReturned,
    NoSolution,
}

/// Result of one matrix-equation solve, including the rank evidence used
/// for the solvability decision.
#[derive(Debug, Clone)]
pub struct SolveReport {
    pub status: SolveStatus,
    pub solution: Option<ComplexMatrix>,
    pub residual: f64,
    /// (rank of the coefficient, rank of the augmented matrix).
    pub rank_data: (usize, usize),
    /// Which construction produced the solution.
    pub detail: String,
}

impl SolveReport {
    fn no_solution(rank_data: (usize, usize), detail: impl Into<String>) -> Self {
        Self {
            status: SolveStatus::NoSolution,
            solution: None,
            residual: f64::INFINITY,
            rank_data,
            detail: detail.into(),
        }
    }
}

// ---------------------------------------------------------------------------
// Rank and pseudo-inverse
// ---------------------------------------------------------------------------

/// Numerical rank of a rectangular array by complete-pivot elimination with
/// threshold `1e-10 * max|entry|`.
fn rank_rect(rows: usize, cols: usize, data: &mut [C64]) -> usize {
    let scale = data.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return 0;
    }
    let threshold = tol::RANK_REL * scale;
    let steps = rows.min(cols);
    let mut col_perm: Vec<usize> = (0..cols).collect();
    let at = |data: &[C64], perm: &[usize], i: usize, j: usize| data[i * cols + perm[j]];
    for k in 0..steps {
        let mut best = (k, k, 0.0);
        for i in k..rows {
            for j in k..cols {
                let v = at(data, &col_perm, i, j).norm();
                if v > best.2 {
                    best = (i, j, v);
                }
            }
        }
        if best.2 <= threshold {
            return k;
        }
        if best.0 != k {
            for j in 0..cols {
                data.swap(best.0 * cols + j, k * cols + j);
            }
        }
        col_perm.swap(best.1, k);
        let pivot = at(data, &col_perm, k, k);
        for i in k + 1..rows {
            let factor = at(data, &col_perm, i, k) / pivot;
            for j in k..cols {
                let sub = factor * at(data, &col_perm, k, j);
                data[i * cols + col_perm[j]] -= sub;
            }
        }
    }
    steps
}

/// Numerical rank of a square matrix.
pub fn matrix_rank(m: &ComplexMatrix) -> usize {
    let n = m.dim();
    let mut data = m.entries().to_vec();
    rank_rect(n, n, &mut data)
}

/// Ranks of a coefficient matrix and of the augmented matrix `(B | A)`.
pub fn augmented_rank(b: &ComplexMatrix, a: &ComplexMatrix) -> (usize, usize) {
    let n = b.dim();
    let mut aug = vec![c64(0.0, 0.0); n * 2 * n];
    for i in 0..n {
        for j in 0..n {
            aug[i * 2 * n + j] = b[(i, j)];
            aug[i * 2 * n + n + j] = a[(i, j)];
        }
    }
    (matrix_rank(b), rank_rect(n, 2 * n, &mut aug))
}

/// Moore–Penrose pseudo-inverse. Hermitian inputs go through their own
/// eigendecomposition; general inputs use `(M*M)⁺ M*`.
pub fn pseudo_inverse(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    if m.is_hermitian(None) {
        return Ok(hermitian_eigen(m, None)?.pseudo_inverse());
    }
    let mtm = &m.adjoint() * m;
    let spec = hermitian_eigen(&mtm, Some(tol::hermitian_tolerance(mtm.max_abs())))?;
    Ok(&spec.pseudo_inverse() * &m.adjoint())
}

fn residual_of(lhs: &ComplexMatrix, rhs: &ComplexMatrix) -> f64 {
    (lhs - rhs).max_abs()
}

fn residual_ok(residual: f64, rhs: &ComplexMatrix) -> bool {
    residual <= tol::RESIDUAL_REL * (1.0 + rhs.max_abs())
}

// ---------------------------------------------------------------------------
// B X = A
// ---------------------------------------------------------------------------

/// Solves `B X = A`. Solvability is the rank test
/// `rank B = rank (B | A)`; singular-but-consistent systems return the
/// minimum-norm solution.
pub fn solve_bx_eq_a(b: &ComplexMatrix, a: &ComplexMatrix) -> Result<SolveReport> {
    if b.dim() != a.dim() {
        return Err(Error::DimensionMismatch {
            left: b.dim(),
            right: a.dim(),
            context: "solve_bx_eq_a",
        });
    }
    let n = b.dim();
    let rank_data = augmented_rank(b, a);
    if rank_data.0 != rank_data.1 {
        return Ok(SolveReport::no_solution(rank_data, "rank test failed"));
    }
    let (x, detail) = if rank_data.0 == n {
        (&b.inverse()? * a, "inverse".to_string())
    } else {
        (&pseudo_inverse(b)? * a, "minimum-norm".to_string())
    };
    let residual = residual_of(&(b * &x), a);
    if !residual_ok(residual, a) {
        return Ok(SolveReport::no_solution(
            rank_data,
            format!("rank test passed but residual {residual:.3e} rejected"),
        ));
    }
    Ok(SolveReport {
        status: if rank_data.0 == n {
            SolveStatus::Unique
        } else {
            SolveStatus::NonUniqueSolutionReturned
        },
        solution: Some(x),
        residual,
        rank_data,
        detail,
    })
}

// ---------------------------------------------------------------------------
// √B · X · G = G
// ---------------------------------------------------------------------------

/// `√B(t)` together with its derivative, and the path that produced them.
#[derive(Debug, Clone)]
pub struct SqrtBAt {
    pub value: ComplexMatrix,
    pub derivative: ComplexMatrix,
    pub path: &'static str,
}

/// Evaluates `√B` and `(√B)′` at `t`: symbolically for diagonal expression
/// matrices, exactly for constant matrices, and by central differences with
/// step `1e-5` otherwise.
pub fn sqrt_b_at(b: &MatrixFunction, t: f64) -> Result<SqrtBAt> {
    if let Some(sq) = b.symbolic_diagonal_sqrt() {
        return Ok(SqrtBAt {
            value: sq.eval(t)?,
            derivative: sq.diff().eval(t)?,
            path: "symbolic diagonal",
        });
    }
    let value = sqrt_psd(&b.eval(t)?)?;
    if b.is_constant() {
        return Ok(SqrtBAt {
            derivative: ComplexMatrix::zeros(value.dim())?,
            value,
            path: "constant",
        });
    }
    let h = 1e-5;
    let derivative = match (b.eval(t - h), b.eval(t + h)) {
        (Ok(lo), Ok(hi)) => (&sqrt_psd(&hi)? - &sqrt_psd(&lo)?).scale(c64(0.5 / h, 0.0)),
        _ => {
            let hi = sqrt_psd(&b.eval(t + h)?)?;
            (&hi - &value).scale(c64(1.0 / h, 0.0))
        }
    };
    Ok(SqrtBAt {
        value,
        derivative,
        path: "central difference",
    })
}

/// Solves `√B · X · G = G` at time `t`, where `G = A·√B − (√B)′`.
///
/// The solvability test is `rank √B = rank (√B | G)`; the minimum-norm
/// solution is `√B⁺ · G · G⁺`, and the residual is reported on the full
/// equation.
pub fn solve_sqrt_b_equation(b: &MatrixFunction, a: &MatrixFunction, t: f64) -> Result<SolveReport> {
    let sq = sqrt_b_at(b, t)?;
    let a_t = a.eval(t)?;
    let g = &(&a_t * &sq.value) - &sq.derivative;
    let n = g.dim();

    let rank_data = augmented_rank(&sq.value, &g);
    if rank_data.0 != rank_data.1 {
        return Ok(SolveReport::no_solution(
            rank_data,
            format!("rank test failed (sqrt path: {})", sq.path),
        ));
    }
    let g_pinv = pseudo_inverse(&g)?;
    let x = &(&pseudo_inverse(&sq.value)? * &g) * &g_pinv;
    let lhs = &(&sq.value * &x) * &g;
    let residual = residual_of(&lhs, &g);
    if !residual_ok(residual, &g) {
        return Ok(SolveReport::no_solution(
            rank_data,
            format!("residual {residual:.3e} rejected (sqrt path: {})", sq.path),
        ));
    }
    let unique = rank_data.0 == n && matrix_rank(&g) == n;
    Ok(SolveReport {
        status: if unique {
            SolveStatus::Unique
        } else {
            SolveStatus::NonUniqueSolutionReturned
        },
        solution: Some(x),
        residual,
        rank_data,
        detail: format!("sqrt path: {}", sq.path),
    })
}

// ---------------------------------------------------------------------------
// B X + X B = R
// ---------------------------------------------------------------------------

/// Solves the two-sided equation `B X + X B = R` for Hermitian `B` and `R`
/// through the eigenbasis of `B`: entries divide by `b_j + b_k`, a vanishing
/// denominator is an obstruction unless the transformed right side also
/// vanishes there, and the returned solution is Hermitian.
pub fn solve_lyapunov(b: &ComplexMatrix, r: &ComplexMatrix) -> Result<SolveReport> {
    b.require_hermitian(None)?;
    r.require_hermitian(None)?;
    if b.dim() != r.dim() {
        return Err(Error::DimensionMismatch {
            left: b.dim(),
            right: r.dim(),
            context: "solve_lyapunov",
        });
    }
    let n = b.dim();
    let spec = hermitian_eigen(b, None)?;
    let u = &spec.vectors;
    let r_tilde = &(&u.adjoint() * r) * u;
    let cutoff = spec.singular_cutoff();
    let obstruction_tol = tol::RESIDUAL_REL * (1.0 + r.max_abs());

    let mut x_tilde = ComplexMatrix::zeros(n)?;
    let mut free = 0usize;
    let mut obstructed = 0usize;
    for j in 0..n {
        for k in 0..n {
            let denom = spec.values[j] + spec.values[k];
            if denom.abs() <= cutoff {
                if r_tilde[(j, k)].norm() > obstruction_tol {
                    obstructed += 1;
                } else {
                    free += 1;
                }
            } else {
                x_tilde[(j, k)] = r_tilde[(j, k)] / c64(denom, 0.0);
            }
        }
    }
    let rank_data = (n * n - free - obstructed, n * n - free);
    if obstructed > 0 {
        return Ok(SolveReport::no_solution(
            rank_data,
            format!("{obstructed} vanishing denominators with nonzero right side"),
        ));
    }
    let x = &(u * &x_tilde) * &u.adjoint();
    let x = x.hermitian_part();
    let lhs = &(b * &x) + &(&x * b);
    let residual = residual_of(&lhs, r);
    Ok(SolveReport {
        status: if free == 0 {
            SolveStatus::Unique
        } else {
            SolveStatus::NonUniqueSolutionReturned
        },
        solution: Some(x),
        residual,
        rank_data,
        detail: "eigenbasis division".into(),
    })
}

/// Solves `B X + X B = R` by numerical quadrature of
/// `∫₀^∞ e^(−τB) R e^(−τB) dτ`, truncated where the integrand's slowest
/// mode has decayed below `e^(−23)`. Valid for `B > 0`, and for `B ≥ 0`
/// when the transformed right side vanishes on the kernel.
pub fn lyapunov_by_quadrature(
    b: &ComplexMatrix,
    r: &ComplexMatrix,
    tau_max: Option<f64>,
    quad: &Quadrature,
) -> Result<ComplexMatrix> {
    b.require_hermitian(None)?;
    r.require_hermitian(None)?;
    let n = b.dim();
    let spec = hermitian_eigen(b, None)?;
    let cutoff = spec.singular_cutoff();
    if spec.lambda_min() < -cutoff {
        return Err(Error::NotPositiveDefinite {
            lambda_min: spec.lambda_min(),
        });
    }
    let positive: Vec<f64> = spec.values.iter().copied().filter(|&v| v > cutoff).collect();
    if positive.len() < n {
        // Kernel directions never decay: the transformed right side must
        // vanish on the kernel block for the integral to converge.
        let r_tilde = &(&spec.vectors.adjoint() * r) * &spec.vectors;
        let kernel = n - positive.len();
        let bad = (0..kernel)
            .flat_map(|j| (0..kernel).map(move |k| (j, k)))
            .map(|(j, k)| r_tilde[(j, k)].norm())
            .fold(0.0, f64::max);
        if bad > tol::RESIDUAL_REL * (1.0 + r.max_abs()) {
            return Err(Error::NotPositiveDefinite {
                lambda_min: spec.lambda_min(),
            });
        }
        if positive.is_empty() {
            return ComplexMatrix::zeros(n);
        }
    }
    let lambda_slow = positive.iter().copied().fold(f64::INFINITY, f64::min);
    let tau_end = tau_max.unwrap_or_else(|| (23.0 / lambda_slow).max(50.0));
    let (h, _) = quad.integrate_matrix(
        |tau| {
            let decay = matrix_exp(&b.scale(c64(-tau, 0.0)))?;
            Ok(&(&decay * r) * &decay)
        },
        0.0,
        tau_end,
        n,
    )?;
    Ok(h.hermitian_part())
}

/// Solves `B X + X B = S + 2μI` for a rank-deficient Hermitian `B ≥ 0`
/// (rank at least `n−1`), choosing the real shift `μ` that removes the
/// kernel obstruction. Full-rank `B` delegates with `μ = 0`.
pub fn lyapunov_with_shift(b: &ComplexMatrix, s: &ComplexMatrix) -> Result<(f64, SolveReport)> {
    b.require_hermitian(None)?;
    s.require_hermitian(None)?;
    let n = b.dim();
    let spec = hermitian_eigen(b, None)?;
    let cutoff = spec.singular_cutoff();
    if spec.lambda_min() < -cutoff {
        return Err(Error::NotPsd {
            lambda_min: spec.lambda_min(),
        });
    }
    let rank = spec.values.iter().filter(|&&v| v > cutoff).count();
    if rank + 1 < n {
        return Err(Error::RankTooLow {
            rank,
            n,
            need: n - 1,
        });
    }
    if rank == n {
        return Ok((0.0, solve_lyapunov(b, s)?));
    }
    // Transformed right side must vanish at the kernel diagonal entry; the
    // shift is chosen to cancel it exactly.
    let u = &spec.vectors;
    let s_tilde = &(&u.adjoint() * s) * u;
    let mu = -0.5 * s_tilde[(0, 0)].re;
    let shifted = s + &ComplexMatrix::identity(n)?.scale(c64(2.0 * mu, 0.0));
    Ok((mu, solve_lyapunov(b, &shifted)?))
}

// ---------------------------------------------------------------------------
// B X = Sep(αA + βA* + γI)
// ---------------------------------------------------------------------------

/// Least-squares proportionality factor `σ` with `target ≈ σ · pattern`,
/// or `None` when the fit residual is not negligible.
fn proportionality(target: &ComplexMatrix, pattern: &ComplexMatrix) -> Option<f64> {
    let denom: f64 = pattern.entries().iter().map(|z| z.norm_sqr()).sum();
    if denom <= 0.0 {
        return None;
    }
    let num: C64 = pattern
        .entries()
        .iter()
        .zip(target.entries())
        .map(|(p, t)| p.conj() * t)
        .sum();
    let sigma = num.re / denom;
    if sigma.abs() <= tol::RANK_REL {
        return None;
    }
    let residual = (target - &pattern.scale(c64(sigma, 0.0))).max_abs();
    if residual <= 1e-12 * (1.0 + target.max_abs()) {
        Some(sigma)
    } else {
        None
    }
}

/// Attempts the block-diagonal construction: `B` must vanish on a set of
/// rows/columns and be positive definite on the rest, `S` must be diagonal,
/// zero on `B`'s kernel rows, and produce a Hermitian quotient.
fn try_block_diagonal(b: &ComplexMatrix, s: &ComplexMatrix) -> Result<Option<ComplexMatrix>> {
    let n = b.dim();
    let scale_b = b.max_abs().max(1.0);
    let scale_s = s.max_abs().max(1.0);
    let is_zero_line = |i: usize| {
        (0..n).all(|j| {
            b[(i, j)].norm() <= tol::RANK_REL * scale_b && b[(j, i)].norm() <= tol::RANK_REL * scale_b
        })
    };
    let diag_s = (0..n).all(|j| {
        (0..n).all(|k| j == k || s[(j, k)].norm() <= tol::RANK_REL * scale_s)
    });
    if !diag_s {
        return Ok(None);
    }
    let live: Vec<usize> = (0..n).filter(|&i| !is_zero_line(i)).collect();
    for i in 0..n {
        if !live.contains(&i) && s[(i, i)].norm() > tol::RANK_REL * scale_s {
            return Ok(None);
        }
    }
    if live.is_empty() {
        return Ok(Some(ComplexMatrix::zeros(n)?));
    }
    let m = live.len();
    let mut b_live = ComplexMatrix::zeros(m)?;
    let mut s_live = ComplexMatrix::zeros(m)?;
    for (p, &i) in live.iter().enumerate() {
        for (q, &j) in live.iter().enumerate() {
            b_live[(p, q)] = b[(i, j)];
            s_live[(p, q)] = s[(i, j)];
        }
    }
    let spec = hermitian_eigen(&b_live, None)?;
    if spec.lambda_min() <= spec.singular_cutoff() {
        return Ok(None);
    }
    let x_live = &b_live.inverse()? * &s_live;
    if x_live.hermitian_residual() > tol::hermitian_tolerance(x_live.max_abs()) {
        return Ok(None);
    }
    let x_live = x_live.hermitian_part();
    let mut x = ComplexMatrix::zeros(n)?;
    for (p, &i) in live.iter().enumerate() {
        for (q, &j) in live.iter().enumerate() {
            x[(i, j)] = x_live[(p, q)];
        }
    }
    Ok(Some(x))
}

/// Dispatches `B X = S` (with `S = Sep(αA + βA* + γI)`) through the special
/// constructions in a fixed order — zero right side, `B` proportional to
/// `S`, `B` proportional to `√S`, block-diagonal — falling back to the
/// general rank-test solve with a Hermitian-projection filter.
pub fn solve_separator_system(b: &ComplexMatrix, s: &ComplexMatrix) -> Result<SolveReport> {
    let n = b.dim();
    let full_rank = matrix_rank(b) == n;
    let status_for = |unique: bool| {
        if unique {
            SolveStatus::Unique
        } else {
            SolveStatus::NonUniqueSolutionReturned
        }
    };

    // Zero right side: X = 0.
    if s.max_abs() <= tol::RANK_REL * (1.0 + b.max_abs()) {
        return Ok(SolveReport {
            status: status_for(full_rank),
            solution: Some(ComplexMatrix::zeros(n)?),
            residual: 0.0,
            rank_data: augmented_rank(b, s),
            detail: "zero right side".into(),
        });
    }

    // B = σ·S: X = I/σ.
    if let Some(sigma) = proportionality(b, s) {
        let x = ComplexMatrix::identity(n)?.scale(c64(1.0 / sigma, 0.0));
        let residual = residual_of(&(b * &x), s);
        if residual_ok(residual, s) {
            return Ok(SolveReport {
                status: status_for(full_rank),
                solution: Some(x),
                residual,
                rank_data: augmented_rank(b, s),
                detail: format!("coefficient proportional to right side (sigma = {sigma:.6})"),
            });
        }
    }

    // B = σ·√S: X = √S/σ.
    if s.is_hermitian(None) {
        if let Ok(sqrt_s) = sqrt_psd(s) {
            if let Some(sigma) = proportionality(b, &sqrt_s) {
                let x = sqrt_s.scale(c64(1.0 / sigma, 0.0));
                let residual = residual_of(&(b * &x), s);
                if residual_ok(residual, s) {
                    return Ok(SolveReport {
                        status: status_for(full_rank),
                        solution: Some(x),
                        residual,
                        rank_data: augmented_rank(b, s),
                        detail: format!(
                            "coefficient proportional to square root of right side (sigma = {sigma:.6})"
                        ),
                    });
                }
            }
        }
    }

    // Block-diagonal coefficient with diagonal right side.
    if let Some(x) = try_block_diagonal(b, s)? {
        let residual = residual_of(&(b * &x), s);
        if residual_ok(residual, s) {
            return Ok(SolveReport {
                status: status_for(full_rank),
                solution: Some(x),
                residual,
                rank_data: augmented_rank(b, s),
                detail: "block-diagonal construction".into(),
            });
        }
    }

    // General solve, then insist on a Hermitian representative.
    let general = solve_bx_eq_a(b, s)?;
    let Some(x) = general.solution else {
        return Ok(SolveReport {
            detail: format!("general solve: {}", general.detail),
            ..general
        });
    };
    let x_h = x.hermitian_part();
    let residual = residual_of(&(b * &x_h), s);
    if !residual_ok(residual, s) {
        return Err(Error::NoHermitianSolution { residual });
    }
    Ok(SolveReport {
        status: general.status,
        solution: Some(x_h),
        residual,
        rank_data: general.rank_data,
        detail: "general solve with Hermitian projection".into(),
    })
}

/// Evaluates the full separator equation `B(t) X = Sep(α A + β A* + γ I)`
/// at `t`, after verifying `α(t) + β(t) = 1`.
pub fn solve_separator_equation(
    b: &MatrixFunction,
    a: &MatrixFunction,
    alpha: &Expr,
    beta: &Expr,
    gamma: &Expr,
    t: f64,
) -> Result<SolveReport> {
    let (al, be, ga) = (eval_expr(alpha, t)?, eval_expr(beta, t)?, eval_expr(gamma, t)?);
    if (al + be - 1.0).abs() > 1e-9 {
        return Err(Error::HypothesisNotSatisfied {
            which: "alpha + beta = 1".into(),
            t,
        });
    }
    let a_t = a.eval(t)?;
    let mixed = &(&a_t.scale(c64(al, 0.0)) + &a_t.adjoint().scale(c64(be, 0.0)))
        + &ComplexMatrix::identity(a_t.dim())?.scale(c64(ga, 0.0));
    solve_separator_system(&b.eval(t)?, &separator(&mixed))
}

// ---------------------------------------------------------------------------
// Equal real parts of the spectrum
// ---------------------------------------------------------------------------

/// Evidence for whether all eigenvalues of a matrix share one real part.
#[derive(Debug, Clone)]
pub struct SpectrumRealPartCheck {
    pub real_parts: Vec<f64>,
    pub spread: f64,
    pub passes: bool,
    pub method: &'static str,
}

/// Decides whether every eigenvalue of `M` has the same real part.
///
/// Shifting by `tr M / n` exposes skew-Hermitian structure (spectrum on a
/// vertical line) without any root finding; Hermitian matrices use their
/// real eigenvalues; everything else goes through characteristic-polynomial
/// roots, which limits the general path to `n ≤ 8`.
pub fn check_equal_real_parts(m: &ComplexMatrix) -> Result<SpectrumRealPartCheck> {
    let n = m.dim();
    let shift = m.trace() / c64(n as f64, 0.0);
    let centered = m - &ComplexMatrix::identity(n)?.scale(shift);
    let scale = m.max_abs().max(1.0);
    if (&centered + &centered.adjoint()).max_abs() <= tol::hermitian_tolerance(scale) {
        return Ok(SpectrumRealPartCheck {
            real_parts: vec![shift.re; n],
            spread: 0.0,
            passes: true,
            method: "skew-Hermitian after trace shift",
        });
    }
    let real_parts = if m.is_hermitian(None) {
        hermitian_eigen(m, None)?.values.clone()
    } else {
        if n > tol::MAX_DIM_GENERAL_EIGEN {
            return Err(Error::UnsupportedDimension {
                got: n,
                max: tol::MAX_DIM_GENERAL_EIGEN,
                context: "general eigenvalue real-part check",
            });
        }
        characteristic_roots(m)?.iter().map(|z| z.re).collect()
    };
    let hi = real_parts.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lo = real_parts.iter().copied().fold(f64::INFINITY, f64::min);
    let magnitude = real_parts.iter().map(|v| v.abs()).fold(0.0, f64::max);
    let spread = hi - lo;
    Ok(SpectrumRealPartCheck {
        spread,
        passes: spread <= 1e-8 * (1.0 + magnitude),
        real_parts,
        method: if m.is_hermitian(None) {
            "Hermitian eigenvalues"
        } else {
            "characteristic polynomial roots"
        },
    })
}

/// Monic characteristic polynomial coefficients by the trace recursion:
/// returns `[1, a_{n-1}, …, a_0]` with `p(λ) = λⁿ + a_{n-1}λ^{n-1} + … + a_0`.
fn characteristic_coefficients(m: &ComplexMatrix) -> Result<Vec<C64>> {
    let n = m.dim();
    let mut coeffs = vec![c64(1.0, 0.0)];
    let mut mk = m.clone();
    for k in 1..=n {
        let ck = mk.trace() / c64(k as f64, 0.0);
        coeffs.push(-ck);
        if k < n {
            let adjusted = &mk - &ComplexMatrix::identity(n)?.scale(ck);
            mk = m * &adjusted;
        }
    }
    Ok(coeffs)
}

/// All roots of the characteristic polynomial by simultaneous iteration.
fn characteristic_roots(m: &ComplexMatrix) -> Result<Vec<C64>> {
    let coeffs = characteristic_coefficients(m)?;
    durand_kerner(&coeffs)
}

/// Simultaneous root iteration for a monic polynomial given by
/// `coeffs = [1, a_{d-1}, …, a_0]`.
fn durand_kerner(coeffs: &[C64]) -> Result<Vec<C64>> {
    let degree = coeffs.len() - 1;
    if degree == 0 {
        return Ok(Vec::new());
    }
    let bound = 1.0 + coeffs.iter().skip(1).map(|z| z.norm()).fold(0.0, f64::max);
    let seed = c64(0.4, 0.9);
    let mut roots: Vec<C64> = (0..degree)
        .map(|k| seed.powu(k as u32 + 1) * c64(bound, 0.0))
        .collect();
    let eval = |z: C64| coeffs.iter().fold(c64(0.0, 0.0), |acc, &c| acc * z + c);
    for _ in 0..2000 {
        let mut max_delta = 0.0_f64;
        let mut scale = 1.0_f64;
        for k in 0..degree {
            let mut denom = c64(1.0, 0.0);
            for j in 0..degree {
                if j != k {
                    denom *= roots[k] - roots[j];
                }
            }
            if denom.norm() == 0.0 {
                roots[k] += c64(1e-6 * bound, 1e-6 * bound);
                continue;
            }
            let delta = eval(roots[k]) / denom;
            roots[k] -= delta;
            max_delta = max_delta.max(delta.norm());
            scale = scale.max(roots[k].norm());
        }
        if max_delta <= 1e-13 * scale {
            return Ok(roots);
        }
    }
    Err(Error::NoConvergence {
        what: "simultaneous polynomial root iteration".into(),
        iterations: 2000,
        residual: roots.iter().map(|&z| eval(z).norm()).fold(0.0, f64::max),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_expr;
    use crate::dsl::matrix_fn::ComplexEntry;

    fn m2(rows: [[f64; 2]; 2]) -> ComplexMatrix {
        ComplexMatrix::from_real_rows(&[rows[0].to_vec(), rows[1].to_vec()]).unwrap()
    }

    #[test]
    fn identity_coefficient_returns_rhs() {
        let b = ComplexMatrix::identity(3).unwrap();
        let a = ComplexMatrix::from_real_rows(&[
            vec![1.0, 2.0, 3.0],
            vec![4.0, 5.0, 6.0],
            vec![7.0, 8.0, 10.0],
        ])
        .unwrap();
        let rep = solve_bx_eq_a(&b, &a).unwrap();
        assert_eq!(rep.status, SolveStatus::Unique);
        assert!((&rep.solution.unwrap() - &a).max_abs() < 1e-14);
    }

    #[test]
    fn rank_obstruction_is_reported() {
        let b = m2([[1.0, 0.0], [0.0, 0.0]]);
        let a = m2([[0.0, 1.0], [0.0, 1.0]]);
        let rep = solve_bx_eq_a(&b, &a).unwrap();
        assert_eq!(rep.status, SolveStatus::NoSolution);
        assert_eq!(rep.rank_data, (1, 2));
    }

    #[test]
    fn singular_consistent_system_returns_minimum_norm() {
        let b = m2([[1.0, 0.0], [0.0, 0.0]]);
        let a = m2([[1.0, 0.0], [0.0, 0.0]]);
        let rep = solve_bx_eq_a(&b, &a).unwrap();
        assert_eq!(rep.status, SolveStatus::NonUniqueSolutionReturned);
        let x = rep.solution.unwrap();
        assert!((&x - &m2([[1.0, 0.0], [0.0, 0.0]])).max_abs() < 1e-10);
    }

    #[test]
    fn invertible_solve_matches_inverse() {
        let b = ComplexMatrix::from_rows(&[
            vec![c64(2.0, 0.0), c64(0.0, 1.0)],
            vec![c64(0.0, -1.0), c64(3.0, 0.0)],
        ])
        .unwrap();
        let a = ComplexMatrix::from_rows(&[
            vec![c64(1.0, 1.0), c64(0.0, 0.0)],
            vec![c64(2.0, 0.0), c64(0.0, -1.0)],
        ])
        .unwrap();
        let rep = solve_bx_eq_a(&b, &a).unwrap();
        let expected = &b.inverse().unwrap() * &a;
        assert!((&rep.solution.unwrap() - &expected).max_abs() < 1e-12);
        assert!(rep.residual < 1e-12);
    }

    #[test]
    fn rank_of_rectangular_arrays() {
        let full = ComplexMatrix::from_real_rows(&[vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap();
        assert_eq!(matrix_rank(&full), 2);
        let deficient =
            ComplexMatrix::from_real_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]]).unwrap();
        assert_eq!(matrix_rank(&deficient), 1);
        assert_eq!(matrix_rank(&ComplexMatrix::zeros(3).unwrap()), 0);
    }

    fn constant_fn(m: &ComplexMatrix) -> MatrixFunction {
        MatrixFunction::from_matrix(m)
    }

    #[test]
    fn sqrt_equation_with_identity_coefficient() {
        let b = constant_fn(&ComplexMatrix::identity(2).unwrap());
        let a = constant_fn(&m2([[1.0, 1.0], [0.0, 2.0]]));
        let rep = solve_sqrt_b_equation(&b, &a, 1.0).unwrap();
        assert_eq!(rep.status, SolveStatus::Unique);
        let x = rep.solution.unwrap();
        assert!((&x - &ComplexMatrix::identity(2).unwrap()).max_abs() < 1e-10);
    }

    #[test]
    fn sqrt_equation_with_vanishing_g() {
        // B = diag(1,0), A = [[0,1],[0,1]]: G = A·sqrt(B) is zero, so
        // X = 0 is the minimum-norm solution.
        let b = constant_fn(&m2([[1.0, 0.0], [0.0, 0.0]]));
        let a = constant_fn(&m2([[0.0, 1.0], [0.0, 1.0]]));
        let rep = solve_sqrt_b_equation(&b, &a, 0.0).unwrap();
        assert_eq!(rep.status, SolveStatus::NonUniqueSolutionReturned);
        assert!(rep.solution.unwrap().max_abs() < 1e-12);
        assert!(rep.residual < 1e-12);
    }

    #[test]
    fn sqrt_derivative_matches_analytic_form() {
        // B(t) = [[2, sin t],[sin t, 2]] has fixed eigenvectors, so sqrt(B)
        // and its derivative have closed forms to compare against.
        let b = MatrixFunction::new(
            vec![
                vec![
                    ComplexEntry::real(parse_expr("2").unwrap()),
                    ComplexEntry::real(parse_expr("sin(t)").unwrap()),
                ],
                vec![
                    ComplexEntry::real(parse_expr("sin(t)").unwrap()),
                    ComplexEntry::real(parse_expr("2").unwrap()),
                ],
            ],
            true,
            true,
        )
        .unwrap();
        let t = 0.7;
        let sq = sqrt_b_at(&b, t).unwrap();
        assert_eq!(sq.path, "central difference");
        let s = t.sin();
        let c = t.cos();
        let dp = c / (2.0 * (2.0 + s).sqrt());
        let dm = -c / (2.0 * (2.0 - s).sqrt());
        let expected = m2([
            [(dp + dm) / 2.0, (dp - dm) / 2.0],
            [(dp - dm) / 2.0, (dp + dm) / 2.0],
        ]);
        assert!(
            (&sq.derivative - &expected).max_abs() < 1e-8,
            "derivative error {}",
            (&sq.derivative - &expected).max_abs()
        );

        let diag = MatrixFunction::new(
            vec![
                vec![
                    ComplexEntry::real(parse_expr("t^2 + 1").unwrap()),
                    ComplexEntry::constant(0.0, 0.0),
                ],
                vec![
                    ComplexEntry::constant(0.0, 0.0),
                    ComplexEntry::real(parse_expr("4").unwrap()),
                ],
            ],
            true,
            true,
        )
        .unwrap();
        assert_eq!(sqrt_b_at(&diag, 1.0).unwrap().path, "symbolic diagonal");
    }

    #[test]
    fn lyapunov_hand_case() {
        let b = m2([[1.0, 0.0], [0.0, 2.0]]);
        let r = m2([[2.0, 3.0], [3.0, 8.0]]);
        let rep = solve_lyapunov(&b, &r).unwrap();
        assert_eq!(rep.status, SolveStatus::Unique);
        let x = rep.solution.unwrap();
        assert!((&x - &m2([[1.0, 1.0], [1.0, 2.0]])).max_abs() < 1e-12);
    }

    #[test]
    fn lyapunov_identity_halves_rhs() {
        let r = ComplexMatrix::from_rows(&[
            vec![c64(2.0, 0.0), c64(1.0, 1.0)],
            vec![c64(1.0, -1.0), c64(-4.0, 0.0)],
        ])
        .unwrap();
        let rep = solve_lyapunov(&ComplexMatrix::identity(2).unwrap(), &r).unwrap();
        let x = rep.solution.unwrap();
        assert!((&x.scale(c64(2.0, 0.0)) - &r).max_abs() < 1e-12);
    }

    #[test]
    fn lyapunov_obstruction_and_free_directions() {
        let b = m2([[1.0, 0.0], [0.0, 0.0]]);
        let blocked = m2([[0.0, 0.0], [0.0, 5.0]]);
        let rep = solve_lyapunov(&b, &blocked).unwrap();
        assert_eq!(rep.status, SolveStatus::NoSolution);

        let solvable = m2([[4.0, 2.0], [2.0, 0.0]]);
        let rep = solve_lyapunov(&b, &solvable).unwrap();
        assert_eq!(rep.status, SolveStatus::NonUniqueSolutionReturned);
        let x = rep.solution.unwrap();
        let lhs = &(&b * &x) + &(&x * &b);
        assert!((&lhs - &solvable).max_abs() < 1e-12);
    }

    #[test]
    fn lyapunov_returns_hermitian_solutions() {
        let b = ComplexMatrix::from_rows(&[
            vec![c64(3.0, 0.0), c64(0.5, 0.25)],
            vec![c64(0.5, -0.25), c64(2.0, 0.0)],
        ])
        .unwrap();
        let r = ComplexMatrix::from_rows(&[
            vec![c64(1.0, 0.0), c64(-1.0, 2.0)],
            vec![c64(-1.0, -2.0), c64(4.0, 0.0)],
        ])
        .unwrap();
        let rep = solve_lyapunov(&b, &r).unwrap();
        let x = rep.solution.unwrap();
        assert!(x.hermitian_residual() < 1e-10);
        assert!(rep.residual < 1e-10);
    }

    #[test]
    fn quadrature_route_agrees_with_eigen_route() {
        let quad = Quadrature::default();
        let b = m2([[1.0, 0.0], [0.0, 2.0]]);
        let r = m2([[2.0, 3.0], [3.0, 8.0]]);
        let h = lyapunov_by_quadrature(&b, &r, None, &quad).unwrap();
        assert!((&h - &m2([[1.0, 1.0], [1.0, 2.0]])).max_abs() < 1e-6);

        let m = ComplexMatrix::from_rows(&[
            vec![c64(1.0, 0.0), c64(0.0, 2.0)],
            vec![c64(0.0, -2.0), c64(5.0, 0.0)],
        ])
        .unwrap();
        let h = lyapunov_by_quadrature(&ComplexMatrix::identity(2).unwrap(), &m, None, &quad)
            .unwrap();
        assert!((&h - &m.scale(c64(0.5, 0.0))).max_abs() < 1e-6);

        let zero = ComplexMatrix::zeros(2).unwrap();
        let h = lyapunov_by_quadrature(&b, &zero, None, &quad).unwrap();
        assert!(h.max_abs() < 1e-12);
    }

    #[test]
    fn quadrature_route_handles_semidefinite_kernel() {
        let quad = Quadrature::default();
        let b = m2([[1.0, 0.0], [0.0, 0.0]]);
        let ok_rhs = m2([[2.0, 0.0], [0.0, 0.0]]);
        let h = lyapunov_by_quadrature(&b, &ok_rhs, None, &quad).unwrap();
        assert!((&h - &m2([[1.0, 0.0], [0.0, 0.0]])).max_abs() < 1e-6);

        let bad_rhs = m2([[2.0, 0.0], [0.0, 1.0]]);
        assert!(matches!(
            lyapunov_by_quadrature(&b, &bad_rhs, None, &quad),
            Err(Error::NotPositiveDefinite { .. })
        ));

        let indefinite = m2([[1.0, 0.0], [0.0, -1.0]]);
        assert!(matches!(
            lyapunov_by_quadrature(&indefinite, &ok_rhs, None, &quad),
            Err(Error::NotPositiveDefinite { .. })
        ));
    }

    #[test]
    fn shifted_lyapunov_on_rank_deficient_coefficient() {
        let b = m2([[0.0, 0.0], [0.0, 1.0]]);
        let s = ComplexMatrix::from_rows(&[
            vec![c64(4.0, 0.0), c64(1.0, 2.0)],
            vec![c64(1.0, -2.0), c64(6.0, 0.0)],
        ])
        .unwrap();
        let (mu, rep) = lyapunov_with_shift(&b, &s).unwrap();
        assert!((mu + 2.0).abs() < 1e-12);
        let x = rep.solution.unwrap();
        let expected = ComplexMatrix::from_rows(&[
            vec![c64(0.0, 0.0), c64(1.0, 2.0)],
            vec![c64(1.0, -2.0), c64(1.0, 0.0)],
        ])
        .unwrap();
        assert!((&x - &expected).max_abs() < 1e-10);

        let pd = m2([[1.0, 0.0], [0.0, 2.0]]);
        let (mu, rep) = lyapunov_with_shift(&pd, &m2([[2.0, 3.0], [3.0, 8.0]])).unwrap();
        assert_eq!(mu, 0.0);
        assert_eq!(rep.status, SolveStatus::Unique);

        assert!(matches!(
            lyapunov_with_shift(&ComplexMatrix::zeros(2).unwrap(), &s),
            Err(Error::RankTooLow { rank: 0, n: 2, need: 1 })
        ));
    }

    fn sep_inputs(
        a_rows: &[Vec<C64>],
        b_rows: &[Vec<C64>],
    ) -> (MatrixFunction, MatrixFunction, Expr, Expr, Expr) {
        let a = constant_fn(&ComplexMatrix::from_rows(a_rows).unwrap());
        let b = constant_fn(&ComplexMatrix::from_rows(b_rows).unwrap());
        (
            b,
            a,
            parse_expr("1/2").unwrap(),
            parse_expr("1/2").unwrap(),
            parse_expr("0").unwrap(),
        )
    }

    #[test]
    fn separator_equation_zero_right_side() {
        // Column sums of A vanish, so Sep of its Hermitian mix is zero.
        let (b, a, al, be, ga) = sep_inputs(
            &[
                vec![c64(1.0, 0.0), c64(-1.0, 0.0)],
                vec![c64(-1.0, 0.0), c64(1.0, 0.0)],
            ],
            &[
                vec![c64(1.0, 0.0), c64(0.0, 0.0)],
                vec![c64(0.0, 0.0), c64(1.0, 0.0)],
            ],
        );
        let rep = solve_separator_equation(&b, &a, &al, &be, &ga, 0.0).unwrap();
        assert_eq!(rep.status, SolveStatus::Unique);
        assert!(rep.solution.unwrap().max_abs() == 0.0);
        assert_eq!(rep.detail, "zero right side");
    }

    #[test]
    fn separator_equation_proportional_cases() {
        // A = diag(-1,-4): Sep = diag(1,4) =: S. With B = 2S the solution
        // is I/2; with B = 3·sqrt(S) it is sqrt(S)/3.
        let a = vec![
            vec![c64(-1.0, 0.0), c64(0.0, 0.0)],
            vec![c64(0.0, 0.0), c64(-4.0, 0.0)],
        ];
        let (b, af, al, be, ga) = sep_inputs(
            &a,
            &[
                vec![c64(2.0, 0.0), c64(0.0, 0.0)],
                vec![c64(0.0, 0.0), c64(8.0, 0.0)],
            ],
        );
        let rep = solve_separator_equation(&b, &af, &al, &be, &ga, 0.0).unwrap();
        assert!(rep.detail.contains("proportional to right side"));
        let x = rep.solution.unwrap();
        assert!((&x - &ComplexMatrix::identity(2).unwrap().scale(c64(0.5, 0.0))).max_abs() < 1e-10);

        let (b, af, al, be, ga) = sep_inputs(
            &a,
            &[
                vec![c64(3.0, 0.0), c64(0.0, 0.0)],
                vec![c64(0.0, 0.0), c64(6.0, 0.0)],
            ],
        );
        let rep = solve_separator_equation(&b, &af, &al, &be, &ga, 0.0).unwrap();
        assert!(rep.detail.contains("square root"), "{}", rep.detail);
        let x = rep.solution.unwrap();
        assert!((&x - &m2([[1.0 / 3.0, 0.0], [0.0, 2.0 / 3.0]])).max_abs() < 1e-10);
    }

    #[test]
    fn separator_equation_block_diagonal_case() {
        // B = Bloc{[[2,1],[1,2]], 0}, A = diag(-5,-5,0): S = diag(5,5,0),
        // X = Bloc{5 B1^{-1}, 0}.
        let a3 = ComplexMatrix::from_real_rows(&[
            vec![-5.0, 0.0, 0.0],
            vec![0.0, -5.0, 0.0],
            vec![0.0, 0.0, 0.0],
        ])
        .unwrap();
        let b3 = ComplexMatrix::from_real_rows(&[
            vec![2.0, 1.0, 0.0],
            vec![1.0, 2.0, 0.0],
            vec![0.0, 0.0, 0.0],
        ])
        .unwrap();
        let rep = solve_separator_system(&b3, &separator(&a3.scale(c64(-1.0, 0.0)).scale(c64(-1.0, 0.0)))).unwrap();
        // separator(A) for the diagonal A has h_kk = -column sums = diag(5,5,0)
        assert_eq!(rep.detail, "block-diagonal construction");
        let x = rep.solution.unwrap();
        let expected = ComplexMatrix::from_real_rows(&[
            vec![10.0 / 3.0, -5.0 / 3.0, 0.0],
            vec![-5.0 / 3.0, 10.0 / 3.0, 0.0],
            vec![0.0, 0.0, 0.0],
        ])
        .unwrap();
        assert!((&x - &expected).max_abs() < 1e-10);
        assert_eq!(rep.status, SolveStatus::NonUniqueSolutionReturned);
    }

    #[test]
    fn separator_equation_general_path_and_hermitian_filter() {
        // A = [[-3,0],[4i,-3]] gives Sep = [[3,2i],[-2i,3]]. A commuting
        // coefficient admits the Hermitian solution; a non-commuting
        // invertible coefficient cannot.
        let a = vec![
            vec![c64(-3.0, 0.0), c64(0.0, 0.0)],
            vec![c64(0.0, 4.0), c64(-3.0, 0.0)],
        ];
        let commuting = vec![
            vec![c64(2.0, 0.0), c64(0.0, 1.0)],
            vec![c64(0.0, -1.0), c64(2.0, 0.0)],
        ];
        let (b, af, _al, _be, ga) = sep_inputs(&a, &commuting);
        // use alpha=1, beta=0 so the mixed matrix is A itself
        let rep = solve_separator_equation(
            &b,
            &af,
            &parse_expr("1").unwrap(),
            &parse_expr("0").unwrap(),
            &ga,
            0.0,
        )
        .unwrap();
        assert_eq!(rep.detail, "general solve with Hermitian projection");
        let x = rep.solution.unwrap();
        let expected = ComplexMatrix::from_rows(&[
            vec![c64(4.0 / 3.0, 0.0), c64(0.0, 1.0 / 3.0)],
            vec![c64(0.0, -1.0 / 3.0), c64(4.0 / 3.0, 0.0)],
        ])
        .unwrap();
        assert!((&x - &expected).max_abs() < 1e-10);

        let non_commuting = vec![
            vec![c64(2.0, 0.0), c64(1.0, 0.0)],
            vec![c64(1.0, 0.0), c64(2.0, 0.0)],
        ];
        let (b, af, _, _, ga) = sep_inputs(&a, &non_commuting);
        let err = solve_separator_equation(
            &b,
            &af,
            &parse_expr("1").unwrap(),
            &parse_expr("0").unwrap(),
            &ga,
            0.0,
        )
        .unwrap_err();
        assert!(matches!(err, Error::NoHermitianSolution { .. }));
    }

    #[test]
    fn separator_equation_rank_obstruction() {
        // B = diag(1,0) with S = diag(0,1): inconsistent.
        let a = vec![
            vec![c64(0.0, 0.0), c64(0.0, 0.0)],
            vec![c64(0.0, 0.0), c64(-1.0, 0.0)],
        ];
        let (b, af, al, be, ga) = sep_inputs(
            &a,
            &[
                vec![c64(1.0, 0.0), c64(0.0, 0.0)],
                vec![c64(0.0, 0.0), c64(0.0, 0.0)],
            ],
        );
        let rep = solve_separator_equation(&b, &af, &al, &be, &ga, 0.0).unwrap();
        assert_eq!(rep.status, SolveStatus::NoSolution);
        assert_eq!(rep.rank_data, (1, 2));
    }

    #[test]
    fn separator_equation_requires_unit_mixing_sum() {
        let a = vec![vec![c64(1.0, 0.0)]];
        let (b, af, _, _, ga) = sep_inputs(&a, &[vec![c64(1.0, 0.0)]]);
        let one = parse_expr("1").unwrap();
        let err = solve_separator_equation(&b, &af, &one, &one, &ga, 2.0).unwrap_err();
        assert!(matches!(err, Error::HypothesisNotSatisfied { .. }));
    }

    #[test]
    fn equal_real_parts_shortcuts() {
        let skew = ComplexMatrix::from_real_rows(&[vec![0.0, 1.0], vec![-1.0, 0.0]]).unwrap();
        let check = check_equal_real_parts(&skew).unwrap();
        assert!(check.passes);
        assert_eq!(check.method, "skew-Hermitian after trace shift");

        let shifted = &skew + &ComplexMatrix::identity(2).unwrap().scale(c64(3.0, 0.0));
        let check = check_equal_real_parts(&shifted).unwrap();
        assert!(check.passes);
        assert!((check.real_parts[0] - 3.0).abs() < 1e-12);

        let hermitian = m2([[1.0, 0.0], [0.0, 2.0]]);
        let check = check_equal_real_parts(&hermitian).unwrap();
        assert!(!check.passes);
        assert!((check.spread - 1.0).abs() < 1e-10);
    }

    #[test]
    fn equal_real_parts_via_characteristic_roots() {
        // x^2 - 2x + 2 has roots 1 ± i: equal real parts.
        let equal = m2([[0.0, 1.0], [-2.0, 2.0]]);
        let check = check_equal_real_parts(&equal).unwrap();
        assert!(check.passes, "spread {}", check.spread);
        assert_eq!(check.method, "characteristic polynomial roots");

        // x^2 - x - 2 has roots 2 and -1.
        let unequal = m2([[0.0, 1.0], [2.0, 1.0]]);
        let check = check_equal_real_parts(&unequal).unwrap();
        assert!(!check.passes);
        assert!((check.spread - 3.0).abs() < 1e-8);
    }

    #[test]
    fn general_path_dimension_guard() {
        let n = 9;
        let mut m = ComplexMatrix::zeros(n).unwrap();
        m[(0, 1)] = c64(1.0, 0.0);
        m[(1, 0)] = c64(2.0, 0.0);
        assert!(matches!(
            check_equal_real_parts(&m),
            Err(Error::UnsupportedDimension { max: 8, .. })
        ));
    }

    #[test]
    fn root_iteration_recovers_known_roots() {
        // (x - 2)(x + 1)(x - (1+2i)) expanded.
        let r1 = c64(2.0, 0.0);
        let r2 = c64(-1.0, 0.0);
        let r3 = c64(1.0, 2.0);
        let coeffs = vec![
            c64(1.0, 0.0),
            -(r1 + r2 + r3),
            r1 * r2 + r1 * r3 + r2 * r3,
            -(r1 * r2 * r3),
        ];
        let mut roots = durand_kerner(&coeffs).unwrap();
        roots.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        let mut expected = [r2, r3, r1];
        expected.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        for (z, e) in roots.iter().zip(expected.iter()) {
            assert!((z - e).norm() < 1e-9, "root {z} vs {e}");
        }
    }

    #[test]
    fn characteristic_coefficients_match_two_by_two_formula() {
        let m = ComplexMatrix::from_rows(&[
            vec![c64(1.0, 1.0), c64(2.0, 0.0)],
            vec![c64(0.0, 3.0), c64(4.0, -1.0)],
        ])
        .unwrap();
        let coeffs = characteristic_coefficients(&m).unwrap();
        let trace = m.trace();
        let det = m.det();
        assert!((coeffs[1] + trace).norm() < 1e-12);
        assert!((coeffs[2] - det).norm() < 1e-12);
    }
}

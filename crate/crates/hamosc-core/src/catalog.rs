//! Built-in problem catalog: a fixed set of Hamiltonian systems with known
//! behavior, used by the soundness regression, the command-line `catalog`
//! command, and the documentation examples. Each entry carries the problem
//! itself plus the checker configuration it is meant to be run with (most
//! use the defaults; the separator entries adjust the mixing weights).
//!
//! The catalog also exports the sum-killing completions that produce drifts
//! with identically vanishing separators, so tests can verify the
//! construction on random data rather than only on the shipped instances.

use crate::criteria::CriterionConfig;
use crate::dsl::{parse_expr, ComplexEntry, Expr, HamiltonianProblem, MatrixFunction};
use crate::error::{Error, Result};
use crate::matrix::{c64, ComplexMatrix};

// ---------------------------------------------------------------------------
// Sum-killing completions
// ---------------------------------------------------------------------------

/// Returns a copy whose last row is overwritten so that every column of the
/// result sums to zero; the separator of such a matrix vanishes identically.
pub fn with_zero_column_sums(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = m.dim();
    if n < 2 {
        return Err(Error::UnsupportedDimension {
            got: n,
            max: crate::tol::MAX_DIM,
            context: "zero-column-sum completion",
        });
    }
    let mut out = m.clone();
    for k in 0..n {
        let mut sum = c64(0.0, 0.0);
        for j in 0..n - 1 {
            sum += m[(j, k)];
        }
        out[(n - 1, k)] = -sum;
    }
    Ok(out)
}

/// Returns a copy whose last column is overwritten so that every row of the
/// result sums to zero; the separator of the adjoint then vanishes.
pub fn with_zero_row_sums(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = m.dim();
    if n < 2 {
        return Err(Error::UnsupportedDimension {
            got: n,
            max: crate::tol::MAX_DIM,
            context: "zero-row-sum completion",
        });
    }
    let mut out = m.clone();
    for j in 0..n {
        let mut sum = c64(0.0, 0.0);
        for k in 0..n - 1 {
            sum += m[(j, k)];
        }
        out[(j, n - 1)] = -sum;
    }
    Ok(out)
}

/// Returns a copy whose last row, last column and corner are overwritten so
/// that every row sum and every column sum of the result vanishes; the
/// separator of the Hermitian part then vanishes, which matches the mixing
/// weights `α = β = 1/2`.
pub fn with_balanced_sums(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = m.dim();
    if n < 2 {
        return Err(Error::UnsupportedDimension {
            got: n,
            max: crate::tol::MAX_DIM,
            context: "balanced-sum completion",
        });
    }
    let mut out = m.clone();
    let mut corner = c64(0.0, 0.0);
    for j in 0..n - 1 {
        for k in 0..n - 1 {
            corner += m[(j, k)];
        }
    }
    for j in 0..n - 1 {
        let mut row = c64(0.0, 0.0);
        for k in 0..n - 1 {
            row += m[(j, k)];
        }
        out[(j, n - 1)] = -row;
    }
    for k in 0..n - 1 {
        let mut col = c64(0.0, 0.0);
        for j in 0..n - 1 {
            col += m[(j, k)];
        }
        out[(n - 1, k)] = -col;
    }
    out[(n - 1, n - 1)] = corner;
    Ok(out)
}

// ---------------------------------------------------------------------------
// Entries
// ---------------------------------------------------------------------------

/// One catalog problem with its recommended checker configuration.
pub struct CatalogEntry {
    pub id: &'static str,
    pub summary: &'static str,
    build: fn() -> Result<HamiltonianProblem>,
    configure: Option<fn(&mut CriterionConfig)>,
}

impl CatalogEntry {
    pub fn problem(&self) -> Result<HamiltonianProblem> {
        (self.build)()
    }

    /// Default configuration for the problem's dimension with this entry's
    /// adjustments applied.
    pub fn config(&self) -> Result<CriterionConfig> {
        let p = self.problem()?;
        let mut cfg = CriterionConfig::for_dim(p.dim())?;
        if let Some(f) = self.configure {
            f(&mut cfg);
        }
        Ok(cfg)
    }
}

pub fn entries() -> &'static [CatalogEntry] {
    &ENTRIES
}

pub fn find(id: &str) -> Option<&'static CatalogEntry> {
    ENTRIES.iter().find(|e| e.id == id)
}

static ENTRIES: [CatalogEntry; 11] = [
    CatalogEntry {
        id: "harmonic",
        summary: "Scalar system with unit coupling and negative drift; solutions are shifted cosines with determinant zeros every pi.",
        build: build_harmonic,
        configure: None,
    },
    CatalogEntry {
        id: "harmonic-pair",
        summary: "Two uncoupled oscillators with doubled coupling weight; exercises the eigenvalue versus trace-bound weighting choices.",
        build: build_harmonic_pair,
        configure: None,
    },
    CatalogEntry {
        id: "rotation",
        summary: "Planar rotation generator with identity coupling; the principal determinant vanishes at pi/2 + k*pi.",
        build: build_rotation,
        configure: None,
    },
    CatalogEntry {
        id: "complex-coupled",
        summary: "Skew-Hermitian imaginary drift with identity coupling; the skew-completion corollary certifies while the realness-restricted checkers step aside.",
        build: build_complex_coupled,
        configure: None,
    },
    CatalogEntry {
        id: "euler-weak",
        summary: "Scalar problem with a slowly decaying drift proportional to 1/t^2; a single determinant zero inside the default horizon, every criterion honestly inconclusive.",
        build: build_euler_weak,
        configure: None,
    },
    CatalogEntry {
        id: "degenerate-drift",
        summary: "Rank-one coupling with a drift outside the range of B, so B X = A has no solution; the square-root reduction still certifies linear growth.",
        build: build_degenerate_drift,
        configure: None,
    },
    CatalogEntry {
        id: "degenerate-drift-reversed",
        summary: "Sign-reversed drift variant of degenerate-drift; every checker is inconclusive or inapplicable and direct integration finds no determinant zeros. Soundness control.",
        build: build_degenerate_drift_reversed,
        configure: None,
    },
    CatalogEntry {
        id: "zero-column-sums",
        summary: "Drift whose column sums vanish, so its separator vanishes identically and the vanishing-separator shortcut applies with the default mixing weights.",
        build: build_zero_column_sums,
        configure: None,
    },
    CatalogEntry {
        id: "zero-row-sums",
        summary: "Drift whose row sums vanish, so the separator of A* vanishes; run with mixing weights alpha = 0, beta = 1.",
        build: build_zero_row_sums,
        configure: Some(configure_adjoint_mixing),
    },
    CatalogEntry {
        id: "balanced-sums",
        summary: "Drift whose row and column sums all vanish, plus a skew perturbation; the separator of the Hermitian part vanishes with alpha = beta = 1/2.",
        build: build_balanced_sums,
        configure: Some(configure_symmetric_mixing),
    },
    CatalogEntry {
        id: "hyperbolic-control",
        summary: "Positive drift makes every solution grow exponentially with no determinant zeros; negative control that nothing may certify.",
        build: build_hyperbolic_control,
        configure: None,
    },
];

fn configure_adjoint_mixing(cfg: &mut CriterionConfig) {
    cfg.alpha = Expr::num(0.0);
    cfg.beta = Expr::num(1.0);
}

fn configure_symmetric_mixing(cfg: &mut CriterionConfig) {
    cfg.alpha = Expr::num(0.5);
    cfg.beta = Expr::num(0.5);
}

// ---------------------------------------------------------------------------
// Builders
// ---------------------------------------------------------------------------

fn real_constant(
    label: &str,
    t0: f64,
    a: &[&[f64]],
    b: &[&[f64]],
    c: &[&[f64]],
) -> Result<HamiltonianProblem> {
    let mk = |rows: &[&[f64]]| -> Result<MatrixFunction> {
        let owned: Vec<Vec<f64>> = rows.iter().map(|r| r.to_vec()).collect();
        Ok(MatrixFunction::from_matrix(&ComplexMatrix::from_real_rows(
            &owned,
        )?))
    };
    HamiltonianProblem::new(label, t0, mk(a)?, mk(b)?, mk(c)?)
}

fn real_constant_matrices(
    label: &str,
    t0: f64,
    a: ComplexMatrix,
    b: ComplexMatrix,
    c: ComplexMatrix,
) -> Result<HamiltonianProblem> {
    HamiltonianProblem::new(
        label,
        t0,
        MatrixFunction::from_matrix(&a),
        MatrixFunction::from_matrix(&b),
        MatrixFunction::from_matrix(&c),
    )
}

fn build_harmonic() -> Result<HamiltonianProblem> {
    real_constant("harmonic", 0.0, &[&[0.0]], &[&[1.0]], &[&[-1.0]])
}

fn build_harmonic_pair() -> Result<HamiltonianProblem> {
    real_constant(
        "harmonic-pair",
        0.0,
        &[&[0.0, 0.0], &[0.0, 0.0]],
        &[&[2.0, 0.0], &[0.0, 2.0]],
        &[&[-1.0, 0.0], &[0.0, -1.0]],
    )
}

fn build_rotation() -> Result<HamiltonianProblem> {
    real_constant(
        "rotation",
        0.0,
        &[&[0.0, 1.0], &[-1.0, 0.0]],
        &[&[1.0, 0.0], &[0.0, 1.0]],
        &[&[-1.0, 0.0], &[0.0, -1.0]],
    )
}

fn build_complex_coupled() -> Result<HamiltonianProblem> {
    let a = ComplexMatrix::from_rows(&[
        vec![c64(0.0, 0.0), c64(0.0, 1.0)],
        vec![c64(0.0, 1.0), c64(0.0, 0.0)],
    ])?;
    let b = ComplexMatrix::identity(2)?;
    let c = ComplexMatrix::identity(2)?.scale(c64(-1.0, 0.0));
    real_constant_matrices("complex-coupled", 0.0, a, b, c)
}

fn build_euler_weak() -> Result<HamiltonianProblem> {
    let zero = ComplexEntry::real(Expr::num(0.0));
    let one = ComplexEntry::real(Expr::num(1.0));
    let drift = ComplexEntry::real(parse_expr("-1/(2*t^2)")?);
    HamiltonianProblem::new(
        "euler-weak",
        1.0,
        MatrixFunction::new(vec![vec![zero]], true, true)?,
        MatrixFunction::new(vec![vec![one]], true, true)?,
        MatrixFunction::new(vec![vec![drift]], true, true)?,
    )
}

fn build_degenerate_drift() -> Result<HamiltonianProblem> {
    real_constant(
        "degenerate-drift",
        0.0,
        &[&[0.0, 1.0], &[0.0, 1.0]],
        &[&[1.0, 0.0], &[0.0, 0.0]],
        &[&[-1.0, 0.0], &[0.0, -1.0]],
    )
}

fn build_degenerate_drift_reversed() -> Result<HamiltonianProblem> {
    real_constant(
        "degenerate-drift-reversed",
        0.0,
        &[&[0.0, 1.0], &[0.0, 1.0]],
        &[&[1.0, 0.0], &[0.0, 0.0]],
        &[&[1.0, 0.0], &[0.0, 1.0]],
    )
}

/// Free 2x3 block completed by [`with_zero_column_sums`].
fn build_zero_column_sums() -> Result<HamiltonianProblem> {
    let free = ComplexMatrix::from_real_rows(&[
        vec![0.3, -0.2, 0.1],
        vec![0.25, 0.4, -0.5],
        vec![0.0, 0.0, 0.0],
    ])?;
    let a = with_zero_column_sums(&free)?;
    let b = ComplexMatrix::identity(3)?;
    let c = ComplexMatrix::identity(3)?.scale(c64(-1.0, 0.0));
    real_constant_matrices("zero-column-sums", 0.0, a, b, c)
}

/// Free 3x2 block completed by [`with_zero_row_sums`].
fn build_zero_row_sums() -> Result<HamiltonianProblem> {
    let free = ComplexMatrix::from_real_rows(&[
        vec![0.3, -0.2, 0.0],
        vec![0.25, 0.1, 0.0],
        vec![-0.1, 0.15, 0.0],
    ])?;
    let a = with_zero_row_sums(&free)?;
    let b = ComplexMatrix::identity(3)?;
    let c = ComplexMatrix::identity(3)?.scale(c64(-1.0, 0.0));
    real_constant_matrices("zero-row-sums", 0.0, a, b, c)
}

/// Free 2x2 block completed by [`with_balanced_sums`], then perturbed by a
/// skew-symmetric term that the Hermitian part cannot see.
fn build_balanced_sums() -> Result<HamiltonianProblem> {
    let free = ComplexMatrix::from_real_rows(&[
        vec![0.3, -0.2, 0.0],
        vec![0.15, 0.1, 0.0],
        vec![0.0, 0.0, 0.0],
    ])?;
    let base = with_balanced_sums(&free)?;
    let skew = ComplexMatrix::from_real_rows(&[
        vec![0.0, 0.2, -0.1],
        vec![-0.2, 0.0, 0.3],
        vec![0.1, -0.3, 0.0],
    ])?;
    let a = &base + &skew;
    let b = ComplexMatrix::identity(3)?;
    let c = ComplexMatrix::identity(3)?.scale(c64(-1.0, 0.0));
    real_constant_matrices("balanced-sums", 0.0, a, b, c)
}

fn build_hyperbolic_control() -> Result<HamiltonianProblem> {
    real_constant(
        "hyperbolic-control",
        0.0,
        &[&[0.0, 0.0], &[0.0, 0.0]],
        &[&[1.0, 0.0], &[0.0, 1.0]],
        &[&[1.0, 0.0], &[0.0, 1.0]],
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::eval_expr;
    use crate::matrix::separator;

    #[test]
    fn all_entries_build_and_validate() {
        assert_eq!(entries().len(), 11);
        for e in entries() {
            let p = e.problem().unwrap_or_else(|err| panic!("{}: {err}", e.id));
            assert_eq!(p.label, e.id);
            let cfg = e.config().unwrap();
            cfg.validate(&p).unwrap_or_else(|err| panic!("{}: {err}", e.id));
            assert!(!e.summary.is_empty());
        }
    }

    #[test]
    fn ids_are_unique_and_findable() {
        for e in entries() {
            assert!(std::ptr::eq(find(e.id).unwrap(), e));
        }
        assert!(find("no-such-problem").is_none());
    }

    fn mixed_matrix(
        p: &HamiltonianProblem,
        cfg: &CriterionConfig,
        t: f64,
    ) -> ComplexMatrix {
        let a = p.a.eval(t).unwrap();
        let alpha = c64(eval_expr(&cfg.alpha, t).unwrap(), 0.0);
        let beta = c64(eval_expr(&cfg.beta, t).unwrap(), 0.0);
        &a.scale(alpha) + &a.adjoint().scale(beta)
    }

    #[test]
    fn sum_killed_entries_have_vanishing_separators() {
        for id in ["zero-column-sums", "zero-row-sums", "balanced-sums"] {
            let e = find(id).unwrap();
            let p = e.problem().unwrap();
            let cfg = e.config().unwrap();
            for k in 0..50 {
                let t = p.t0 + 4.0 * k as f64;
                let sep = separator(&mixed_matrix(&p, &cfg, t));
                assert!(sep.max_abs() < 1e-12, "{id}: |Sep| = {} at t = {t}", sep.max_abs());
            }
        }
    }

    #[test]
    fn completions_kill_the_right_sums_on_complex_data() {
        let m = ComplexMatrix::from_rows(&[
            vec![c64(0.3, 0.1), c64(-0.2, 0.4), c64(0.0, 0.0)],
            vec![c64(0.15, -0.3), c64(0.1, 0.2), c64(0.0, 0.0)],
            vec![c64(0.0, 0.0), c64(0.0, 0.0), c64(0.0, 0.0)],
        ])
        .unwrap();
        let col = with_zero_column_sums(&m).unwrap();
        for k in 0..3 {
            let s: crate::matrix::C64 = (0..3).map(|j| col[(j, k)]).sum();
            assert!(s.norm() < 1e-15);
        }
        let row = with_zero_row_sums(&m).unwrap();
        for j in 0..3 {
            let s: crate::matrix::C64 = (0..3).map(|k| row[(j, k)]).sum();
            assert!(s.norm() < 1e-15);
        }
        let bal = with_balanced_sums(&m).unwrap();
        for k in 0..3 {
            let s: crate::matrix::C64 = (0..3).map(|j| bal[(j, k)]).sum();
            assert!(s.norm() < 1e-15, "column {k}");
            let s: crate::matrix::C64 = (0..3).map(|j| bal[(k, j)]).sum();
            assert!(s.norm() < 1e-15, "row {k}");
        }
        assert!(separator(&bal.hermitian_part()).max_abs() < 1e-15);
    }
}

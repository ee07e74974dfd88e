//! Crate-wide error type.
//!
//! Every fallible operation in this crate reports through [`Error`]. Variants
//! carry enough context (positions, time points, residuals) for a caller to
//! print an actionable message without re-running the computation.

use thiserror::Error;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Matrix dimensions do not agree for the requested operation.
    #[error("dimension mismatch: {left}x{left} vs {right}x{right} in {context}")]
    DimensionMismatch {
        left: usize,
        right: usize,
        context: &'static str,
    },

    /// A dimension outside the supported range was requested.
    #[error("unsupported dimension {got} in {context} (supported range 1..={max})")]
    UnsupportedDimension {
        got: usize,
        max: usize,
        context: &'static str,
    },

    /// A matrix expected to be Hermitian is not, within tolerance.
    #[error("matrix not Hermitian: max |M - M*| = {residual:.3e} exceeds {tolerance:.3e}")]
    NotHermitian { residual: f64, tolerance: f64 },

    /// A matrix expected to be positive semidefinite has a negative eigenvalue.
    #[error("matrix not positive semidefinite: smallest eigenvalue {lambda_min:.6e}")]
    NotPsd { lambda_min: f64 },

    /// A matrix required to be positive definite is singular or indefinite.
    #[error("matrix not positive definite: smallest eigenvalue {lambda_min:.6e}")]
    NotPositiveDefinite { lambda_min: f64 },

    /// An iterative scheme exhausted its budget before reaching its tolerance.
    #[error("no convergence in {what} after {iterations} iterations (residual {residual:.3e})")]
    NoConvergence {
        what: &'static str,
        iterations: usize,
        residual: f64,
    },

    /// Expression text failed to tokenize or parse.
    #[error("syntax error at byte {position}: expected {expected}")]
    Syntax { position: usize, expected: String },

    /// An identifier in expression text is not a known variable, constant or function.
    #[error("unknown identifier `{name}` at byte {position}")]
    UnknownIdentifier { position: usize, name: String },

    /// Expression evaluation hit a domain fault (log of a non-positive value,
    /// sqrt of a negative, division by zero, or a non-finite result).
    #[error("domain error at t = {t}: {what}")]
    Domain { t: f64, what: String },

    /// A matrix-function entry failed to evaluate.
    #[error("entry ({row},{col}) failed to evaluate: {source}")]
    EntryEval {
        row: usize,
        col: usize,
        #[source]
        source: Box<Error>,
    },

    /// A problem document does not match the expected schema.
    #[error("schema error: {0}")]
    Schema(String),

    /// A matrix declared (or required to be) Hermitian failed the sampling check.
    #[error("{matrix} violates the Hermitian requirement at t = {t}: residual {residual:.3e}")]
    HermitianViolation {
        matrix: String,
        t: f64,
        residual: f64,
    },

    /// A coefficient function could not be evaluated where an integrator needed it.
    #[error("coefficient evaluation failed at t = {t}: {detail}")]
    CoefficientEvaluation { t: f64, detail: String },

    /// The adaptive step-size controller underflowed without a diagnosed blow-up.
    #[error("step size underflow at t = {t} (step {step:.3e}) without diagnosed blow-up")]
    StepUnderflow { t: f64, step: f64 },

    /// Generic numerical breakdown with a human-readable description.
    #[error("numerical breakdown at t = {t}: {detail}")]
    NumericalBreakdown { t: f64, detail: String },

    /// A coefficient matrix has lower rank than the construction requires.
    #[error("rank too low: rank {rank} of {n}x{n} matrix, need at least {need}")]
    RankTooLow { rank: usize, n: usize, need: usize },

    /// A linear matrix equation admits solutions but none of them is Hermitian.
    #[error("equation solvable but no Hermitian solution within tolerance (residual {residual:.3e})")]
    NoHermitianSolution { residual: f64 },

    /// A verification harness was invoked on data that fails the stated hypotheses.
    #[error("hypothesis not satisfied: {which} (witness t = {t})")]
    HypothesisNotSatisfied { which: String, t: f64 },

    /// I/O failure while reading a problem or weight file.
    #[error("io error on {path}: {detail}")]
    Io { path: String, detail: String },
}

impl Error {
    /// Wraps an evaluation error with the matrix-entry coordinates it came from.
    pub fn at_entry(self, row: usize, col: usize) -> Error {
        Error::EntryEval {
            row,
            col,
            source: Box::new(self),
        }
    }
}

//! Time-dependent matrices with expression entries, and the Hamiltonian
//! problem document built from them.

use super::expr::{diff_expr, eval_expr, parse_expr, print_expr, Expr};
use crate::error::{Error, Result};
use crate::matrix::{c64, ComplexMatrix};
use crate::tol;
use serde::{Deserialize, Serialize};

/// One complex matrix entry as a pair of real expressions.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexEntry {
    pub re: Expr,
    pub im: Expr,
}

impl ComplexEntry {
    pub fn real(re: Expr) -> Self {
        Self {
            re,
            im: Expr::num(0.0),
        }
    }

    pub fn constant(re: f64, im: f64) -> Self {
        Self {
            re: Expr::num(re),
            im: Expr::num(im),
        }
    }
}

/// Matrix-valued function of `t` with per-entry expressions.
///
/// `hermitian` and `real` are declared properties (checked by sampling);
/// `constant` is inferred from the entries never referencing `t`.
#[derive(Debug, Clone)]
pub struct MatrixFunction {
    n: usize,
    entries: Vec<ComplexEntry>, // row-major
    hermitian: bool,
    real: bool,
    constant: bool,
}

impl MatrixFunction {
    /// Builds a matrix function from `n x n` nested entry rows.
    pub fn new(entries: Vec<Vec<ComplexEntry>>, hermitian: bool, real: bool) -> Result<Self> {
        let n = entries.len();
        if n == 0 || n > tol::MAX_DIM {
            return Err(Error::UnsupportedDimension {
                got: n,
                max: tol::MAX_DIM,
                context: "MatrixFunction",
            });
        }
        let mut flat = Vec::with_capacity(n * n);
        for (j, row) in entries.into_iter().enumerate() {
            if row.len() != n {
                return Err(Error::Schema(format!(
                    "matrix row {j} has {} entries, expected {n}",
                    row.len()
                )));
            }
            flat.extend(row);
        }
        let constant = flat
            .iter()
            .all(|e| !e.re.depends_on_t() && !e.im.depends_on_t());
        Ok(Self {
            n,
            entries: flat,
            hermitian,
            real,
            constant,
        })
    }

    /// Constant matrix function from a numeric matrix.
    pub fn from_matrix(m: &ComplexMatrix) -> Self {
        let n = m.dim();
        let entries = (0..n * n)
            .map(|idx| {
                let z = m.entries()[idx];
                ComplexEntry::constant(z.re, z.im)
            })
            .collect();
        let hermitian = m.is_hermitian(None);
        let real = m.max_imag() == 0.0;
        Self {
            n,
            entries,
            hermitian,
            real,
            constant: true,
        }
    }

    /// Zero matrix function.
    pub fn zero(n: usize) -> Result<Self> {
        Ok(Self::from_matrix(&ComplexMatrix::zeros(n)?))
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn is_constant(&self) -> bool {
        self.constant
    }

    pub fn is_declared_hermitian(&self) -> bool {
        self.hermitian
    }

    pub fn is_declared_real(&self) -> bool {
        self.real
    }

    pub fn entry(&self, row: usize, col: usize) -> &ComplexEntry {
        &self.entries[row * self.n + col]
    }

    /// Evaluates the matrix at time `t`.
    pub fn eval(&self, t: f64) -> Result<ComplexMatrix> {
        let mut m = ComplexMatrix::zeros(self.n)?;
        for j in 0..self.n {
            for k in 0..self.n {
                let entry = self.entry(j, k);
                let re = eval_expr(&entry.re, t).map_err(|e| e.at_entry(j, k))?;
                let im = eval_expr(&entry.im, t).map_err(|e| e.at_entry(j, k))?;
                m[(j, k)] = c64(re, im);
            }
        }
        #[cfg(debug_assertions)]
        {
            if self.hermitian {
                let r = m.hermitian_residual();
                debug_assert!(
                    r <= tol::hermitian_tolerance(m.max_abs()),
                    "matrix declared hermitian violates it at t={t}: residual {r}"
                );
            }
            if self.real {
                debug_assert!(
                    m.max_imag() <= tol::hermitian_tolerance(m.max_abs()),
                    "matrix declared real has imaginary part at t={t}"
                );
            }
        }
        Ok(m)
    }

    /// Entrywise symbolic derivative.
    pub fn diff(&self) -> Self {
        let entries = self
            .entries
            .iter()
            .map(|e| ComplexEntry {
                re: diff_expr(&e.re),
                im: diff_expr(&e.im),
            })
            .collect();
        Self {
            n: self.n,
            entries,
            hermitian: false,
            real: self.real,
            constant: self.constant,
        }
    }

    /// True when all off-diagonal entries and all diagonal imaginary parts
    /// are literal zeros, so the matrix is diagonal with real expression
    /// entries by construction.
    pub fn is_syntactically_real_diagonal(&self) -> bool {
        let zero = Expr::num(0.0);
        for j in 0..self.n {
            for k in 0..self.n {
                let e = self.entry(j, k);
                if j != k && (e.re != zero || e.im != zero) {
                    return false;
                }
                if j == k && e.im != zero {
                    return false;
                }
            }
        }
        true
    }

    /// Entrywise square root of a syntactically-diagonal matrix function,
    /// or `None` when the diagonal shape does not hold.
    pub fn symbolic_diagonal_sqrt(&self) -> Option<Self> {
        if !self.is_syntactically_real_diagonal() {
            return None;
        }
        let mut entries = self.entries.clone();
        for j in 0..self.n {
            let d = &mut entries[j * self.n + j];
            d.re = Expr::Call(super::expr::Func::Sqrt, Box::new(d.re.clone()));
        }
        Some(Self {
            n: self.n,
            entries,
            hermitian: self.hermitian,
            real: self.real,
            constant: self.constant,
        })
    }

    /// Max Hermitian residual over `samples` evenly spaced points of `[t0, t1]`.
    pub fn hermitian_residual_sampled(
        &self,
        t0: f64,
        t1: f64,
        samples: usize,
    ) -> Result<(f64, f64)> {
        let mut worst = (0.0_f64, t0);
        for i in 0..samples {
            let t = t0 + (t1 - t0) * i as f64 / (samples.max(2) - 1) as f64;
            let m = self.eval(t)?;
            let r = m.hermitian_residual() / m.max_abs().max(1.0);
            if r > worst.0 {
                worst = (r, t);
            }
        }
        Ok(worst)
    }

    /// Max imaginary-part magnitude over sampled points (realness check).
    pub fn imag_residual_sampled(&self, t0: f64, t1: f64, samples: usize) -> Result<(f64, f64)> {
        let mut worst = (0.0_f64, t0);
        for i in 0..samples {
            let t = t0 + (t1 - t0) * i as f64 / (samples.max(2) - 1) as f64;
            let m = self.eval(t)?;
            let r = m.max_imag() / m.max_abs().max(1.0);
            if r > worst.0 {
                worst = (r, t);
            }
        }
        Ok(worst)
    }
}

/// A linear matrix Hamiltonian problem: coefficients `A`, `B`, `C` with `B`,
/// `C` Hermitian, and the left end `t0` of the half-line under study.
#[derive(Debug, Clone)]
pub struct HamiltonianProblem {
    pub label: String,
    pub t0: f64,
    pub a: MatrixFunction,
    pub b: MatrixFunction,
    pub c: MatrixFunction,
    real_sampled: bool,
}

/// Number of sample points used for load-time Hermitian/realness checks.
const LOAD_SAMPLES: usize = 16;

impl HamiltonianProblem {
    /// Validates dimensions and the Hermitian requirement on `B` and `C`
    /// (sampled over `[t0, t0+10]`), then assembles the problem.
    pub fn new(
        label: impl Into<String>,
        t0: f64,
        a: MatrixFunction,
        b: MatrixFunction,
        c: MatrixFunction,
    ) -> Result<Self> {
        let n = a.dim();
        if b.dim() != n || c.dim() != n {
            return Err(Error::DimensionMismatch {
                left: n,
                right: if b.dim() != n { b.dim() } else { c.dim() },
                context: "HamiltonianProblem",
            });
        }
        let t1 = t0 + 10.0;
        for (name, m) in [("B", &b), ("C", &c)] {
            let (residual, t) = m.hermitian_residual_sampled(t0, t1, LOAD_SAMPLES)?;
            if residual > tol::HERMITIAN_REL {
                return Err(Error::HermitianViolation {
                    matrix: name.into(),
                    t,
                    residual,
                });
            }
        }
        let mut real_sampled = true;
        for m in [&a, &b, &c] {
            let (residual, _) = m.imag_residual_sampled(t0, t1, LOAD_SAMPLES)?;
            if residual > tol::HERMITIAN_REL {
                real_sampled = false;
            }
            if m.is_declared_real() && residual > tol::HERMITIAN_REL {
                return Err(Error::Schema(format!(
                    "matrix declared real has imaginary entries (residual {residual:.3e})"
                )));
            }
        }
        Ok(Self {
            label: label.into(),
            t0,
            a,
            b,
            c,
            real_sampled,
        })
    }

    pub fn dim(&self) -> usize {
        self.a.dim()
    }

    /// True when all three coefficient matrices were real at every sampled point.
    pub fn is_real_sampled(&self) -> bool {
        self.real_sampled
    }
}

// ---------------------------------------------------------------------------
// JSON document format
// ---------------------------------------------------------------------------

fn zero_string() -> String {
    "0".into()
}

#[derive(Debug, Serialize, Deserialize)]
struct EntryDoc {
    re: String,
    #[serde(default = "zero_string")]
    im: String,
}

#[derive(Debug, Serialize, Deserialize)]
struct MatrixDoc {
    entries: Vec<Vec<EntryDoc>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    flags: Vec<String>,
}

#[derive(Debug, Serialize, Deserialize)]
struct ProblemDoc {
    n: usize,
    t0: f64,
    #[serde(default)]
    label: String,
    #[serde(rename = "A")]
    a: MatrixDoc,
    #[serde(rename = "B")]
    b: MatrixDoc,
    #[serde(rename = "C")]
    c: MatrixDoc,
}

fn parse_entry(doc: &EntryDoc, name: &str, row: usize, col: usize) -> Result<ComplexEntry> {
    let re = parse_expr(&doc.re).map_err(|e| {
        Error::Schema(format!("{name} entry ({row},{col}) re `{}`: {e}", doc.re))
    })?;
    let im = parse_expr(&doc.im).map_err(|e| {
        Error::Schema(format!("{name} entry ({row},{col}) im `{}`: {e}", doc.im))
    })?;
    Ok(ComplexEntry { re, im })
}

fn matrix_from_doc(doc: &MatrixDoc, name: &str, n: usize) -> Result<MatrixFunction> {
    if doc.entries.len() != n {
        return Err(Error::Schema(format!(
            "{name} has {} rows, expected {n}",
            doc.entries.len()
        )));
    }
    let mut hermitian = false;
    let mut real = false;
    let mut declared_constant = false;
    for flag in &doc.flags {
        match flag.as_str() {
            "hermitian" => hermitian = true,
            "real" => real = true,
            "constant" => declared_constant = true,
            other => {
                return Err(Error::Schema(format!(
                    "{name}: unknown flag `{other}` (expected hermitian, real, constant)"
                )));
            }
        }
    }
    let mut rows = Vec::with_capacity(n);
    for (j, row) in doc.entries.iter().enumerate() {
        if row.len() != n {
            return Err(Error::Schema(format!(
                "{name} row {j} has {} entries, expected {n}",
                row.len()
            )));
        }
        let mut out = Vec::with_capacity(n);
        for (k, e) in row.iter().enumerate() {
            out.push(parse_entry(e, name, j, k)?);
        }
        rows.push(out);
    }
    let mf = MatrixFunction::new(rows, hermitian, real)?;
    if declared_constant && !mf.is_constant() {
        return Err(Error::Schema(format!(
            "{name} is flagged constant but its entries reference t"
        )));
    }
    Ok(mf)
}

fn matrix_to_doc(m: &MatrixFunction) -> MatrixDoc {
    let n = m.dim();
    let mut flags = Vec::new();
    if m.is_declared_hermitian() {
        flags.push("hermitian".to_string());
    }
    if m.is_declared_real() {
        flags.push("real".to_string());
    }
    let entries = (0..n)
        .map(|j| {
            (0..n)
                .map(|k| {
                    let e = m.entry(j, k);
                    EntryDoc {
                        re: print_expr(&e.re),
                        im: print_expr(&e.im),
                    }
                })
                .collect()
        })
        .collect();
    MatrixDoc { entries, flags }
}

/// Parses a problem from its JSON document text.
pub fn load_problem_str(json: &str) -> Result<HamiltonianProblem> {
    let doc: ProblemDoc =
        serde_json::from_str(json).map_err(|e| Error::Schema(e.to_string()))?;
    if doc.n == 0 || doc.n > tol::MAX_DIM {
        return Err(Error::Schema(format!(
            "dimension n = {} outside supported range 1..={}",
            doc.n,
            tol::MAX_DIM
        )));
    }
    let a = matrix_from_doc(&doc.a, "A", doc.n)?;
    let b = matrix_from_doc(&doc.b, "B", doc.n)?;
    let c = matrix_from_doc(&doc.c, "C", doc.n)?;
    HamiltonianProblem::new(doc.label, doc.t0, a, b, c)
}

/// Parses a standalone matrix document — the same `{entries, flags}` shape
/// the problem document uses for `A`, `B`, `C`.
pub fn load_matrix_str(json: &str) -> Result<MatrixFunction> {
    let doc: MatrixDoc = serde_json::from_str(json).map_err(|e| Error::Schema(e.to_string()))?;
    let n = doc.entries.len();
    if n == 0 || n > tol::MAX_DIM {
        return Err(Error::Schema(format!(
            "matrix has {n} rows, outside supported range 1..={}",
            tol::MAX_DIM
        )));
    }
    matrix_from_doc(&doc, "matrix", n)
}

/// Loads a standalone matrix document from a file path.
pub fn load_matrix_file(path: &str) -> Result<MatrixFunction> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.into(),
        detail: e.to_string(),
    })?;
    load_matrix_str(&text)
}

/// Loads a problem document from a file path.
pub fn load_problem_file(path: &str) -> Result<HamiltonianProblem> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.into(),
        detail: e.to_string(),
    })?;
    load_problem_str(&text)
}

/// Serializes a problem back into its JSON document form.
pub fn problem_to_json(p: &HamiltonianProblem) -> String {
    let doc = ProblemDoc {
        n: p.dim(),
        t0: p.t0,
        label: p.label.clone(),
        a: matrix_to_doc(&p.a),
        b: matrix_to_doc(&p.b),
        c: matrix_to_doc(&p.c),
    };
    serde_json::to_string_pretty(&doc).expect("problem document serialization")
}

#[cfg(test)]
mod tests {
    use super::*;

    const HARMONIC: &str = r#"{
        "n": 2, "t0": 0.0, "label": "harmonic",
        "A": {"entries": [[{"re": "0"}, {"re": "0"}], [{"re": "0"}, {"re": "0"}]]},
        "B": {"entries": [[{"re": "1"}, {"re": "0"}], [{"re": "0"}, {"re": "1"}]],
               "flags": ["hermitian", "real", "constant"]},
        "C": {"entries": [[{"re": "-1"}, {"re": "0"}], [{"re": "0"}, {"re": "-1"}]],
               "flags": ["hermitian", "real"]}
    }"#;

    #[test]
    fn loads_and_roundtrips() {
        let p = load_problem_str(HARMONIC).unwrap();
        assert_eq!(p.dim(), 2);
        assert_eq!(p.label, "harmonic");
        assert!(p.b.is_constant());
        assert!(p.is_real_sampled());
        let b0 = p.b.eval(3.0).unwrap();
        assert_eq!(b0, ComplexMatrix::identity(2).unwrap());

        let json = problem_to_json(&p);
        let p2 = load_problem_str(&json).unwrap();
        assert_eq!(p2.dim(), 2);
        assert_eq!(p2.b.eval(1.0).unwrap(), b0);
        for j in 0..2 {
            for k in 0..2 {
                assert_eq!(p.a.entry(j, k), p2.a.entry(j, k));
                assert_eq!(p.c.entry(j, k), p2.c.entry(j, k));
            }
        }
    }

    #[test]
    fn im_defaults_to_zero_and_t_entries_work() {
        let json = r#"{
            "n": 1, "t0": 1.0, "label": "scalar",
            "A": {"entries": [[{"re": "0"}]]},
            "B": {"entries": [[{"re": "1 + t^2"}]]},
            "C": {"entries": [[{"re": "-1/(2*t^2)"}]]}
        }"#;
        let p = load_problem_str(json).unwrap();
        assert!(!p.b.is_constant());
        let b = p.b.eval(2.0).unwrap();
        assert_eq!(b[(0, 0)], c64(5.0, 0.0));
    }

    #[test]
    fn rejects_non_hermitian_b() {
        let json = r#"{
            "n": 2, "t0": 0.0, "label": "bad",
            "A": {"entries": [[{"re": "0"}, {"re": "0"}], [{"re": "0"}, {"re": "0"}]]},
            "B": {"entries": [[{"re": "1"}, {"re": "t"}], [{"re": "0"}, {"re": "1"}]]},
            "C": {"entries": [[{"re": "-1"}, {"re": "0"}], [{"re": "0"}, {"re": "-1"}]]}
        }"#;
        match load_problem_str(json) {
            Err(Error::HermitianViolation { matrix, .. }) => assert_eq!(matrix, "B"),
            other => panic!("expected HermitianViolation, got {other:?}"),
        }
    }

    #[test]
    fn schema_errors() {
        // wrong row count
        let bad_shape = r#"{
            "n": 2, "t0": 0.0,
            "A": {"entries": [[{"re": "0"}, {"re": "0"}]]},
            "B": {"entries": [[{"re": "1"}, {"re": "0"}], [{"re": "0"}, {"re": "1"}]]},
            "C": {"entries": [[{"re": "-1"}, {"re": "0"}], [{"re": "0"}, {"re": "-1"}]]}
        }"#;
        assert!(matches!(load_problem_str(bad_shape), Err(Error::Schema(_))));

        // expression typo is reported with entry coordinates
        let bad_expr = HARMONIC.replace("\"re\": \"-1\"", "\"re\": \"-1 +\"");
        match load_problem_str(&bad_expr) {
            Err(Error::Schema(msg)) => assert!(msg.contains("C entry (0,0)"), "{msg}"),
            other => panic!("expected Schema error, got {other:?}"),
        }

        // constant flag contradicting a t-dependent entry
        let bad_const = r#"{
            "n": 1, "t0": 0.0,
            "A": {"entries": [[{"re": "t"}]], "flags": ["constant"]},
            "B": {"entries": [[{"re": "1"}]]},
            "C": {"entries": [[{"re": "-1"}]]}
        }"#;
        assert!(matches!(load_problem_str(bad_const), Err(Error::Schema(_))));

        // unknown flag
        let bad_flag = HARMONIC.replace("\"real\", ", "\"positive\", ");
        assert!(matches!(load_problem_str(&bad_flag), Err(Error::Schema(_))));
    }

    #[test]
    fn symbolic_diagonal_sqrt() {
        let b = MatrixFunction::new(
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
        let sqrt_b = b.symbolic_diagonal_sqrt().unwrap();
        let at2 = sqrt_b.eval(2.0).unwrap();
        assert!((at2[(0, 0)].re - 5.0_f64.sqrt()).abs() < 1e-15);
        assert!((at2[(1, 1)].re - 2.0).abs() < 1e-15);

        // derivative of sqrt(t^2+1) is t/sqrt(t^2+1)
        let ds = sqrt_b.diff().eval(2.0).unwrap();
        assert!((ds[(0, 0)].re - 2.0 / 5.0_f64.sqrt()).abs() < 1e-12);

        let full = MatrixFunction::new(
            vec![
                vec![
                    ComplexEntry::constant(1.0, 0.0),
                    ComplexEntry::constant(0.5, 0.0),
                ],
                vec![
                    ComplexEntry::constant(0.5, 0.0),
                    ComplexEntry::constant(1.0, 0.0),
                ],
            ],
            true,
            true,
        )
        .unwrap();
        assert!(full.symbolic_diagonal_sqrt().is_none());
    }
}

//! Seeded randomized verification of the matrix identities and inequalities
//! the oscillation checkers rely on.
//!
//! Every suite draws its cases from a [`ChaCha8Rng`] stream derived from the
//! caller's seed, so a run is reproducible bit for bit: the same seed and case
//! count always visit the same matrices and report the same margins.  A case
//! passes when its margin (distance from violating the statement, tolerance
//! included) is nonnegative; violations are kept with a printable
//! counterexample so a failing run identifies the exact inputs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::error::Result;
use crate::matrix::{
    hermitian_eigen, lambda_min, nu_0, nu_g, separator, sum_entries, ComplexMatrix,
    PositiveFunctional, C64,
};

/// Relative tolerance for statements that hold exactly in exact arithmetic.
const IDENTITY_REL_TOL: f64 = 1e-10;
/// Absolute slack granted to inequalities evaluated in floating point.
const INEQUALITY_SLACK: f64 = 1e-9;
/// Matrix dimensions sampled by the generators.
const MIN_DIM: usize = 1;
const MAX_DIM: usize = 5;

/// One violating case: which draw failed, by how much, and on what inputs.
#[derive(Debug, Clone)]
pub struct PropertyCase {
    pub index: usize,
    pub margin: f64,
    pub detail: String,
}

/// Outcome of one suite: the worst margin over all cases and any violations.
#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub name: &'static str,
    pub statement: &'static str,
    pub seed: u64,
    pub cases: usize,
    pub worst_margin: f64,
    pub failures: Vec<PropertyCase>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    /// One-line summary suitable for terminal output.
    pub fn render_line(&self) -> String {
        if self.passed() {
            format!(
                "{}: {} cases, worst margin {:.3e} — ok",
                self.name, self.cases, self.worst_margin
            )
        } else {
            format!(
                "{}: {} cases, worst margin {:.3e} — {} FAILED",
                self.name,
                self.cases,
                self.worst_margin,
                self.failures.len()
            )
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "name": self.name,
            "statement": self.statement,
            "seed": self.seed,
            "cases": self.cases,
            "worst_margin": self.worst_margin,
            "passed": self.passed(),
            "failures": self.failures.iter().map(|f| json!({
                "index": f.index,
                "margin": f.margin,
                "detail": f.detail,
            })).collect::<Vec<_>>(),
        })
    }
}

/// Runs all suites with `cases` draws each and returns one report per suite.
pub fn run_suites(seed: u64, cases: usize) -> Result<Vec<SuiteReport>> {
    let runners: [(&'static str, &'static str, SuiteFn); 8] = [
        (
            "trace-commutation",
            "tr(M1 M2) = tr(M2 M1) for complex square M1, M2",
            trace_commutation_case,
        ),
        (
            "hermitian-quadratic-trace-bound",
            "tr(S H S*) >= lambda_1(H)/n * ([tr (S+S*)/2]^2 + [tr (S-S*)/2i]^2) for Hermitian H >= 0",
            hermitian_quadratic_case,
        ),
        (
            "functional-quadratic-bound",
            "g(M* H M) >= nu_g(H) |g(M)|^2 for Hermitian H >= 0 and any positive functional g",
            functional_quadratic_case,
        ),
        (
            "normalized-functional-eigenvalue-bounds",
            "lambda_1(D) <= g(D) <= lambda_n(D) for Hermitian D >= 0 and normalized g",
            normalized_eigenvalue_case,
        ),
        (
            "coupling-weight-bounds",
            "nu_0(B) <= lambda_1(B) <= tr B, and nu_g(B) <= lambda_n(B) <= tr B for normalized g",
            coupling_weight_case,
        ),
        (
            "inverse-trace-sandwich",
            "1/tr(B^-1) <= lambda_1(B) <= n/tr(B^-1) for Hermitian B > 0",
            inverse_trace_case,
        ),
        (
            "separator-absorption-identity",
            "Sum((L + Sep L) U) = (i Im(Sum L)/n) Sum U for complex square L, U",
            separator_absorption_case,
        ),
        (
            "entry-sum-quadratic-bound",
            "Sum(Y B Y) >= lambda_1(B)/n * (Sum Y)^2 for Hermitian Y and Hermitian B >= 0",
            entry_sum_quadratic_case,
        ),
    ];

    let mut reports = Vec::with_capacity(runners.len());
    for (k, (name, statement, case)) in runners.into_iter().enumerate() {
        let stream = seed ^ 0x9e37_79b9_7f4a_7c15u64.wrapping_mul(k as u64 + 1);
        reports.push(run_cases(name, statement, seed, stream, cases, case)?);
    }
    Ok(reports)
}

type SuiteFn = fn(&mut ChaCha8Rng, usize) -> Result<(f64, Option<String>)>;

fn run_cases(
    name: &'static str,
    statement: &'static str,
    seed: u64,
    stream: u64,
    cases: usize,
    case: SuiteFn,
) -> Result<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(stream);
    let mut worst = f64::INFINITY;
    let mut failures = Vec::new();
    for index in 0..cases {
        let (margin, detail) = case(&mut rng, index)?;
        if margin < worst {
            worst = margin;
        }
        if margin < 0.0 {
            failures.push(PropertyCase {
                index,
                margin,
                detail: detail.unwrap_or_default(),
            });
        }
    }
    Ok(SuiteReport {
        name,
        statement,
        seed,
        cases,
        worst_margin: worst,
        failures,
    })
}

fn rand_dim(rng: &mut ChaCha8Rng) -> usize {
    rng.gen_range(MIN_DIM..=MAX_DIM)
}

fn rand_c(rng: &mut ChaCha8Rng) -> C64 {
    C64::new(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0))
}

fn random_matrix(rng: &mut ChaCha8Rng, n: usize) -> Result<ComplexMatrix> {
    ComplexMatrix::from_fn(n, |_, _| rand_c(rng))
}

fn random_hermitian(rng: &mut ChaCha8Rng, n: usize) -> Result<ComplexMatrix> {
    Ok(random_matrix(rng, n)?.hermitian_part())
}

/// Random Hermitian PSD matrix; roughly a quarter of the draws are singular.
fn random_psd(rng: &mut ChaCha8Rng, n: usize) -> Result<ComplexMatrix> {
    let mut factor = random_matrix(rng, n)?;
    if rng.gen_bool(0.25) {
        let col = rng.gen_range(0..n);
        for j in 0..n {
            factor[(j, col)] = C64::new(0.0, 0.0);
        }
    }
    Ok((&factor.adjoint() * &factor).hermitian_part())
}

/// Random Hermitian positive definite matrix (eigenvalues bounded below).
fn random_pd(rng: &mut ChaCha8Rng, n: usize) -> Result<ComplexMatrix> {
    let factor = random_matrix(rng, n)?;
    let mut pd = (&factor.adjoint() * &factor).hermitian_part();
    let lift = 0.2 + rng.gen::<f64>();
    for j in 0..n {
        pd[(j, j)] += C64::new(lift, 0.0);
    }
    Ok(pd)
}

/// Random positive functional with a strictly positive definite weight.
fn random_functional(rng: &mut ChaCha8Rng, n: usize, normalized: bool) -> Result<PositiveFunctional> {
    let mut weight = random_pd(rng, n)?;
    if normalized {
        let tr = weight.trace().re;
        weight = weight.scale(C64::new(1.0 / tr, 0.0));
    }
    PositiveFunctional::from_weight(weight)
}

fn fmt_matrix(label: &str, m: &ComplexMatrix) -> String {
    let n = m.dim();
    let rows: Vec<String> = (0..n)
        .map(|j| {
            let cols: Vec<String> = (0..n)
                .map(|k| {
                    let v = m[(j, k)];
                    format!("{:+.12e}{:+.12e}i", v.re, v.im)
                })
                .collect();
            format!("[{}]", cols.join(", "))
        })
        .collect();
    format!("{label} = [{}]", rows.join(", "))
}

fn trace_commutation_case(rng: &mut ChaCha8Rng, _index: usize) -> Result<(f64, Option<String>)> {
    let n = rand_dim(rng);
    let m1 = random_matrix(rng, n)?;
    let m2 = random_matrix(rng, n)?;
    let lhs = (&m1 * &m2).trace();
    let rhs = (&m2 * &m1).trace();
    let scale = 1.0 + lhs.norm().max(rhs.norm());
    let margin = IDENTITY_REL_TOL * scale - (lhs - rhs).norm();
    let detail = (margin < 0.0).then(|| {
        format!(
            "tr(M1 M2) = {lhs}, tr(M2 M1) = {rhs}; {}; {}",
            fmt_matrix("M1", &m1),
            fmt_matrix("M2", &m2)
        )
    });
    Ok((margin, detail))
}

fn hermitian_quadratic_case(rng: &mut ChaCha8Rng, _index: usize) -> Result<(f64, Option<String>)> {
    let n = rand_dim(rng);
    let s = random_matrix(rng, n)?;
    let h = random_psd(rng, n)?;
    let lhs = (&(&s * &h) * &s.adjoint()).trace().re;
    let herm_tr = s.hermitian_part().trace().re;
    let anti_tr = s.anti_hermitian_part().trace().im;
    let rhs = lambda_min(&h)? / n as f64 * (herm_tr * herm_tr + anti_tr * anti_tr);
    let margin = lhs - rhs + INEQUALITY_SLACK;
    let detail = (margin < 0.0).then(|| {
        format!(
            "tr(S H S*) = {lhs}, bound = {rhs}; {}; {}",
            fmt_matrix("S", &s),
            fmt_matrix("H", &h)
        )
    });
    Ok((margin, detail))
}

fn functional_quadratic_case(rng: &mut ChaCha8Rng, index: usize) -> Result<(f64, Option<String>)> {
    let n = rand_dim(rng);
    let mut m = random_matrix(rng, n)?;
    match index % 3 {
        1 => m = m.hermitian_part(),
        2 => {
            let col = rng.gen_range(0..n);
            for j in 0..n {
                m[(j, col)] = C64::new(0.0, 0.0);
            }
        }
        _ => {}
    }
    let h = random_psd(rng, n)?;
    let g = random_functional(rng, n, false)?;
    let lhs = g.apply(&(&(&m.adjoint() * &h) * &m))?.re;
    let gm = g.apply(&m)?;
    let rhs = nu_g(&g, &h)? * gm.norm_sqr();
    let margin = lhs - rhs + INEQUALITY_SLACK;
    let detail = (margin < 0.0).then(|| {
        format!(
            "g(M* H M) = {lhs}, nu_g(H) |g(M)|^2 = {rhs}; {}; {}; {}",
            fmt_matrix("M", &m),
            fmt_matrix("H", &h),
            fmt_matrix("W", g.weight())
        )
    });
    Ok((margin, detail))
}

fn normalized_eigenvalue_case(rng: &mut ChaCha8Rng, _index: usize) -> Result<(f64, Option<String>)> {
    let n = rand_dim(rng);
    let d = random_psd(rng, n)?;
    let g = random_functional(rng, n, true)?;
    let value = g.apply_real(&d)?;
    let spectrum = hermitian_eigen(&d, None)?;
    let margin =
        (value - spectrum.lambda_min()).min(spectrum.lambda_max() - value) + INEQUALITY_SLACK;
    let detail = (margin < 0.0).then(|| {
        format!(
            "g(D) = {value}, lambda_1 = {}, lambda_n = {}; {}; {}",
            spectrum.lambda_min(),
            spectrum.lambda_max(),
            fmt_matrix("D", &d),
            fmt_matrix("W", g.weight())
        )
    });
    Ok((margin, detail))
}

fn coupling_weight_case(rng: &mut ChaCha8Rng, _index: usize) -> Result<(f64, Option<String>)> {
    let n = rand_dim(rng);
    let b = random_psd(rng, n)?;
    let g = random_functional(rng, n, true)?;
    let spectrum = hermitian_eigen(&b, None)?;
    let tr = b.trace().re;
    let trace_chain = (spectrum.lambda_min() - nu_0(&b)?).min(tr - spectrum.lambda_min());
    let general_chain = (spectrum.lambda_max() - nu_g(&g, &b)?).min(tr - spectrum.lambda_max());
    let margin = trace_chain.min(general_chain) + INEQUALITY_SLACK;
    let detail = (margin < 0.0).then(|| {
        format!(
            "nu_0 = {}, nu_g = {}, lambda_1 = {}, lambda_n = {}, tr = {tr}; {}; {}",
            nu_0(&b).unwrap_or(f64::NAN),
            nu_g(&g, &b).unwrap_or(f64::NAN),
            spectrum.lambda_min(),
            spectrum.lambda_max(),
            fmt_matrix("B", &b),
            fmt_matrix("W", g.weight())
        )
    });
    Ok((margin, detail))
}

fn inverse_trace_case(rng: &mut ChaCha8Rng, _index: usize) -> Result<(f64, Option<String>)> {
    let n = rand_dim(rng);
    let b = random_pd(rng, n)?;
    let inv_tr = b.inverse()?.trace().re;
    let low = 1.0 / inv_tr;
    let high = n as f64 / inv_tr;
    let lambda = lambda_min(&b)?;
    let margin = (lambda - low).min(high - lambda) + INEQUALITY_SLACK;
    let detail = (margin < 0.0).then(|| {
        format!(
            "lambda_1 = {lambda}, 1/tr(B^-1) = {low}, n/tr(B^-1) = {high}; {}",
            fmt_matrix("B", &b)
        )
    });
    Ok((margin, detail))
}

fn separator_absorption_case(rng: &mut ChaCha8Rng, _index: usize) -> Result<(f64, Option<String>)> {
    let n = rand_dim(rng);
    let l = random_matrix(rng, n)?;
    let u = random_matrix(rng, n)?;
    let sep = separator(&l);
    let lhs = sum_entries(&(&(&l + &sep) * &u));
    let rhs = C64::new(0.0, sum_entries(&l).im / n as f64) * sum_entries(&u);
    let scale = 1.0 + lhs.norm().max(rhs.norm());
    let margin = IDENTITY_REL_TOL * scale - (lhs - rhs).norm();
    let detail = (margin < 0.0).then(|| {
        format!(
            "Sum((L + Sep L) U) = {lhs}, expected {rhs}; {}; {}",
            fmt_matrix("L", &l),
            fmt_matrix("U", &u)
        )
    });
    Ok((margin, detail))
}

fn entry_sum_quadratic_case(rng: &mut ChaCha8Rng, _index: usize) -> Result<(f64, Option<String>)> {
    let n = rand_dim(rng);
    let y = random_hermitian(rng, n)?;
    let b = random_psd(rng, n)?;
    let lhs = sum_entries(&(&(&y * &b) * &y)).re;
    let sum_y = sum_entries(&y).re;
    let rhs = lambda_min(&b)? / n as f64 * sum_y * sum_y;
    let margin = lhs - rhs + INEQUALITY_SLACK;
    let detail = (margin < 0.0).then(|| {
        format!(
            "Sum(Y B Y) = {lhs}, bound = {rhs}; {}; {}",
            fmt_matrix("Y", &y),
            fmt_matrix("B", &b)
        )
    });
    Ok((margin, detail))
}

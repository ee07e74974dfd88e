//! Command-line front end for the oscillation engine: criterion runs with a
//! simulation cross-check, direct simulation with zero reporting, the
//! randomized verification suites, and access to the built-in problem
//! catalog.
//!
//! Exit codes: 0 on success, 1 when a verification suite finds a violation,
//! 2 on input errors (bad flags, unreadable or malformed documents, unknown
//! catalog ids), 3 on numerical breakdown. Output is deterministic for fixed
//! inputs and seeds.

use std::fs;
use std::path::Path;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use hamosc_core::calculus::Trend;
use hamosc_core::catalog;
use hamosc_core::criteria::{run_all, CriterionConfig, EigenWeight, SimulationSummary};
use hamosc_core::dsl::{
    load_matrix_file, load_problem_file, parse_expr, print_expr, problem_to_json,
    HamiltonianProblem,
};
use hamosc_core::dynamics::{find_det_zeros, integrate_hamiltonian, ConjoinedInitialData};
use hamosc_core::matrix::{ComplexMatrix, PositiveFunctional};
use hamosc_core::verdict::{CriterionStatus, CriterionVerdict};
use hamosc_core::verify::{run_suites, SuiteReport};
use hamosc_core::{Error, Result};

#[derive(Parser)]
#[command(
    name = "hamosc",
    version,
    about = "Oscillation analysis for linear matrix Hamiltonian systems \
             Phi' = A Phi + B Psi, Psi' = C Phi - A* Psi"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every oscillation criterion and cross-check against simulation
    Check(CheckArgs),
    /// Integrate the system and report determinant zeros
    Simulate(SimulateArgs),
    /// Full report: every hypothesis, limit trace, and auxiliary matrix
    Report(CheckArgs),
    /// List the built-in problems or show one as a problem document
    Catalog(CatalogArgs),
    /// Run the seeded verification suites for the matrix inequalities
    VerifyLemmas(VerifyArgs),
}

#[derive(Args)]
struct CheckArgs {
    /// Catalog id or path to a problem document
    problem: String,
    /// Length of the observation interval starting at t0
    #[arg(long)]
    horizon: Option<f64>,
    /// Divergence threshold a required limit quantity must clear
    #[arg(long)]
    theta: Option<f64>,
    /// Trailing checkpoint window that must be strictly increasing
    #[arg(long)]
    window: Option<usize>,
    /// Positive functional: `trace`, `trace-normalized`, or `weight-file:PATH`
    #[arg(long)]
    functional: Option<String>,
    /// Matrix document supplying Lambda(t)
    #[arg(long)]
    lambda_file: Option<String>,
    /// Matrix document overriding the minimum-norm F(t)
    #[arg(long)]
    f_file: Option<String>,
    /// Mixing weight alpha(t), an expression in t
    #[arg(long)]
    alpha: Option<String>,
    /// Mixing weight beta(t); alpha + beta must be identically 1
    #[arg(long)]
    beta: Option<String>,
    /// Diagonal shift gamma(t) for the separator construction
    #[arg(long)]
    gamma: Option<String>,
    /// Quadratic comparison weight: `lambda-min` or `nu0`
    #[arg(long)]
    eigen_weight: Option<String>,
    /// Write the verdict JSON to this path
    #[arg(long)]
    json: Option<String>,
}

#[derive(Args)]
struct SimulateArgs {
    /// Catalog id or path to a problem document
    problem: String,
    /// Length of the integration interval starting at t0
    #[arg(long, default_value_t = 200.0)]
    horizon: f64,
    /// Write the trajectory as CSV to this path
    #[arg(long)]
    csv: Option<String>,
    /// Matrix document with a constant Hermitian Y0; Phi0 is the identity
    #[arg(long)]
    y0_file: Option<String>,
}

#[derive(Args)]
struct CatalogArgs {
    #[command(subcommand)]
    action: CatalogAction,
}

#[derive(Subcommand)]
enum CatalogAction {
    /// One line per built-in problem
    List,
    /// Print one problem as its JSON document plus its default configuration
    Show { id: String },
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 1729)]
    seed: u64,
    /// Random cases per suite
    #[arg(long, default_value_t = 200)]
    cases: usize,
    /// Write all suite reports as JSON to this path
    #[arg(long)]
    json: Option<String>,
    /// Where to write counterexamples when a suite fails
    #[arg(long, default_value = "lemma-counterexamples.json")]
    counterexamples: String,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::Check(args) => cmd_check(args, false),
        Command::Report(args) => cmd_check(args, true),
        Command::Simulate(args) => cmd_simulate(args),
        Command::Catalog(args) => cmd_catalog(args),
        Command::VerifyLemmas(args) => cmd_verify_lemmas(args),
    }
}

/// Numerical failures exit with 3; everything else that reaches `main` is an
/// input problem and exits with 2.
fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::Domain { .. }
        | Error::NoConvergence { .. }
        | Error::CoefficientEvaluation { .. }
        | Error::StepUnderflow { .. }
        | Error::NumericalBreakdown { .. }
        | Error::NoHermitianSolution { .. } => 3,
        Error::EntryEval { source, .. } => exit_code_for(source),
        _ => 2,
    }
}

/// A problem reference is a catalog id first, a file path second. Catalog
/// entries bring their own configuration (mixing weights in particular);
/// file-based problems start from the defaults.
fn resolve_problem(reference: &str) -> Result<(HamiltonianProblem, CriterionConfig)> {
    if let Some(entry) = catalog::find(reference) {
        return Ok((entry.problem()?, entry.config()?));
    }
    if Path::new(reference).exists() {
        let p = load_problem_file(reference)?;
        let cfg = CriterionConfig::for_dim(p.dim())?;
        return Ok((p, cfg));
    }
    Err(Error::Schema(format!(
        "`{reference}` is neither a catalog id nor a readable problem file; \
         `hamosc catalog list` shows the built-in ids"
    )))
}

/// Loads a matrix document that must be constant, evaluated at `t0`.
fn load_constant_matrix(path: &str, what: &str, t0: f64) -> Result<ComplexMatrix> {
    let mf = load_matrix_file(path)?;
    if !mf.is_constant() {
        return Err(Error::Schema(format!(
            "{what} document {path} references t; a constant matrix is required"
        )));
    }
    mf.eval(t0)
}

fn apply_criterion_flags(
    cfg: &mut CriterionConfig,
    args: &CheckArgs,
    p: &HamiltonianProblem,
) -> Result<()> {
    if let Some(h) = args.horizon {
        if !(h > 0.0) {
            return Err(Error::Schema(format!("horizon must be positive, got {h}")));
        }
        cfg.trend.horizon = h;
    }
    if let Some(theta) = args.theta {
        cfg.trend.theta = Some(theta);
    }
    if let Some(window) = args.window {
        cfg.trend.window = window;
    }
    if let Some(spec) = &args.functional {
        cfg.g = match spec.as_str() {
            "trace" => PositiveFunctional::trace(p.dim())?,
            "trace-normalized" => PositiveFunctional::trace_normalized(p.dim())?,
            other => match other.strip_prefix("weight-file:") {
                Some(path) => {
                    let weight = load_constant_matrix(path, "weight", p.t0)?;
                    PositiveFunctional::from_weight(weight)?
                }
                None => {
                    return Err(Error::Schema(format!(
                        "unknown functional `{other}`; expected trace, trace-normalized, \
                         or weight-file:PATH"
                    )));
                }
            },
        };
    }
    if let Some(path) = &args.lambda_file {
        cfg.lambda = Some(load_matrix_file(path)?);
    }
    if let Some(path) = &args.f_file {
        cfg.f_override = Some(load_matrix_file(path)?);
    }
    if let Some(src) = &args.alpha {
        cfg.alpha = parse_expr(src)?;
    }
    if let Some(src) = &args.beta {
        cfg.beta = parse_expr(src)?;
    }
    if let Some(src) = &args.gamma {
        cfg.gamma = parse_expr(src)?;
    }
    if let Some(weight) = &args.eigen_weight {
        cfg.eigen_weight = match weight.as_str() {
            "lambda-min" => EigenWeight::LambdaMin,
            "nu0" => EigenWeight::NuZero,
            other => {
                return Err(Error::Schema(format!(
                    "unknown eigen weight `{other}`; expected lambda-min or nu0"
                )));
            }
        };
    }
    Ok(())
}

fn write_file(path: &str, content: &str) -> Result<()> {
    fs::write(path, content).map_err(|e| Error::Io {
        path: path.into(),
        detail: e.to_string(),
    })
}

/// One-line summary of why a verdict stopped short of certification.
fn verdict_headline(v: &CriterionVerdict) -> String {
    match v.status {
        CriterionStatus::OscillatoryTrendCertified => String::new(),
        CriterionStatus::Inconclusive => v
            .traces
            .iter()
            .find(|t| t.required && t.report.trend != Trend::DivergesToPlusInfinity)
            .map(|t| format!("not certified divergent: {}", t.name))
            .unwrap_or_else(|| "no required limit quantities".into()),
        CriterionStatus::NotApplicable => v
            .failed_hypothesis()
            .map(|h| {
                let mut line = format!("failed hypothesis: {}", h.name);
                if let Some(t) = h.witness_t {
                    line.push_str(&format!(" (witness t = {t:.6})"));
                }
                line
            })
            .unwrap_or_default(),
    }
}

fn simulation_lines(s: &SimulationSummary) -> String {
    let mut out = format!(
        "simulation: reached t = {:.6} of {:.6}, {} determinant zero(s), oscillation observed: {}\n",
        s.reached,
        s.horizon,
        s.zeros.len(),
        if s.oscillation_observed { "yes" } else { "no" },
    );
    if !s.zeros.is_empty() {
        let listed: Vec<String> = s.zeros.iter().take(12).map(|z| format!("{z:.6}")).collect();
        let suffix = if s.zeros.len() > 12 { ", ..." } else { "" };
        out.push_str(&format!("  zeros: [{}{}]\n", listed.join(", "), suffix));
    }
    if !s.suspected.is_empty() {
        let listed: Vec<String> = s.suspected.iter().take(12).map(|z| format!("{z:.6}")).collect();
        out.push_str(&format!("  suspected dips: [{}]\n", listed.join(", ")));
    }
    out
}

fn cmd_check(args: CheckArgs, detailed: bool) -> Result<ExitCode> {
    let (p, mut cfg) = resolve_problem(&args.problem)?;
    apply_criterion_flags(&mut cfg, &args, &p)?;
    let report = run_all(&p, &cfg)?;

    if detailed {
        print!("{}", report.render_text());
    } else {
        println!("problem: {} (n = {}, t0 = {})", report.problem, p.dim(), p.t0);
        println!();
        for v in &report.verdicts {
            let line = format!(
                "{:<6} {:<27} {}",
                v.criterion_id,
                v.status.as_str(),
                verdict_headline(v)
            );
            println!("{}", line.trim_end());
        }
        println!();
        print!("{}", simulation_lines(&report.simulation));
        for d in &report.disagreements {
            println!("review: {d}");
        }
    }

    if let Some(path) = &args.json {
        let doc = serde_json::to_string_pretty(&report.to_json())
            .expect("verdict serialization is infallible");
        write_file(path, &(doc + "\n"))?;
        println!("verdict json written to {path}");
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_simulate(args: SimulateArgs) -> Result<ExitCode> {
    let (p, _) = resolve_problem(&args.problem)?;
    if !(args.horizon > 0.0) {
        return Err(Error::Schema(format!(
            "horizon must be positive, got {}",
            args.horizon
        )));
    }
    let init = match &args.y0_file {
        Some(path) => {
            let y0 = load_constant_matrix(path, "Y0", p.t0)?;
            ConjoinedInitialData::new(ComplexMatrix::identity(y0.dim())?, y0)?
        }
        None => ConjoinedInitialData::principal(p.dim())?,
    };
    let traj = integrate_hamiltonian(&p, &init, p.t0 + args.horizon)?;
    let zeros = find_det_zeros(&traj, p.is_real_sampled() && init.is_real());

    println!("problem: {} (n = {}, t0 = {})", p.label, p.dim(), p.t0);
    println!(
        "integrated to t = {:.6} (requested {:.6}); {} step(s) accepted, {} rejected; \
         max conjoinedness residual {:.3e}",
        traj.t_end(),
        p.t0 + args.horizon,
        traj.steps_accepted,
        traj.steps_rejected,
        traj.max_conjoined_residual,
    );
    if zeros.zeros.is_empty() {
        println!(
            "no determinant zeros on [{}, {:.6}]",
            p.t0,
            traj.t_end()
        );
    } else {
        println!("determinant zeros ({}):", zeros.zeros.len());
        for z in &zeros.zeros {
            println!(
                "  t = {:.6}   bracket width {:.3e}, min |det| {:.3e}",
                z.t, z.width, z.det_min
            );
        }
    }
    for dip in &zeros.suspected {
        println!(
            "suspected dip at t = {:.6} (min |det| {:.3e} against scale {:.3e})",
            dip.t, dip.det_min, dip.scale
        );
    }

    if let Some(path) = &args.csv {
        write_file(path, &traj.to_csv())?;
        println!("trajectory csv written to {path}");
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_catalog(args: CatalogArgs) -> Result<ExitCode> {
    match args.action {
        CatalogAction::List => {
            for entry in catalog::entries() {
                println!("{:<26} {}", entry.id, entry.summary);
            }
            Ok(ExitCode::SUCCESS)
        }
        CatalogAction::Show { id } => {
            let entry = catalog::find(&id).ok_or_else(|| {
                Error::Schema(format!(
                    "unknown catalog id `{id}`; `hamosc catalog list` shows the built-in ids"
                ))
            })?;
            let p = entry.problem()?;
            let cfg = entry.config()?;
            println!("id: {}", entry.id);
            println!("summary: {}", entry.summary);
            println!(
                "mixing weights: alpha = {}, beta = {}, gamma = {}",
                print_expr(&cfg.alpha),
                print_expr(&cfg.beta),
                print_expr(&cfg.gamma),
            );
            println!("{}", problem_to_json(&p));
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn suite_reports_json(reports: &[SuiteReport]) -> String {
    let doc = serde_json::to_string_pretty(&json!(reports
        .iter()
        .map(SuiteReport::to_json)
        .collect::<Vec<_>>()))
    .expect("suite report serialization is infallible");
    doc + "\n"
}

fn cmd_verify_lemmas(args: VerifyArgs) -> Result<ExitCode> {
    if args.cases == 0 {
        return Err(Error::Schema("cases must be at least 1".into()));
    }
    let reports = run_suites(args.seed, args.cases)?;
    println!(
        "verification suites: seed {}, {} cases each",
        args.seed, args.cases
    );
    for report in &reports {
        println!("{}", report.render_line());
    }
    if let Some(path) = &args.json {
        write_file(path, &suite_reports_json(&reports))?;
        println!("suite reports written to {path}");
    }

    let failed: Vec<&SuiteReport> = reports.iter().filter(|r| !r.passed()).collect();
    if failed.is_empty() {
        println!("all {} suites passed", reports.len());
        return Ok(ExitCode::SUCCESS);
    }
    for report in &failed {
        for case in report.failures.iter().take(3) {
            println!(
                "counterexample [{} case {}] margin {:.3e}: {}",
                report.name, case.index, case.margin, case.detail
            );
        }
    }
    let failing: Vec<SuiteReport> = failed.iter().map(|r| (*r).clone()).collect();
    write_file(&args.counterexamples, &suite_reports_json(&failing))?;
    println!(
        "{} suite(s) failed; counterexamples written to {}",
        failed.len(),
        args.counterexamples
    );
    Ok(ExitCode::from(1))
}

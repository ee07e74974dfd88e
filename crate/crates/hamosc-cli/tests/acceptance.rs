//! Acceptance battery: one test per shipping criterion, each printing an
//! `ACCEPTANCE n: PASS` line on success. The expected values are closed
//! forms or independently derived targets, never outputs of the engine
//! itself.

use std::f64::consts::{FRAC_PI_2, PI};
use std::process::{Command, Output};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use hamosc_core::calculus::{Quadrature, TrendConfig};
use hamosc_core::catalog::{self, with_balanced_sums, with_zero_column_sums, with_zero_row_sums};
use hamosc_core::criteria::{check_t3_1, check_t3_2, check_t3_5, run_all};
use hamosc_core::dsl::{parse_expr, HamiltonianProblem, MatrixFunction};
use hamosc_core::dynamics::{
    check_correspondence, find_det_zeros, integrate_hamiltonian, ConjoinedInitialData,
};
use hamosc_core::equations::{lyapunov_by_quadrature, solve_lyapunov, SolveStatus};
use hamosc_core::matrix::{c64, separator, ComplexMatrix, C64};
use hamosc_core::riccati::{
    solve_scalar_riccati, two_by_two_oscillation_check, BlowUpStatus, ScalarRiccatiProblem,
    TwoByTwoSystem,
};
use hamosc_core::verdict::CriterionStatus;
use hamosc_core::verify::run_suites;

fn run_bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hamosc"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn rand_c(rng: &mut ChaCha8Rng) -> C64 {
    c64(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0))
}

fn random_matrix(rng: &mut ChaCha8Rng, n: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, |_, _| rand_c(rng)).unwrap()
}

fn random_hermitian(rng: &mut ChaCha8Rng, n: usize) -> ComplexMatrix {
    random_matrix(rng, n).hermitian_part()
}

fn random_pd(rng: &mut ChaCha8Rng, n: usize, lift: f64) -> ComplexMatrix {
    let f = random_matrix(rng, n);
    let mut pd = (&f.adjoint() * &f).hermitian_part();
    let shift = lift + rng.gen::<f64>();
    for j in 0..n {
        pd[(j, j)] += c64(shift, 0.0);
    }
    pd
}

/// Rotation drift with identity coupling: `check` must leave the dense
/// comparison inconclusive yet certify the trace-based criterion, and the
/// principal determinant must vanish at `pi/2 + k pi`.
#[test]
fn acceptance_1_rotation_verdicts_and_zeros() {
    let start = Instant::now();

    let json_path = std::env::temp_dir().join(format!(
        "hamosc-acceptance-rotation-{}.json",
        std::process::id()
    ));
    let out = run_bin(&["check", "rotation", "--json", json_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&json_path).unwrap()).unwrap();
    let criteria = doc["criteria"].as_array().unwrap();
    let status_of = |id: &str| -> String {
        criteria
            .iter()
            .find(|c| c["id"] == id)
            .unwrap_or_else(|| panic!("criterion {id} missing"))["status"]
            .as_str()
            .unwrap()
            .to_string()
    };
    assert_eq!(status_of("T1.1"), "Inconclusive");
    assert_eq!(status_of("T3.4"), "OscillatoryTrendCertified");

    let sim = run_bin(&["simulate", "rotation", "--horizon", "25"]);
    assert_eq!(sim.status.code(), Some(0));
    let sim_text = String::from_utf8(sim.stdout).unwrap();
    let zeros: Vec<f64> = sim_text
        .lines()
        .filter(|l| l.trim_start().starts_with("t = "))
        .map(|l| l.split_whitespace().nth(2).unwrap().parse().unwrap())
        .collect();
    assert!(zeros.len() >= 6, "only {} zeros reported", zeros.len());
    for (k, z) in zeros.iter().take(6).enumerate() {
        let expected = FRAC_PI_2 + k as f64 * PI;
        assert!(
            (z - expected).abs() <= 1e-4,
            "zero {k}: got {z}, expected {expected}"
        );
    }

    assert!(start.elapsed().as_secs_f64() < 5.0);
    println!("ACCEPTANCE 1: PASS");
}

/// Degenerate coupling with a drift outside range(B): the rank-based
/// checkers must refuse with a witness, and the square-root reduction's J2
/// trace must equal t - t0 exactly (slope m = 1).
#[test]
fn acceptance_2_degenerate_drift_rank_refusal_and_j2() {
    let start = Instant::now();

    let entry = catalog::find("degenerate-drift").unwrap();
    let p = entry.problem().unwrap();
    let cfg = entry.config().unwrap();

    for verdict in [check_t3_1(&p, &cfg).unwrap(), check_t3_2(&p, &cfg).unwrap()] {
        assert_eq!(verdict.status, CriterionStatus::NotApplicable);
        let failed = verdict.failed_hypothesis().expect("failed hypothesis recorded");
        assert!(
            failed.name.contains("B(t)X = A(t) solvable"),
            "unexpected hypothesis: {}",
            failed.name
        );
        assert!(failed.evidence.contains("rank"));
        assert!(failed.witness_t.is_some());
    }

    let t35 = check_t3_5(&p, &cfg).unwrap();
    assert_eq!(t35.status, CriterionStatus::OscillatoryTrendCertified);
    let j2 = t35.traces.iter().find(|t| t.name == "J2").unwrap();
    let last = j2.checkpoints.len() - 1;
    for i in 0..10 {
        let idx = i * last / 9;
        let expected = j2.checkpoints[idx] - p.t0;
        assert!(
            (j2.values[idx] - expected).abs() <= 1e-6,
            "J2({}) = {}, expected {}",
            j2.checkpoints[idx],
            j2.values[idx],
            expected
        );
    }

    assert!(start.elapsed().as_secs_f64() < 5.0);
    println!("ACCEPTANCE 2: PASS");
}

/// The three sum-killing completions must produce drifts whose mixed
/// separator vanishes identically, for random smooth entries, at every
/// sample point, with the mixing weights each completion is built for.
#[test]
fn acceptance_3_sum_killing_completions_each_branch() {
    let mut rng = ChaCha8Rng::seed_from_u64(20260814);
    let n = 3;

    type Completion = fn(&ComplexMatrix) -> hamosc_core::Result<ComplexMatrix>;
    let branches: [(Completion, f64, f64); 3] = [
        (with_zero_column_sums, 1.0, 0.0),
        (with_zero_row_sums, 0.0, 1.0),
        (with_balanced_sums, 0.5, 0.5),
    ];

    for (complete, alpha, beta) in branches {
        let base = random_matrix(&mut rng, n);
        let wave = random_matrix(&mut rng, n);
        let drift = random_matrix(&mut rng, n);
        for s in 0..50 {
            let t = 0.37 * s as f64;
            let free = ComplexMatrix::from_fn(n, |j, k| {
                base[(j, k)] + wave[(j, k)] * t.sin() + drift[(j, k)] * (2.0 * t).cos()
            })
            .unwrap();
            let a = complete(&free).unwrap();
            let mixed = &a.scale(c64(alpha, 0.0)) + &a.adjoint().scale(c64(beta, 0.0));
            let sep = separator(&mixed);
            let worst = sep
                .entries()
                .iter()
                .map(|z| z.norm())
                .fold(0.0_f64, f64::max);
            assert!(
                worst <= 1e-10,
                "separator entry {worst:.3e} at t = {t} (alpha = {alpha}, beta = {beta})"
            );
        }
    }
    println!("ACCEPTANCE 3: PASS");
}

/// The eight seeded verification suites pass at full volume inside the
/// time budget.
#[test]
fn acceptance_4_property_suites_at_volume() {
    let start = Instant::now();
    let reports = run_suites(20260814, 200).unwrap();
    assert_eq!(reports.len(), 8);
    for report in &reports {
        assert!(
            report.passed(),
            "suite {} failed: {:?}",
            report.name,
            report.failures.first()
        );
    }
    assert!(start.elapsed().as_secs_f64() < 30.0);
    println!("ACCEPTANCE 4: PASS");
}

/// On random constant-coefficient problems the Riccati blow-up time must
/// agree with the first determinant zero, and Y = Psi Phi^-1 must track the
/// Riccati solution before it.
#[test]
fn acceptance_5_riccati_correspondence_on_random_problems() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut with_zero = 0usize;
    for i in 0..30 {
        let n = 1 + i % 3;
        let a = random_matrix(&mut rng, n);
        let b = random_pd(&mut rng, n, 0.3);
        let g = random_matrix(&mut rng, n);
        let mut c = (&g.adjoint() * &g).hermitian_part().scale(c64(-1.0, 0.0));
        let pull = 0.5 + rng.gen::<f64>();
        for j in 0..n {
            c[(j, j)] += c64(-pull, 0.0);
        }

        let p = HamiltonianProblem::new(
            format!("random-constant-{i}"),
            0.0,
            MatrixFunction::from_matrix(&a),
            MatrixFunction::from_matrix(&b),
            MatrixFunction::from_matrix(&c),
        )
        .unwrap();
        let init = ConjoinedInitialData::principal(n).unwrap();
        let report = check_correspondence(&p, &init, 60.0).unwrap();

        assert!(
            report.consistent,
            "problem {i}: first zero {:?} vs blow-up {:?}",
            report.first_det_zero, report.blow_up_time
        );
        assert!(
            report.max_y_residual <= 1e-5,
            "problem {i}: Y residual {:.3e}",
            report.max_y_residual
        );
        assert!(report.compared_points > 0);
        if report.first_det_zero.is_some() {
            with_zero += 1;
        }
    }
    assert!(
        with_zero >= 10,
        "only {with_zero} of 30 problems produced a determinant zero"
    );
    println!("ACCEPTANCE 5: PASS");
}

/// Catalog soundness: nothing certifies on a problem whose simulation shows
/// fewer than two determinant zeros, and the growing control certifies
/// nowhere.
#[test]
fn acceptance_6_catalog_soundness() {
    let entries = catalog::entries();
    assert!(entries.len() >= 8);
    assert!(entries.iter().any(|e| e.id == "hyperbolic-control"));

    for entry in entries {
        let p = entry.problem().unwrap();
        let cfg = entry.config().unwrap();
        let report = run_all(&p, &cfg).unwrap();
        let certified = report
            .verdicts
            .iter()
            .filter(|v| v.status == CriterionStatus::OscillatoryTrendCertified)
            .count();
        if certified > 0 {
            assert!(
                report.simulation.zeros.len() >= 2,
                "{}: {certified} certification(s) but only {} zero(s)",
                entry.id,
                report.simulation.zeros.len()
            );
        }
        if entry.id == "hyperbolic-control" {
            assert_eq!(certified, 0, "the control must never certify");
        }
    }
    println!("ACCEPTANCE 6: PASS");
}

/// The eigendecomposition Lyapunov solver and the quadrature construction
/// agree on positive definite instances, and every solve leaves a tiny
/// residual.
#[test]
fn acceptance_7_lyapunov_solver_cross_validation() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let quad = Quadrature::default();
    for i in 0..50 {
        let n = 1 + i % 4;
        let b = random_pd(&mut rng, n, 0.3);
        let r = random_hermitian(&mut rng, n);

        let report = solve_lyapunov(&b, &r).unwrap();
        assert_eq!(report.status, SolveStatus::Unique, "instance {i}");
        assert!(
            report.residual <= 1e-8 * (1.0 + r.frobenius()),
            "instance {i}: residual {:.3e}",
            report.residual
        );
        let x = report.solution.as_ref().unwrap();

        let xq = lyapunov_by_quadrature(&b, &r, None, &quad).unwrap();
        let gap = (x - &xq).frobenius();
        assert!(gap <= 1e-6, "instance {i}: solver disagreement {gap:.3e}");
    }
    println!("ACCEPTANCE 7: PASS");
}

/// Scalar sanity: the textbook Riccati equation escapes at pi/2, and the
/// harmonic comparison system is certified oscillatory with determinant
/// zeros at pi/2 + k pi.
#[test]
fn acceptance_8_scalar_blow_up_and_harmonic_verdict() {
    let problem = ScalarRiccatiProblem {
        a: parse_expr("1").unwrap(),
        b: parse_expr("0").unwrap(),
        c: parse_expr("1").unwrap(),
        t0: 0.0,
        y0: 0.0,
    };
    let (_, report) = solve_scalar_riccati(&problem, 3.0).unwrap();
    match report.status {
        BlowUpStatus::BlowUp { t_star, .. } => {
            assert!(
                (t_star - FRAC_PI_2).abs() <= 1e-4,
                "blow-up at {t_star}, expected pi/2"
            );
        }
        BlowUpStatus::ExistsOnWholeInterval => panic!("blow-up not detected"),
    }

    let sys = TwoByTwoSystem {
        a11: parse_expr("0").unwrap(),
        a12: parse_expr("1").unwrap(),
        a21: parse_expr("-1").unwrap(),
        a22: parse_expr("0").unwrap(),
        t0: 0.0,
    };
    let osc = two_by_two_oscillation_check(&sys, &TrendConfig::default()).unwrap();
    assert!(osc.a12_nonnegative);
    assert!(osc.oscillatory, "harmonic comparison system must certify");

    let harmonic = catalog::find("harmonic").unwrap().problem().unwrap();
    let init = ConjoinedInitialData::principal(1).unwrap();
    let traj = integrate_hamiltonian(&harmonic, &init, 25.0).unwrap();
    let zeros = find_det_zeros(&traj, true);
    assert!(zeros.zeros.len() >= 6);
    for (k, z) in zeros.zeros.iter().take(6).enumerate() {
        let expected = FRAC_PI_2 + k as f64 * PI;
        assert!(
            (z.t - expected).abs() <= 1e-4,
            "zero {k} at {}, expected {expected}",
            z.t
        );
    }
    println!("ACCEPTANCE 8: PASS");
}

//! Verdict types shared by all criterion checkers, and their JSON and
//! plain-text renderings.
//!
//! A checker never *proves* oscillation: the strongest status it can return
//! is trend certification over a finite horizon. The status is always
//! derived from the recorded evidence — a failed hypothesis forces
//! `NotApplicable`, and certification requires every required trace to be
//! certified divergent — so a verdict can be audited from its own fields.

use serde_json::{json, Value};

use crate::calculus::{Trend, TrendReport};
use crate::matrix::ComplexMatrix;

/// Outcome of one criterion on one problem.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CriterionStatus {
    /// All hypotheses hold and every required limit quantity cleared the
    /// divergence gates on the horizon.
    OscillatoryTrendCertified,
    /// Hypotheses hold but at least one required quantity was not certified
    /// divergent. Says nothing about non-oscillation.
    Inconclusive,
    /// A hypothesis of the criterion failed, with a witness.
    NotApplicable,
}

impl CriterionStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            CriterionStatus::OscillatoryTrendCertified => "OscillatoryTrendCertified",
            CriterionStatus::Inconclusive => "Inconclusive",
            CriterionStatus::NotApplicable => "NotApplicable",
        }
    }
}

/// One checked hypothesis with its evidence.
#[derive(Debug, Clone)]
pub struct HypothesisRecord {
    pub name: String,
    pub passed: bool,
    /// What was checked and what was found, human-readable.
    pub evidence: String,
    /// A time witnessing the failure, when one exists.
    pub witness_t: Option<f64>,
}

impl HypothesisRecord {
    pub fn pass(name: impl Into<String>, evidence: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            passed: true,
            evidence: evidence.into(),
            witness_t: None,
        }
    }

    pub fn fail(name: impl Into<String>, evidence: impl Into<String>, witness_t: f64) -> Self {
        Self {
            name: name.into(),
            passed: false,
            evidence: evidence.into(),
            witness_t: Some(witness_t),
        }
    }
}

/// A named limit quantity sampled on the checkpoint grid, with its trend
/// classification. `required` marks the traces whose divergence the
/// criterion's conclusion actually needs; informational variants (for
/// example a `nu_0` substitute for a smallest-eigenvalue weight) carry
/// `required = false` and never affect the status.
#[derive(Debug, Clone)]
pub struct NamedTrace {
    pub name: String,
    pub checkpoints: Vec<f64>,
    pub values: Vec<f64>,
    pub report: TrendReport,
    pub required: bool,
}

impl NamedTrace {
    /// Right end of the observation interval.
    pub fn horizon_end(&self) -> f64 {
        self.checkpoints.last().copied().unwrap_or(f64::NAN)
    }

    /// Final sampled value.
    pub fn value_at_end(&self) -> f64 {
        self.values.last().copied().unwrap_or(f64::NAN)
    }

    pub fn classification(&self) -> &'static str {
        match self.report.trend {
            Trend::DivergesToPlusInfinity => "DivergesToPlusInfinity",
            Trend::NotCertified => "NotCertified",
            Trend::Undetermined => "Undetermined",
        }
    }
}

/// An auxiliary matrix a checker solved for along the way (an `F`, `H` or
/// `Λ`), reported at a representative time so the choice can be reproduced
/// or overridden.
#[derive(Debug, Clone)]
pub struct AuxiliaryMatrix {
    pub name: String,
    /// Selection policy and solve path.
    pub detail: String,
    pub t: f64,
    pub value: ComplexMatrix,
}

/// Full outcome of one criterion checker.
#[derive(Debug, Clone)]
pub struct CriterionVerdict {
    pub criterion_id: String,
    pub status: CriterionStatus,
    pub hypotheses: Vec<HypothesisRecord>,
    pub traces: Vec<NamedTrace>,
    pub auxiliary: Vec<AuxiliaryMatrix>,
    /// Reading notes: interpretation choices the checker applied.
    pub notes: Vec<String>,
}

impl CriterionVerdict {
    /// Derives the status from the evidence: any failed hypothesis means
    /// `NotApplicable`; otherwise certification requires every required
    /// trace to be certified divergent (and at least one required trace).
    pub fn from_evidence(
        criterion_id: impl Into<String>,
        hypotheses: Vec<HypothesisRecord>,
        traces: Vec<NamedTrace>,
        auxiliary: Vec<AuxiliaryMatrix>,
        notes: Vec<String>,
    ) -> Self {
        let status = if hypotheses.iter().any(|h| !h.passed) {
            CriterionStatus::NotApplicable
        } else {
            let required: Vec<_> = traces.iter().filter(|t| t.required).collect();
            if !required.is_empty()
                && required
                    .iter()
                    .all(|t| t.report.trend == Trend::DivergesToPlusInfinity)
            {
                CriterionStatus::OscillatoryTrendCertified
            } else {
                CriterionStatus::Inconclusive
            }
        };
        Self {
            criterion_id: criterion_id.into(),
            status,
            hypotheses,
            traces,
            auxiliary,
            notes,
        }
    }

    /// Shortcut for a checker that failed a precondition before any trace
    /// could be assembled.
    pub fn not_applicable(
        criterion_id: impl Into<String>,
        hypothesis: HypothesisRecord,
        notes: Vec<String>,
    ) -> Self {
        Self::from_evidence(criterion_id, vec![hypothesis], Vec::new(), Vec::new(), notes)
    }

    /// First failed hypothesis, if any.
    pub fn failed_hypothesis(&self) -> Option<&HypothesisRecord> {
        self.hypotheses.iter().find(|h| !h.passed)
    }

    /// The documented JSON shape:
    /// `{id, status, hypotheses: [...], traces: [{name, T, value_at_T, classification}]}`.
    pub fn to_json(&self) -> Value {
        json!({
            "id": self.criterion_id,
            "status": self.status.as_str(),
            "hypotheses": self
                .hypotheses
                .iter()
                .map(|h| {
                    json!({
                        "name": h.name,
                        "passed": h.passed,
                        "evidence": h.evidence,
                        "witness_t": h.witness_t,
                    })
                })
                .collect::<Vec<_>>(),
            "traces": self
                .traces
                .iter()
                .map(|tr| {
                    json!({
                        "name": tr.name,
                        "T": tr.horizon_end(),
                        "value_at_T": tr.value_at_end(),
                        "classification": tr.classification(),
                    })
                })
                .collect::<Vec<_>>(),
        })
    }

    /// Multi-line plain-text rendering for reports.
    pub fn render_text(&self) -> String {
        let mut out = format!("{:<6} {}\n", self.criterion_id, self.status.as_str());
        for h in &self.hypotheses {
            let mark = if h.passed { "ok  " } else { "FAIL" };
            out.push_str(&format!("    [{mark}] {}: {}", h.name, h.evidence));
            if let Some(t) = h.witness_t {
                out.push_str(&format!(" (witness t = {t:.6})"));
            }
            out.push('\n');
        }
        for tr in &self.traces {
            let req = if tr.required { "required" } else { "variant " };
            out.push_str(&format!(
                "    [{req}] {} = {:.6e} at T = {:.3} -> {} ({})\n",
                tr.name,
                tr.value_at_end(),
                tr.horizon_end(),
                tr.classification(),
                tr.report.detail,
            ));
        }
        for a in &self.auxiliary {
            out.push_str(&format!("    [aux] {} at t = {:.3}: {}\n", a.name, a.t, a.detail));
        }
        for n in &self.notes {
            out.push_str(&format!("    [note] {n}\n"));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::certify_trend;

    fn diverging_trace(name: &str, required: bool) -> NamedTrace {
        let checkpoints: Vec<f64> = (1..=64).map(|k| k as f64).collect();
        let values: Vec<f64> = checkpoints.iter().map(|t| 10.0 * t).collect();
        let report = certify_trend(&values, 50.0, 8);
        NamedTrace {
            name: name.into(),
            checkpoints,
            values,
            report,
            required,
        }
    }

    fn bounded_trace(name: &str, required: bool) -> NamedTrace {
        let checkpoints: Vec<f64> = (1..=64).map(|k| k as f64).collect();
        let values: Vec<f64> = checkpoints.iter().map(|t| 1.0 - 1.0 / t).collect();
        let report = certify_trend(&values, 50.0, 8);
        NamedTrace {
            name: name.into(),
            checkpoints,
            values,
            report,
            required,
        }
    }

    #[test]
    fn certified_requires_all_required_traces() {
        let v = CriterionVerdict::from_evidence(
            "T0.0",
            vec![HypothesisRecord::pass("B >= 0", "sampled")],
            vec![diverging_trace("I1", true), bounded_trace("I2", true)],
            Vec::new(),
            Vec::new(),
        );
        assert_eq!(v.status, CriterionStatus::Inconclusive);

        let v = CriterionVerdict::from_evidence(
            "T0.0",
            vec![HypothesisRecord::pass("B >= 0", "sampled")],
            vec![diverging_trace("I1", true), bounded_trace("I2", false)],
            Vec::new(),
            Vec::new(),
        );
        assert_eq!(v.status, CriterionStatus::OscillatoryTrendCertified);
    }

    #[test]
    fn failed_hypothesis_forces_not_applicable() {
        let v = CriterionVerdict::from_evidence(
            "T0.0",
            vec![HypothesisRecord::fail("B > 0", "lambda_1 = -1", 2.5)],
            vec![diverging_trace("I1", true)],
            Vec::new(),
            Vec::new(),
        );
        assert_eq!(v.status, CriterionStatus::NotApplicable);
        let failed = v.failed_hypothesis().expect("has failure");
        assert_eq!(failed.witness_t, Some(2.5));
    }

    #[test]
    fn no_required_trace_is_inconclusive() {
        let v = CriterionVerdict::from_evidence(
            "T0.0",
            vec![HypothesisRecord::pass("B >= 0", "sampled")],
            vec![bounded_trace("variant", false)],
            Vec::new(),
            Vec::new(),
        );
        assert_eq!(v.status, CriterionStatus::Inconclusive);
    }

    #[test]
    fn json_shape_has_documented_fields() {
        let v = CriterionVerdict::from_evidence(
            "T1.1",
            vec![HypothesisRecord::pass("B > 0", "sampled 201 points")],
            vec![diverging_trace("v1", true)],
            Vec::new(),
            Vec::new(),
        );
        let j = v.to_json();
        assert_eq!(j["id"], "T1.1");
        assert_eq!(j["status"], "OscillatoryTrendCertified");
        assert_eq!(j["traces"][0]["name"], "v1");
        assert_eq!(j["traces"][0]["T"], 64.0);
        assert_eq!(j["traces"][0]["classification"], "DivergesToPlusInfinity");
        assert!(j["hypotheses"][0]["passed"].as_bool().unwrap());
    }

    #[test]
    fn text_rendering_lists_evidence() {
        let v = CriterionVerdict::from_evidence(
            "T3.4",
            vec![HypothesisRecord::fail("B > 0", "lambda_1(B(3)) = 0", 3.0)],
            Vec::new(),
            Vec::new(),
            vec!["undefined integrand symbol read as C".into()],
        );
        let text = v.render_text();
        assert!(text.contains("T3.4"));
        assert!(text.contains("NotApplicable"));
        assert!(text.contains("FAIL"));
        assert!(text.contains("witness t = 3"));
        assert!(text.contains("[note]"));
    }
}

//! Claim verification: runs both sides of each claimed relationship over a
//! suite, calibrates the branch-counting convention and emits reports.

mod calibrate;
mod checks;
mod claims;
mod suite;

pub use calibrate::{calibrate_branch_convention, Calibration, CandidateResult};
pub use checks::{check_csp_encodings, check_csp_solvers, check_sat_encodings, check_sat_solvers};
pub use claims::{direct_plan, dp_literal_plan, dp_plan, dual_plan, fc_plan, hidden_plan, literal_plan, log_plan, mac_plan};
pub use suite::SuiteSpec;

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::csp::{write_csp, CspSearchStats};
use crate::encoding::Amo;
use crate::error::{Error, Result};
use crate::sat::{write_dimacs, SearchStats};
use claims::{eval_csp, eval_sat, Eval, Sample};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum ClaimId {
    T1,
    T2,
    T3,
    T4,
    T5,
    T6,
    T7,
    #[serde(rename = "T8a")]
    T8Log,
    #[serde(rename = "T8b")]
    T8Ac,
    #[serde(rename = "T9a")]
    T9Fc,
    #[serde(rename = "T9b")]
    T9Mac,
    #[serde(rename = "T10a")]
    T10Fc,
    #[serde(rename = "T10b")]
    T10Mac,
    S1,
}

impl ClaimId {
    pub const ALL: [ClaimId; 14] = [
        ClaimId::T1,
        ClaimId::T2,
        ClaimId::T3,
        ClaimId::T4,
        ClaimId::T5,
        ClaimId::T6,
        ClaimId::T7,
        ClaimId::T8Log,
        ClaimId::T8Ac,
        ClaimId::T9Fc,
        ClaimId::T9Mac,
        ClaimId::T10Fc,
        ClaimId::T10Mac,
        ClaimId::S1,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ClaimId::T1 => "T1",
            ClaimId::T2 => "T2",
            ClaimId::T3 => "T3",
            ClaimId::T4 => "T4",
            ClaimId::T5 => "T5",
            ClaimId::T6 => "T6",
            ClaimId::T7 => "T7",
            ClaimId::T8Log => "T8a",
            ClaimId::T8Ac => "T8b",
            ClaimId::T9Fc => "T9a",
            ClaimId::T9Mac => "T9b",
            ClaimId::T10Fc => "T10a",
            ClaimId::T10Mac => "T10b",
            ClaimId::S1 => "S1",
        }
    }

    /// Parses a comma-separated selection. `all` selects every claim and a
    /// bare `T8`, `T9` or `T10` selects both of its parts.
    pub fn parse_selection(text: &str) -> Result<Vec<ClaimId>> {
        let mut out = Vec::new();
        for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let matched: Vec<ClaimId> = if item.eq_ignore_ascii_case("all") {
                ClaimId::ALL.to_vec()
            } else {
                ClaimId::ALL
                    .into_iter()
                    .filter(|c| {
                        let id = c.as_str();
                        id.eq_ignore_ascii_case(item)
                            || (id.len() == item.len() + 1
                                && id[..item.len()].eq_ignore_ascii_case(item)
                                && id.ends_with(['a', 'b']))
                    })
                    .collect()
            };
            if matched.is_empty() {
                return Err(Error::Invalid(format!("unknown claim `{item}`")));
            }
            out.extend(matched);
        }
        out.sort();
        out.dedup();
        if out.is_empty() {
            return Err(Error::Invalid("no claims selected".into()));
        }
        Ok(out)
    }

    pub fn claim(self) -> TheoremClaim {
        use Metric::*;
        use Quantifier::*;
        let (description, quantifier, lhs, rhs, metric) = match self {
            ClaimId::T1 => (
                "AC on the dual encoding does more work than unit propagation",
                Dominance,
                "ac3 on dual",
                "unit propagation",
                ConflictDetection,
            ),
            ClaimId::T2 => (
                "AC on the hidden variable encoding does the same work as unit propagation",
                Equivalence,
                "ac3 on hidden",
                "unit propagation",
                PrunedSet,
            ),
            ClaimId::T3 => (
                "AC on the literal encoding compared with unit propagation (relation observed)",
                Equivalence,
                "ac3 on literal",
                "unit propagation",
                ConflictDetection,
            ),
            ClaimId::T4 => (
                "DP strictly dominates FC on the dual encoding",
                Dominance,
                "dp",
                "fc on dual",
                BranchCount,
            ),
            ClaimId::T5 => (
                "DP is incomparable to MAC on the dual encoding",
                Incomparability,
                "dp",
                "mac on dual",
                BranchCount,
            ),
            ClaimId::T6 => (
                "DP explores the same number of branches as MAC on the hidden variable encoding",
                Equivalence,
                "dp",
                "mac on hidden",
                BranchCount,
            ),
            ClaimId::T7 => (
                "DP strictly dominates MAC on the literal encoding",
                Dominance,
                "dp",
                "mac on literal",
                BranchCount,
            ),
            ClaimId::T8Log => (
                "unit propagation on the direct encoding does more work than on the log encoding",
                Dominance,
                "unit propagation on direct",
                "unit propagation on log",
                ConflictDetection,
            ),
            ClaimId::T8Ac => (
                "unit propagation on the direct encoding does less work than AC on the original problem",
                Dominance,
                "ac3",
                "unit propagation on direct",
                ConflictDetection,
            ),
            ClaimId::T9Fc => (
                "DP on the direct encoding has the same search tree as FC",
                Equivalence,
                "dp on direct",
                "fc",
                BranchCount,
            ),
            ClaimId::T9Mac => (
                "DP on the direct encoding is strictly dominated by MAC",
                Dominance,
                "mac",
                "dp on direct",
                BranchCount,
            ),
            ClaimId::T10Fc => (
                "DP on the log encoding is strictly dominated by FC",
                Dominance,
                "fc",
                "dp on log",
                BranchCount,
            ),
            ClaimId::T10Mac => (
                "DP on the log encoding is strictly dominated by MAC",
                Dominance,
                "mac",
                "dp on log",
                BranchCount,
            ),
            ClaimId::S1 => (
                "unit propagation on the support encoding does the same work as AC on the original problem",
                Equivalence,
                "unit propagation on support",
                "ac3",
                PrunedSet,
            ),
        };
        TheoremClaim {
            id: self,
            description,
            quantifier,
            lhs,
            rhs,
            metric,
            input: if self <= ClaimId::T7 { InputClass::Sat } else { InputClass::BinaryCsp },
        }
    }
}

impl fmt::Display for ClaimId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ClaimId {
    type Err = Error;

    fn from_str(s: &str) -> Result<ClaimId> {
        ClaimId::ALL
            .into_iter()
            .find(|c| c.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Invalid(format!("unknown claim `{s}`")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantifier {
    /// lhs cost <= rhs cost everywhere, strictly somewhere.
    Dominance,
    /// lhs cost = rhs cost everywhere.
    Equivalence,
    /// Each side strictly better somewhere.
    Incomparability,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    ConflictDetection,
    PrunedSet,
    BranchCount,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum InputClass {
    Sat,
    BinaryCsp,
}

/// A claimed relationship between two procedures. Costs are compared with
/// lower meaning stronger: a detected conflict costs 0 and a missed one 1,
/// and search costs are the calibrated branch metric.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TheoremClaim {
    pub id: ClaimId,
    pub description: &'static str,
    pub quantifier: Quantifier,
    pub lhs: &'static str,
    pub rhs: &'static str,
    pub metric: Metric,
    pub input: InputClass,
}

/// Which search count stands for "branches".
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BranchMetric {
    DecisionsTotal,
    DecisionsPositive,
    Nodes,
    FailedLeaves,
}

/// How DP branches on the direct encoding.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PolarityRule {
    PositiveFirst,
    ValueSelection,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Convention {
    pub metric: BranchMetric,
    pub polarity: PolarityRule,
}

impl Convention {
    /// Candidates in the order calibration tries them.
    pub const CANDIDATES: [Convention; 8] = {
        use BranchMetric::*;
        use PolarityRule::*;
        [
            Convention::new(DecisionsTotal, PositiveFirst),
            Convention::new(DecisionsTotal, ValueSelection),
            Convention::new(DecisionsPositive, PositiveFirst),
            Convention::new(DecisionsPositive, ValueSelection),
            Convention::new(Nodes, PositiveFirst),
            Convention::new(Nodes, ValueSelection),
            Convention::new(FailedLeaves, PositiveFirst),
            Convention::new(FailedLeaves, ValueSelection),
        ]
    };

    pub const fn new(metric: BranchMetric, polarity: PolarityRule) -> Convention {
        Convention { metric, polarity }
    }

    /// DP's count under this convention.
    pub fn dp(&self, s: &SearchStats) -> u64 {
        match self.metric {
            BranchMetric::DecisionsTotal => s.decisions_total,
            BranchMetric::DecisionsPositive => s.decisions_positive,
            BranchMetric::Nodes => s.nodes,
            BranchMetric::FailedLeaves => s.failed_leaves,
        }
    }

    /// The CSP search's count. Both decision conventions compare against
    /// value branches.
    pub fn csp(&self, s: &CspSearchStats) -> u64 {
        match self.metric {
            BranchMetric::DecisionsTotal | BranchMetric::DecisionsPositive => s.branches,
            BranchMetric::Nodes => s.nodes,
            BranchMetric::FailedLeaves => s.failed_leaves,
        }
    }

    pub fn name(&self) -> String {
        let m = match self.metric {
            BranchMetric::DecisionsTotal => "decisions_total",
            BranchMetric::DecisionsPositive => "decisions_positive",
            BranchMetric::Nodes => "nodes",
            BranchMetric::FailedLeaves => "failed_leaves",
        };
        let p = match self.polarity {
            PolarityRule::PositiveFirst => "positive_first",
            PolarityRule::ValueSelection => "value_selection",
        };
        format!("{m}/{p}")
    }
}

/// An instance singled out by a report, stored verbatim (DIMACS or CSP
/// JSON text).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    /// Position of the instance in the suite's canonical order.
    pub index: u64,
    pub lhs: u64,
    pub rhs: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    pub instance: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TheoremReport {
    pub claim: TheoremClaim,
    /// Instances in the suite, skipped ones included.
    pub instances: u64,
    /// Instances where the metric is undefined or an encoding was refused.
    pub skipped: u64,
    pub violations: u64,
    /// Instances where the left side was strictly better (dominance only).
    pub strict_witnesses: u64,
    /// Instances where the left side was strictly better.
    pub lhs_better: u64,
    /// Instances where the right side was strictly better.
    pub rhs_better: u64,
    pub convention: String,
    pub pass: bool,
    pub violation_examples: Vec<Witness>,
    pub strict_example: Option<Witness>,
    pub lhs_better_example: Option<Witness>,
    pub rhs_better_example: Option<Witness>,
    pub notes: Vec<String>,
}

impl TheoremReport {
    /// `lhs_better/rhs_better`, the CSV form of the incomparability counts.
    pub fn incomparability_witnesses(&self) -> String {
        format!("{}/{}", self.lhs_better, self.rhs_better)
    }
}

const MAX_VIOLATION_EXAMPLES: usize = 3;

struct Accumulator {
    report: TheoremReport,
    first_error: Option<String>,
}

impl Accumulator {
    fn new(claim: TheoremClaim, convention: String) -> Accumulator {
        Accumulator {
            report: TheoremReport {
                claim,
                instances: 0,
                skipped: 0,
                violations: 0,
                strict_witnesses: 0,
                lhs_better: 0,
                rhs_better: 0,
                convention,
                pass: false,
                violation_examples: Vec::new(),
                strict_example: None,
                lhs_better_example: None,
                rhs_better_example: None,
                notes: Vec::new(),
            },
            first_error: None,
        }
    }

    fn add(&mut self, index: u64, outcome: Result<Eval>, text: impl Fn() -> String) {
        let r = &mut self.report;
        r.instances += 1;
        let s: Sample = match outcome {
            Ok(Eval::Sample(s)) => s,
            Ok(Eval::Degenerate) => {
                r.skipped += 1;
                return;
            }
            Err(e) => {
                r.skipped += 1;
                self.first_error.get_or_insert_with(|| format!("instance {index}: {e}"));
                return;
            }
        };
        let witness = |detail: Option<String>| Witness {
            index,
            lhs: s.lhs,
            rhs: s.rhs,
            detail,
            instance: text(),
        };
        let violated = s.problem.is_some()
            || match r.claim.quantifier {
                Quantifier::Dominance => s.lhs > s.rhs,
                Quantifier::Equivalence => s.lhs != s.rhs,
                Quantifier::Incomparability => false,
            };
        if violated {
            r.violations += 1;
            if r.violation_examples.len() < MAX_VIOLATION_EXAMPLES {
                r.violation_examples.push(witness(s.problem.clone()));
            }
        }
        if s.lhs < s.rhs {
            r.lhs_better += 1;
            if r.claim.quantifier == Quantifier::Dominance {
                r.strict_witnesses += 1;
                if r.strict_example.is_none() {
                    r.strict_example = Some(witness(None));
                }
            }
            if r.lhs_better_example.is_none() {
                r.lhs_better_example = Some(witness(None));
            }
        } else if s.lhs > s.rhs {
            r.rhs_better += 1;
            if r.rhs_better_example.is_none() {
                r.rhs_better_example = Some(witness(None));
            }
        }
    }

    fn finish(mut self) -> TheoremReport {
        let r = &mut self.report;
        r.pass = match r.claim.quantifier {
            Quantifier::Dominance => r.violations == 0 && r.strict_witnesses > 0,
            Quantifier::Equivalence => r.violations == 0,
            Quantifier::Incomparability => r.violations == 0 && r.lhs_better > 0 && r.rhs_better > 0,
        };
        if r.skipped > 0 {
            let why = match r.claim.metric {
                Metric::BranchCount => "decided at the root by both sides without branching",
                _ => "outside the claim's input class",
            };
            r.notes.push(format!("{} instances skipped: {why}", r.skipped));
        }
        if let Some(e) = self.first_error {
            r.notes.push(format!("first refused instance: {e}"));
        }
        if r.claim.metric != Metric::BranchCount {
            let relation = match (r.lhs_better, r.rhs_better) {
                (0, 0) => "equivalent",
                (_, 0) => "lhs strictly stronger",
                (0, _) => "rhs strictly stronger",
                _ => "incomparable",
            };
            r.notes.push(format!(
                "observed on conflicts: only {} {} times, only {} {} times ({relation})",
                r.claim.lhs, r.lhs_better, r.claim.rhs, r.rhs_better
            ));
        }
        self.report
    }
}

/// Verifies one claim over the suite under a frozen convention.
pub fn verify_claim(claim: ClaimId, suite: &SuiteSpec, convention: Convention, amo: Amo) -> Result<TheoremReport> {
    let spec = claim.claim();
    let conv_name = if spec.metric == Metric::BranchCount {
        convention.name()
    } else {
        "n/a".to_string()
    };
    let mut acc = Accumulator::new(spec.clone(), conv_name);
    match spec.input {
        InputClass::Sat => {
            for (i, f) in suite.sat_instances()?.enumerate() {
                acc.add(i as u64, eval_sat(claim, &f, convention), || write_dimacs(&f));
            }
        }
        InputClass::BinaryCsp => {
            for (i, p) in suite.csp_instances()?.enumerate() {
                acc.add(i as u64, eval_csp(claim, &p, convention, amo), || write_csp(&p));
            }
        }
    }
    Ok(acc.finish())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationRun {
    pub suite: SuiteSpec,
    pub suite_description: String,
    pub amo: Amo,
    pub calibration: Option<Calibration>,
    pub reports: Vec<TheoremReport>,
}

impl VerificationRun {
    pub fn all_pass(&self) -> bool {
        self.reports.iter().all(|r| r.pass)
    }
}

/// Verifies the selected claims. When any of them compares search trees,
/// the branch convention is calibrated on the same suite first and then
/// frozen for every claim.
pub fn verify(claims: &[ClaimId], suite: &SuiteSpec, amo: Amo) -> Result<VerificationRun> {
    let mut ids = claims.to_vec();
    ids.sort();
    ids.dedup();
    let needs_convention = ids.iter().any(|c| c.claim().metric == Metric::BranchCount);
    let calibration = if needs_convention {
        Some(calibrate_branch_convention(suite, amo)?)
    } else {
        None
    };
    let convention = calibration
        .as_ref()
        .map(|c| c.selected)
        .unwrap_or(Convention::new(BranchMetric::FailedLeaves, PolarityRule::ValueSelection));
    let reports = ids
        .iter()
        .map(|&c| verify_claim(c, suite, convention, amo))
        .collect::<Result<Vec<_>>>()?;
    Ok(VerificationRun {
        suite: suite.clone(),
        suite_description: suite.describe(),
        amo,
        calibration,
        reports,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Structured,
}

pub const CSV_HEADER: [&str; 8] = [
    "claim_id",
    "instances",
    "violations",
    "strict_witnesses",
    "incomparability_witnesses",
    "convention",
    "pass",
    "skipped",
];

/// Renders a run. CSV has one row per claim; the structured form is JSON
/// and embeds witness instances verbatim.
pub fn emit_report(run: &VerificationRun, format: ReportFormat) -> Result<String> {
    match format {
        ReportFormat::Structured => {
            let mut out = serde_json::to_string_pretty(run)?;
            out.push('\n');
            Ok(out)
        }
        ReportFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let io = |e: csv::Error| Error::Invalid(format!("csv: {e}"));
            w.write_record(CSV_HEADER).map_err(io)?;
            for r in &run.reports {
                w.write_record([
                    r.claim.id.as_str().to_string(),
                    r.instances.to_string(),
                    r.violations.to_string(),
                    r.strict_witnesses.to_string(),
                    r.incomparability_witnesses(),
                    r.convention.clone(),
                    r.pass.to_string(),
                    r.skipped.to_string(),
                ])
                .map_err(io)?;
            }
            let bytes = w.into_inner().map_err(|e| Error::Invalid(format!("csv: {e}")))?;
            Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
        }
    }
}

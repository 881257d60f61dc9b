use satcsp::encoding::Amo;
use satcsp::harness::{
    calibrate_branch_convention, emit_report, verify, verify_claim, ClaimId, Convention, ReportFormat, SuiteSpec,
    CSV_HEADER,
};
use satcsp::sat::parse_dimacs;

fn small() -> SuiteSpec {
    SuiteSpec::Exhaustive {
        max_vars: 2,
        max_clauses: 3,
        max_width: 2,
        max_domain: 2,
    }
}

#[test]
fn small_suite_has_no_violations() {
    let run = verify(&ClaimId::ALL, &small(), Amo::None).unwrap();
    assert_eq!(run.reports.len(), ClaimId::ALL.len());
    for r in &run.reports {
        assert_eq!(r.violations, 0, "{}", r.claim.id);
        assert!(r.violation_examples.is_empty());
    }
    let cal = run.calibration.as_ref().unwrap();
    assert!(cal.zero_violations);
    assert_eq!(cal.candidates.len(), Convention::CANDIDATES.len());
}

#[test]
fn witnesses_are_real_instances() {
    let report = verify_claim(ClaimId::T1, &SuiteSpec::exhaustive_default(), Convention::CANDIDATES[0], Amo::None).unwrap();
    let w = report.strict_example.expect("T1 has a strict witness");
    assert!(w.lhs < w.rhs);
    let f = parse_dimacs(&w.instance).unwrap();
    assert!(f.num_clauses() > 0);
}

#[test]
fn calibration_is_recorded_per_candidate() {
    let cal = calibrate_branch_convention(&small(), Amo::None).unwrap();
    let names: Vec<&str> = cal.candidates.iter().map(|c| c.convention.as_str()).collect();
    assert!(names.contains(&cal.selected_name.as_str()));
    let chosen = cal.candidates.iter().find(|c| c.convention == cal.selected_name).unwrap();
    assert_eq!(chosen.hidden_violations + chosen.direct_violations, 0);
    // Candidates before the selected one must each have a counterexample.
    for c in cal.candidates.iter().take_while(|c| c.convention != cal.selected_name) {
        assert!(c.hidden_counterexample.is_some() || c.direct_counterexample.is_some(), "{}", c.convention);
    }
}

#[test]
fn reports_are_deterministic() {
    let suite = SuiteSpec::random_default(50, 11);
    let a = verify(&ClaimId::ALL, &suite, Amo::Pairwise).unwrap();
    let b = verify(&ClaimId::ALL, &suite, Amo::Pairwise).unwrap();
    for format in [ReportFormat::Csv, ReportFormat::Structured] {
        assert_eq!(emit_report(&a, format).unwrap(), emit_report(&b, format).unwrap());
    }
}

#[test]
fn csv_has_one_row_per_claim() {
    let claims = ClaimId::parse_selection("T2,T8").unwrap();
    assert_eq!(claims, [ClaimId::T2, ClaimId::T8Log, ClaimId::T8Ac]);
    let run = verify(&claims, &small(), Amo::None).unwrap();
    assert!(run.calibration.is_none());
    let text = emit_report(&run, ReportFormat::Csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), CSV_HEADER.join(","));
    let ids: Vec<&str> = lines.map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(ids, ["T2", "T8a", "T8b"]);
}

#[test]
fn unknown_claims_are_rejected() {
    assert!(ClaimId::parse_selection("T11").is_err());
    assert!(ClaimId::parse_selection("").is_err());
    assert_eq!(ClaimId::parse_selection("all").unwrap().len(), 14);
    assert_eq!("t10a".parse::<ClaimId>().unwrap(), ClaimId::T10Fc);
}

#[test]
fn suites_yield_the_family_sizes() {
    let s = SuiteSpec::exhaustive_default();
    assert_eq!(s.sat_instances().unwrap().count(), 17901);
    assert_eq!(s.csp_instances().unwrap().count(), 64303);
    let r = SuiteSpec::random_default(7, 3);
    assert_eq!(r.sat_instances().unwrap().count(), 7);
    assert_eq!(r.csp_instances().unwrap().count(), 7);
}

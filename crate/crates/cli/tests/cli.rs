use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn satcsp(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_satcsp"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn solve_dimacs_with_dp() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("f.cnf"), "p cnf 2 2\n1 2 0\n-1 0\n").unwrap();
    let o = satcsp(&["solve", "--solver", "dp", "f.cnf"], dir.path());
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("status: sat"), "{text}");
    assert!(text.contains("decisions_total: 0"), "{text}");
}

#[test]
fn unsat_is_not_an_error() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("f.cnf"), "p cnf 1 2\n1 0\n-1 0\n").unwrap();
    let o = satcsp(&["solve", "--solver", "dp", "f.cnf"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("status: unsat"));
}

#[test]
fn encode_then_solve_both_ways() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("f.cnf"), "p cnf 3 3\n1 2 0\n-1 3 0\n-2 -3 0\n").unwrap();
    for enc in ["dual", "hidden", "literal"] {
        let o = satcsp(&["encode", "--from", "sat", "--to", "csp", "--encoding", enc, "f.cnf", "-o", "p.json"], dir.path());
        assert!(o.status.success(), "{enc}: {}", String::from_utf8_lossy(&o.stderr));
        assert!(dir.path().join("p.json.map.json").exists());
        for solver in ["fc", "mac"] {
            let o = satcsp(&["solve", "--solver", solver, "p.json"], dir.path());
            assert!(stdout(&o).contains("status: sat"), "{enc}/{solver}");
        }
        let o = satcsp(&["encode", "--from", "csp", "--to", "sat", "--encoding", "log", "p.json", "-o", "g.cnf"], dir.path());
        assert!(o.status.success());
        assert!(stdout(&satcsp(&["solve", "--solver", "dp", "g.cnf"], dir.path())).contains("status: sat"));
    }
}

#[test]
fn propagate_reports_conflict() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("f.cnf"), "p cnf 2 3\n1 0\n-1 2 0\n-2 0\n").unwrap();
    let o = satcsp(&["propagate", "--method", "up", "f.cnf"], dir.path());
    assert!(o.status.success());
    assert!(stdout(&o).contains("conflict: true"));
}

#[test]
fn gen_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["a.cnf", "b.cnf"] {
        let args = ["gen", "--kind", "ksat", "--vars", "20", "--clauses", "85", "--width", "3", "--seed", "7", "-o", name];
        assert!(satcsp(&args, dir.path()).status.success());
    }
    let a = fs::read(dir.path().join("a.cnf")).unwrap();
    assert_eq!(a, fs::read(dir.path().join("b.cnf")).unwrap());
    assert!(String::from_utf8_lossy(&a).starts_with("p cnf 20 85"));
}

#[test]
fn usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(satcsp(&["solve", "--bogus"], dir.path()).status.code(), Some(2));
    assert_eq!(satcsp(&["solve", "--solver", "dp", "missing.cnf"], dir.path()).status.code(), Some(2));
    fs::write(dir.path().join("bad.cnf"), "p cnf 2 1\n1 3 0\n").unwrap();
    let o = satcsp(&["solve", "--solver", "dp", "bad.cnf"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("exceeds"));
    assert_eq!(satcsp(&["verify", "--claims", "T99", "--report", "r.csv"], dir.path()).status.code(), Some(2));
}

#[test]
fn verify_writes_parseable_csv() {
    let dir = tempfile::tempdir().unwrap();
    let o = satcsp(
        &["verify", "--claims", "T2,T9", "--max-vars", "2", "--max-domain", "2", "--report", "r.csv"],
        dir.path(),
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let mut rdr = csv::Reader::from_path(dir.path().join("r.csv")).unwrap();
    let headers: Vec<String> = rdr.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(headers[0], "claim_id");
    assert!(headers.iter().any(|h| h == "incomparability_witnesses"));
    let ids: Vec<String> = rdr.records().map(|r| r.unwrap()[0].to_string()).collect();
    assert_eq!(ids, ["T2", "T9a", "T9b"]);
}

#[test]
fn verify_structured_embeds_witnesses() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["verify", "--claims", "T1", "--report", "r.json", "--format", "structured"];
    assert!(satcsp(&args, dir.path()).status.success());
    let text = fs::read_to_string(dir.path().join("r.json")).unwrap();
    assert!(text.contains("\"strict_example\""));
    assert!(text.contains("p cnf"));
}

use std::process::{Command, Output};

use asmass::oracle::VerifyReport;
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_asmass"))
        .args(args)
        .env_remove("ASMASS_MAX_POP")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn eval_genus_headline() {
    let o = run(&["eval", "--p", "7", "--g", "12"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("Z = 4q^3 - 3q^2 = 1225 at q=7\n"));
    let o = run(&["eval", "--p", "2", "--g", "3"]);
    assert!(stdout(&o).starts_with("Z = q^5 = 32 at q=2"));
}

#[test]
fn eval_json_rows() {
    let o = run(&["eval", "--p", "3", "--g", "5", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let rows: Vec<Value> = serde_json::from_str(&stdout(&o)).unwrap();
    let rams: Vec<&str> = rows.iter().map(|r| r["R"].as_str().unwrap()).collect();
    // {7} is not admissible in characteristic 3
    assert_eq!(rams, ["{2,2,3}", "{2,5}", "total"]);
    assert_eq!(rows[0]["delta"], 4);
    assert_eq!(rows[2]["poly"], "q^4 - q^3");
}

#[test]
fn eval_shape_csv() {
    let o = run(&["eval", "--q", "5", "--ram", "2,2,3", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("p,q,g,R,S,delta,Z,poly"));
    assert!(text.lines().any(|l| l.contains("all") && l.ends_with("q^4 - 2q^3 + q^2")));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["eval", "--p", "4", "--g", "2"]).status.code(), Some(2));
    assert_eq!(run(&["eval", "--p", "3", "--q", "25", "--g", "2"]).status.code(), Some(2));
    assert_eq!(run(&["eval", "--p", "5", "--g", "3"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    let o = run(&["eval", "--q", "5", "--ram", "2,2,2,2", "--split", "(2-2),(2-2)"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("verify"));
    let o = run(&["enumerate", "--q", "9", "--ram", "7,7,7", "--max-population", "1000"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn orbit_examples() {
    let o = run(&["orbits", "--q", "5", "--format", "json"]);
    let rows: Vec<Value> = serde_json::from_str(&stdout(&o)).unwrap();
    let total = rows.iter().find(|r| r["behavior"] == "total").unwrap();
    assert_eq!(total["burnside"], 11);
    assert_eq!(total["closed_form"], 11);
    let o = run(&["orbits", "--q", "3", "--behavior", "cubic", "--format", "json"]);
    let rows: Vec<Value> = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(rows[0]["burnside"], 2);
    let o = run(&["orbits", "--q", "7", "--behavior", "quad", "--format", "json"]);
    let rows: Vec<Value> = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(rows[0]["burnside"], 3);
    assert_eq!(rows[0]["closed_form"], 3);
}

#[test]
fn verify_exit_codes_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let o = run(&["verify", "--p", "3", "--q", "9", "--g", "3", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    let reports: Vec<VerifyReport> = serde_json::from_str(&text).unwrap();
    assert_eq!(reports.len(), 1);
    assert!(reports[0].agree);
    assert_eq!(reports[0].formula, "81/1");

    let o = run(&["verify", "--q", "2", "--g", "2", "--corrupt-formula"]);
    assert_eq!(o.status.code(), Some(1));

    let o = run(&["verify", "--q", "9", "--g", "5", "--max-population", "100"]);
    assert_eq!(o.status.code(), Some(0));
    let reports: Vec<VerifyReport> = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(reports[0].status, "skipped(size)");
}

#[test]
fn env_var_sets_size_bound() {
    let o = Command::new(env!("CARGO_BIN_EXE_asmass"))
        .args(["verify", "--q", "9", "--g", "3"])
        .env("ASMASS_MAX_POP", "10")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    let reports: Vec<VerifyReport> = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(reports[0].status, "skipped(size)");
}

#[test]
fn enumerate_is_deterministic() {
    let args = ["enumerate", "--q", "3", "--ram", "3"];
    let a = run(&args);
    let b = run(&["--threads", "1", "enumerate", "--q", "3", "--ram", "3"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    let mut weight = num_rational::Ratio::new(0i64, 1);
    for line in text.lines() {
        let v: Value = serde_json::from_str(line).unwrap();
        let c = v["centralizer_order"].as_i64().unwrap();
        assert_eq!(c % 3, 0);
        assert_eq!(c, 3 * v["stab_order"].as_i64().unwrap());
        weight += num_rational::Ratio::new(1, c);
        assert_eq!(serde_json::from_str::<Value>(&serde_json::to_string(&v).unwrap()).unwrap(), v);
    }
    assert_eq!(weight, num_rational::Ratio::from_integer(1));
}

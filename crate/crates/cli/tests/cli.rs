use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn qser(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qser"))
        .args(args)
        .env_remove("QSER_CACHE_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json_rows(o: &Output) -> Vec<Value> {
    stdout(o).lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

/// Checks a row against the shipped schema's required keys, closed
/// property set, `type` and `enum` constraints (the subset the schema uses).
struct Schema(Value);

impl Schema {
    fn is_valid(&self, row: &Value) -> bool {
        conforms(&self.0, row)
    }
}

fn conforms(schema: &Value, v: &Value) -> bool {
    let type_ok = |t: &Value| match t.as_str().unwrap() {
        "object" => v.is_object(),
        "string" => v.is_string(),
        "integer" => v.is_i64() || v.is_u64(),
        "number" => v.is_number(),
        "array" => v.is_array(),
        "null" => v.is_null(),
        other => panic!("schema type {other}"),
    };
    match &schema["type"] {
        Value::Array(ts) if !ts.iter().any(type_ok) => return false,
        t @ Value::String(_) if !type_ok(t) => return false,
        _ => {}
    }
    if let Some(options) = schema["enum"].as_array() {
        if !options.contains(v) {
            return false;
        }
    }
    if let Some(min) = schema["minimum"].as_f64() {
        if v.as_f64().is_some_and(|x| x < min) {
            return false;
        }
    }
    if let Some(items) = schema.get("items") {
        if !v.as_array().unwrap().iter().all(|x| conforms(items, x)) {
            return false;
        }
    }
    if let Some(obj) = v.as_object() {
        let props = schema["properties"].as_object().unwrap();
        let required = schema["required"].as_array().map_or(&[][..], |r| r.as_slice());
        if !required.iter().all(|k| obj.contains_key(k.as_str().unwrap())) {
            return false;
        }
        return obj.iter().all(|(k, x)| props.get(k).is_some_and(|s| conforms(s, x)));
    }
    true
}

fn schema() -> Schema {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../docs/report.schema.json");
    Schema(serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap())
}

#[test]
fn schema_rejects_bad_rows() {
    let s = schema();
    let good = serde_json::json!({"id": "x", "ell": 3, "A": 9, "B": 4, "M": 12, "n_max": 5, "status": "pass", "seconds": 0.1});
    assert!(s.is_valid(&good));
    let mut bad = good.clone();
    bad["status"] = "ok".into();
    assert!(!s.is_valid(&bad));
    let mut extra = good.clone();
    extra["foo"] = 1.into();
    assert!(!s.is_valid(&extra));
    let mut missing = good;
    missing.as_object_mut().unwrap().remove("M");
    assert!(!s.is_valid(&missing));
}

#[test]
fn verify_elthm_passes_four() {
    let o = qser(&["--format", "json", "verify", "elthm"]);
    assert_eq!(o.status.code(), Some(0));
    let rows = json_rows(&o);
    assert_eq!(rows.len(), 4);
    let s = schema();
    for r in &rows {
        assert!(s.is_valid(r), "{r}");
        assert_eq!(r["status"], "pass");
    }
    assert_eq!((rows[0]["A"].as_u64(), rows[0]["B"].as_i64(), rows[0]["M"].as_u64()), (Some(9), Some(4), Some(12)));
}

#[test]
fn conjectures_are_labeled() {
    let o = qser(&["--format", "json", "verify", "conj-128", "--nmax", "300"]);
    assert_eq!(o.status.code(), Some(0));
    let rows = json_rows(&o);
    assert_eq!(rows.len(), 2);
    for r in rows {
        assert!(r["notes"][0].as_str().unwrap().starts_with("conjecture: numerical evidence"));
    }
}

#[test]
fn unknown_theorem_is_a_usage_error() {
    let o = qser(&["verify", "nosuch"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("unknown theorem id"));
    assert_eq!(qser(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(qser(&["verify", "thm3n", "--k", "0"]).status.code(), Some(2));
}

#[test]
fn wrong_modulus_fails_with_counterexample() {
    let o = qser(&["--format", "json", "verify", "elthm", "--mod", "5"]);
    assert_eq!(o.status.code(), Some(1));
    let rows = json_rows(&o);
    assert!(rows.iter().any(|r| r["status"] == "fail" && r["counterexample"]["n"].is_i64()));
    let s = schema();
    assert!(rows.iter().all(|r| s.is_valid(r)));
}

#[test]
fn ceiling_refusals() {
    let o = qser(&["--ceiling", "1000", "verify", "family-mf", "--primes", "11,13", "--j", "2"]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(qser(&["--ceiling", "9000000", "verify", "elthm"]).status.code(), Some(2));
    assert_eq!(qser(&["--ceiling", "9000000", "--allow-large", "verify", "elthm"]).status.code(), Some(0));
    assert_eq!(qser(&["--ceiling", "100", "dump", "f1", "--trunc", "200"]).status.code(), Some(3));
}

#[test]
fn identities_at_minimum_trunc() {
    let o = qser(&["identities", "--trunc", "16"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).lines().filter(|l| l.starts_with("PASS")).count() >= 28);
    assert_eq!(qser(&["identities", "--trunc", "15"]).status.code(), Some(2));
}

#[test]
fn negative_control_fails() {
    let o = qser(&["--format", "csv", "identities", "--trunc", "40", "--id", "diss-1f1^2", "--negative-control"]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    let mut lines = out.lines();
    assert!(lines.next().unwrap().starts_with("id,ell,A,B,M,n_max,status"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 2);
    assert!(rows.iter().any(|l| l.starts_with("negative-control,") && l.contains(",fail,1,")));
}

#[test]
fn oracle_compare_agrees() {
    for ell in ["3", "8", "1"] {
        let o = qser(&["oracle-compare", "--ell", ell, "--n-enum", "20", "--n-dp", "300"]);
        assert_eq!(o.status.code(), Some(0), "ell {ell}");
    }
    let o = qser(&["oracle-compare", "--ell", "1", "--n-enum", "10", "--n-dp", "50"]);
    assert!(stdout(&o).contains("distinct parts"));
    assert_eq!(qser(&["oracle-compare", "--ell", "3", "--n-enum", "31"]).status.code(), Some(2));
}

#[test]
fn scan_rediscovers_elthm() {
    let o = qser(&["--format", "json", "scan", "--ell", "3", "--amax", "9", "--mod", "12,48", "--nmax", "200"]);
    assert_eq!(o.status.code(), Some(0));
    let found: Vec<(u64, i64, u64)> = json_rows(&o)
        .iter()
        .map(|r| (r["A"].as_u64().unwrap(), r["B"].as_i64().unwrap(), r["M"].as_u64().unwrap()))
        .collect();
    assert!(found.contains(&(9, 4, 12)));
    assert!(found.contains(&(9, 7, 48)));
    let o = qser(&["scan", "--ell", "3", "--amax", "1", "--mod", "2"]);
    assert_eq!(stdout(&o), "");
}

#[test]
fn dump_examples() {
    let o = qser(&["dump", "f2*f3/f1^2", "--trunc", "4"]);
    assert_eq!(stdout(&o), "1,2,4,7,12\n");
    let o = qser(&["dump", "q^0*7", "--trunc", "0"]);
    assert_eq!(stdout(&o), "7\n");
    let o = qser(&["dump", "1/(2+q)"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("non-unit"));
    let o = qser(&["dump", "f1*(f2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("position"));
    let o = qser(&["--format", "csv", "dump", "f1", "--trunc", "2", "--mod", "5"]);
    assert_eq!(stdout(&o), "n,coefficient\n0,1\n1,4\n2,4\n");
}

#[test]
fn cache_is_reused_and_cleared() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let first = qser(&["--cache-dir", d, "--format", "json", "verify", "elthm"]);
    assert_eq!(first.status.code(), Some(0));
    let info = stdout(&qser(&["--cache-dir", d, "cache", "info"]));
    assert_eq!(info.lines().count(), 4, "{info}");
    let second = qser(&["--cache-dir", d, "--format", "json", "verify", "elthm"]);
    let strip = |o: &Output| json_rows(o).into_iter().map(|r| (r["id"].clone(), r["status"].clone())).collect::<Vec<_>>();
    assert_eq!(strip(&first), strip(&second));
    assert!(String::from_utf8_lossy(&second.stderr).is_empty());
    // a corrupt table is a miss with a warning, and the run still succeeds
    for entry in std::fs::read_dir(d).unwrap() {
        std::fs::write(entry.unwrap().path(), b"QSER1garbage").unwrap();
    }
    let third = qser(&["--cache-dir", d, "verify", "elthm"]);
    assert_eq!(third.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&third.stderr).contains("corrupt"));
    let cleared = stdout(&qser(&["--cache-dir", d, "cache", "clear"]));
    assert!(cleared.starts_with("removed 4"));
    assert_eq!(qser(&["cache", "info"]).status.code(), Some(2));
}

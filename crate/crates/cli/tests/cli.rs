use std::process::Command;

use serde_json::Value;

fn secant(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_secant")).args(args).env_remove("SECANT_SEED").output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

fn scheme(name: &str) -> String {
    format!("{}/../../schemes/{name}", env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn secdim_examples() {
    for (n, s, observed, defect) in [("4", "3", 13, 1), ("3", "2", 7, 0), ("5", "6", 31, 0)] {
        let (code, out, _) = secant(&["secdim", "--n", n, "--s", s, "--format", "json"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!((v["observed"].as_u64(), v["defect"].as_u64()), (Some(observed), Some(defect)));
    }
}

#[test]
fn table_flags_only_four_three() {
    let (code, out, _) = secant(&["table", "--n-min", "3", "--n-max", "5", "--format", "csv"]);
    assert_eq!(code, 0);
    let mut lines = out.lines();
    assert_eq!(
        lines.next().unwrap(),
        "n,s,expected,observed,defect,expected_defect,matches,methods,cells_agreeing,cells,trials"
    );
    let defective: Vec<&str> = lines.filter(|l| l.split(',').nth(4) != Some("0")).collect();
    assert_eq!(defective, ["4,3,14,13,1,1,true,terracini,300,300,100"]);
}

#[test]
fn table_first_column_is_n() {
    let (_, out, _) = secant(&["table", "--n-min", "3", "--n-max", "6", "--format", "json"]);
    let v: Value = serde_json::from_str(&out).unwrap();
    for row in v["rows"].as_array().unwrap().iter().filter(|r| r["s"] == 1) {
        assert_eq!(row["observed"], row["n"]);
    }
}

#[test]
fn table_resource_guard() {
    let (code, _, err) = secant(&["table", "--n-min", "3", "--n-max", "21"]);
    assert_eq!(code, 2);
    assert!(err.contains("resource guard"));
}

#[test]
fn fatpoints_examples() {
    for (file, want) in [("transfer_4_3.json", 2), ("empty_p3.json", 20), ("residue_v1.json", 3)] {
        let (code, out, _) = secant(&["fatpoints", "--file", &scheme(file), "--format", "json"]);
        assert_eq!(code, 0, "{file}");
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["dimension"], want, "{file}");
    }
    let (_, out, _) = secant(&["fatpoints", "--file", &scheme("empty_p3.json"), "--degree", "2", "--format", "json"]);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["dimension"], 10);
}

#[test]
fn fatpoints_bad_files_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("syntax.json", "{\n  \"ambient\": 3,\n  \"degree\": \n}", "line 4"),
        (
            "field.json",
            r#"{"ambient": 3, "degree": 3, "subspaces": [{"id": "", "span": [{"coordinate": 1}]}]}"#,
            "subspaces[0].id",
        ),
        (
            "span.json",
            r#"{"ambient": 3, "degree": 3, "subspaces": [{"id": "L", "span": [{"coordinate": 1}, {"coordinate": 1}], "component": true}]}"#,
            "subspaces[0].span",
        ),
    ];
    for (name, text, needle) in cases {
        let path = dir.path().join(name);
        std::fs::write(&path, text).unwrap();
        let (code, _, err) = secant(&["fatpoints", "--file", path.to_str().unwrap()]);
        assert_eq!(code, 2, "{name}: {err}");
        assert!(err.contains(needle), "{name}: {err}");
    }
    let (code, _, _) = secant(&["fatpoints", "--file", "/nonexistent/scheme.json"]);
    assert_eq!(code, 2);
}

#[test]
fn certify_examples() {
    let (code, out, err) = secant(&["certify", "--n", "5", "--s", "5"]);
    assert_eq!(code, 0);
    assert!(err.contains("root claim dim (I_X)_5 = 2, status verified"), "{err}");
    assert!(out.contains("root claim 2: verified"));
    let (code, _, err) = secant(&["certify", "--n", "4", "--s", "3"]);
    assert_eq!(code, 2);
    assert!(err.contains("exception"));
    let (code, _, err) = secant(&["certify", "--n", "6", "--s", "10"]);
    assert_eq!(code, 2);
    assert!(err.contains("even"), "{err}");
}

#[test]
fn certify_bound_only_needs_flag() {
    let (code, out, _) = secant(&["certify", "--n", "6", "--s", "9", "--cap", "10", "--format", "json"]);
    assert_eq!(code, 1);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["status"], "bound-only");
    let (code, _, _) = secant(&["certify", "--n", "6", "--s", "9", "--cap", "10", "--allow-bound-only"]);
    assert_eq!(code, 0);
}

#[test]
fn certify_writes_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cert.json");
    let (code, out, _) =
        secant(&["certify", "--n", "5", "--s", "5", "--format", "json", "--output", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["root"]["claimed"], 2);
    let csv = secant(&["certify", "--n", "5", "--s", "5", "--format", "csv"]).1;
    assert!(csv.starts_with("depth,label,scheme,degree,rule,claimed,computed,relation,status,notes\n0,"));
}

#[test]
fn lemma_examples() {
    let (code, out, _) =
        secant(&["lemmas", "--which", "residue", "--m", "5", "--x", "1", "--y", "3", "--format", "json"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!((v["value"].as_u64(), v["passed"].as_bool()), (Some(4), Some(true)));
    let (code, out, _) =
        secant(&["lemmas", "--which", "trace", "--m", "4", "--x", "1", "--y", "2", "--format", "json"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["value"], 2);
    let (code, out, _) = secant(&["lemmas", "--which", "appendix", "--n-max", "64", "--format", "json"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert!(v["first_violation"].is_null());
    for args in [
        vec!["lemmas", "--which", "residue", "--v2"],
        vec!["lemmas", "--which", "substitution", "--m", "3"],
        vec!["lemmas", "--which", "fixcomp", "--i", "3", "--m", "4", "--n", "3"],
        vec!["lemmas", "--which", "lemzero", "--n", "4", "--count", "3"],
    ] {
        assert_eq!(secant(&args).0, 0, "{args:?}");
    }
}

#[test]
fn lemma_guards_exit_two() {
    let (code, _, err) = secant(&["lemmas", "--which", "residue", "--m", "5", "--x", "3", "--y", "0"]);
    assert_eq!(code, 2);
    assert!(err.contains("floor((m-1)/2)"), "{err}");
    let (code, _, err) = secant(&["lemmas", "--which", "trace", "--m", "3", "--x", "0", "--y", "1"]);
    assert_eq!(code, 2);
    assert!(err.contains("m >= 4"), "{err}");
    let (code, _, err) = secant(&["lemmas", "--which", "fixcomp", "--m", "3"]);
    assert_eq!(code, 2);
    assert!(err.contains("--i"), "{err}");
    let (code, _, _) = secant(&["lemmas", "--which", "appendix", "--n-min", "4"]);
    assert_eq!(code, 2);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(secant(&["secdim", "--n", "4"]).0, 2);
    assert_eq!(secant(&["secdim", "--n", "4", "--s", "3", "--trials", "0"]).0, 2);
    assert_eq!(secant(&["secdim", "--n", "4", "--s", "3", "--primes", "7"]).0, 2);
    assert_eq!(secant(&["secdim", "--n", "4", "--s", "3", "--format", "xml"]).0, 2);
    assert_eq!(secant(&["secdim", "--n", "0", "--s", "3"]).0, 2);
}

#[test]
fn json_keys_are_sorted() {
    let (_, out, _) = secant(&["secdim", "--n", "3", "--s", "2", "--format", "json"]);
    let keys: Vec<&str> =
        out.lines().filter(|l| l.starts_with("  \"")).map(|l| l.trim().split('"').nth(1).unwrap()).collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
}

#[test]
fn timings_only_on_request() {
    let (_, plain, _) = secant(&["table", "--n-min", "3", "--n-max", "3", "--format", "csv"]);
    assert!(!plain.contains("runtime_ms"));
    let (_, timed, _) = secant(&["table", "--n-min", "3", "--n-max", "3", "--format", "csv", "--timings"]);
    assert!(timed.lines().next().unwrap().ends_with(",runtime_ms"));
}

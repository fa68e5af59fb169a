use std::path::Path;
use std::process::Command;

use serde_json::Value;

fn blowup(args: &[&str]) -> (i32, Value) {
    let out = Command::new(env!("CARGO_BIN_EXE_blowup"))
        .arg("--json")
        .args(args)
        .output()
        .expect("spawn blowup");
    let stdout = String::from_utf8(out.stdout).expect("utf8");
    let value = serde_json::from_str(&stdout).unwrap_or_else(|e| panic!("{args:?}: {e}\n{stdout}"));
    (out.status.code().expect("exit code"), value)
}

fn validate(name: &str, doc: &Value) {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("schemas").join(format!("{name}.schema.json"));
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(&path).expect("schema file")).expect("schema json");
    let validator = jsonschema::validator_for(&schema).expect("valid schema");
    let errors: Vec<String> = validator.iter_errors(doc).map(|e| format!("{e} at {}", e.instance_path)).collect();
    assert!(errors.is_empty(), "{name}: {errors:#?}");
}

#[test]
fn solve_hash_output_matches_schema() {
    let (code, doc) = blowup(&["solve-hash", "--q", "1,2,3", "--exponents", "0,1"]);
    assert_eq!(code, 0);
    validate("solve-hash", &doc);
    assert_eq!(doc["tilde"], serde_json::json!(["1", "-2", "1"]));
}

#[test]
fn solve_hash_with_forbidden_exponent_matches_schema() {
    let (code, doc) = blowup(&["solve-hash", "--q", "1/2,2,3,5", "--exponents", "-1,1", "--forbidden", "0"]);
    assert_eq!(code, 0);
    validate("solve-hash", &doc);
    assert_eq!(doc["checks"].as_array().unwrap().len(), 3);
}

#[test]
fn bohr_output_matches_schema() {
    let (code, doc) = blowup(&["bohr", "--freqs", "0.5", "--rho", "0.3", "-N", "10"]);
    assert_eq!(code, 0);
    validate("bohr", &doc);
    assert_eq!(doc["members"], serde_json::json!([2, 4, 6, 8, 10]));
}

#[test]
fn check_gamma_output_matches_schema() {
    let (code, doc) = blowup(&["check-gamma", "--q", "1,2,3,4,5", "--alpha", "1/7", "--d", "2"]);
    assert_eq!(code, 0);
    validate("check-gamma", &doc);
    assert_eq!(doc["certificate"]["pass"], true);
}

#[test]
fn build_symbol_output_matches_schema() {
    let (code, doc) = blowup(&[
        "build-symbol",
        "--kind",
        "carleson",
        "--alpha",
        "1,-2,1",
        "--at",
        "1,0,0;-1,0,0",
        "--samples",
        "3",
        "--seed",
        "7",
    ]);
    assert_eq!(code, 0);
    validate("build-symbol", &doc);
    let evals = doc["evaluations"].as_array().unwrap();
    assert_eq!(evals.len(), 5);
    assert_eq!(evals[0]["re"], 1.0);
    assert_eq!(evals[1]["re"], 0.0);

    let (_, again) = blowup(&["build-symbol", "--kind", "carleson", "--alpha", "1,-2,1", "--at", "1,0,0;-1,0,0", "--samples", "3", "--seed", "7"]);
    assert_eq!(doc, again);

    let (code, doc) = blowup(&["build-symbol", "--kind", "paraproduct", "--k-max", "3", "--mikhlin", "1"]);
    assert_eq!(code, 0);
    validate("build-symbol", &doc);
    assert_eq!(doc["mikhlin"]["entries"].as_array().unwrap().len(), 3);
}

#[test]
fn kernel_lemma_output_matches_schema() {
    let (code, doc) = blowup(&["verify-kernel-lemma", "--k0", "2", "--k-max", "24"]);
    assert_eq!(code, 0);
    validate("verify-kernel-lemma", &doc);
    assert_eq!(doc["rows"].as_array().unwrap().len(), 23);
}

#[test]
fn run_blowup_output_matches_schema_and_writes_files() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("small.toml");
    std::fs::write(
        &cfg,
        "tag = \"MT**\"\nn = 3\nq = [\"1\", \"2\", \"3\"]\nn_schedule = [2, 4, 8]\na = 32\np = [3.0, 3.0, 3.0]\n\n[assertions]\nincreasing = true\n",
    )
    .unwrap();
    let out = dir.path().join("out");
    let (code, doc) = blowup(&["run-blowup", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap(), "--threads", "2"]);
    assert_eq!(code, 0);
    validate("run-blowup", &doc);
    for f in ["record.json", "ratios.csv", "ratios.svg"] {
        assert!(out.join(f).is_file(), "{f}");
    }
    let record: Value = serde_json::from_str(&std::fs::read_to_string(out.join("record.json")).unwrap()).unwrap();
    validate("run-blowup", &record);
}

#[test]
fn errors_match_schema() {
    let (code, doc) = blowup(&["solve-hash", "--q", "1,1,2", "--exponents", "0"]);
    assert_eq!(code, 3);
    validate("error", &doc);
}

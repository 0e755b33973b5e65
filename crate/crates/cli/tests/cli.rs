use std::path::PathBuf;
use std::process::Command;

use ksieve_cli::{run, EXIT_INPUT, EXIT_OK, EXIT_UNCOLORABLE, EXIT_VIOLATION};
use serde_json::Value;

fn ks(args: &[&str]) -> ksieve_cli::Output {
    run(std::iter::once("ksieve").chain(args.iter().copied()))
}

fn json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.push("--json");
    let out = ks(&all);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    serde_json::from_str(&out.stdout).unwrap()
}

fn temp_file(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("ksieve-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

#[test]
fn eval_spin_one_examples() {
    let v = json(&["eval", "bundled:spin_one", "vector psi", "Sx in {1}"]);
    assert_eq!(v["sieve"], serde_json::json!(["{-1,0,1}", "{-1,1}{0}"]));
    assert_eq!(v["classification"], "Intermediate");
    assert_eq!(v["mode"], "o");

    let v = json(&["eval", "bundled:spin_one", "vector psi", "Sx in {}"]);
    assert_eq!(v["classification"], "TotallyFalse");
    let v = json(&["eval", "bundled:spin_one", "density rho", "Sx in {-1,0,1}"]);
    assert_eq!(v["classification"], "TotallyTrue");
    let v = json(&["eval", "bundled:spin_one", "vector psi", "Sx in {1}", "--mode", "ostar"]);
    assert_eq!(v["sieve"], serde_json::json!(["{-1,1}{0}"]));
}

#[test]
fn eval_spin_half_modes() {
    let v = json(&["eval", "bundled:spin_half", "vector psi", "Sz=1/2"]);
    assert_eq!(v["classification"], "MinimallyTrue");
    let v = json(&["eval", "bundled:spin_half", "vector psi", "Sz=1/2", "--mode", "ostar"]);
    assert_eq!(v["classification"], "TotallyFalse");
    assert_eq!(v["sieve"], serde_json::json!([]));
}

#[test]
fn text_output_lists_sieve_and_class() {
    let out = ks(&["eval", "bundled:spin_one", "vector psi", "Sx=1"]);
    assert_eq!(out.stdout, "sieve: {{-1,0,1}, {-1,1}{0}}\nclassification: Intermediate\n");
}

#[test]
fn axioms_pass_and_fail() {
    let out = ks(&["axioms", "bundled:spin_one", "vector psi"]);
    assert_eq!(out.code, EXIT_OK, "{}", out.stdout);
    let out = ks(&["axioms", "bundled:spin_half", "threshold 0.4 mixed"]);
    assert_eq!(out.code, EXIT_VIOLATION);
    assert!(out.stdout.contains("exclusivity violated: {-0.5} and {0.5}"), "{}", out.stdout);

    let out = ks(&["axioms", "bundled:spin_half", "threshold 0.4 mixed", "--json"]);
    let v: Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["passed"], false);
    let sz = v["operators"].as_array().unwrap().iter().find(|o| o["operator"] == "Sz").unwrap();
    assert_eq!(sz["exclusivity_violations"], serde_json::json!([[["-0.5"], ["0.5"]]]));
}

#[test]
fn axioms_on_trivial_system_pass_vacuously() {
    let p = temp_file(
        "triv.json",
        r#"{"format": "quantum-system/1", "dimension": 1, "operators": {"I": {"matrix": [[1]]}}}"#,
    );
    let out = ks(&["axioms", p.to_str().unwrap(), "maximal I=1"]);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    let dot = ks(&["dot", p.to_str().unwrap(), "I"]);
    assert_eq!(dot.stdout.matches("[label=").count(), 1);
}

#[test]
fn maximal_valuations_report_unit_informationally() {
    let v = json(&["axioms", "bundled:spin_one", "maximal Sz=0", "--operator", "Sx"]);
    assert_eq!(v["passed"], true);
    assert_eq!(v["operators"][0]["unit"], false);
}

#[test]
fn ks_commands() {
    let out = ks(&["ks", "bundled:ks18_dim4"]);
    assert_eq!(out.code, EXIT_UNCOLORABLE);
    assert!(out.stdout.contains("uncolorable"));
    let v: Value = serde_json::from_str(&ks(&["ks", "bundled:ks18_dim4", "--minimize", "--json"]).stdout).unwrap();
    assert_eq!(v["minimal"].as_array().unwrap().len(), 9);

    let v = json(&["ks", "bundled:qubit_bases", "--witness"]);
    assert_eq!(v["colorable"], true);
    assert_eq!(v["witness"].as_array().unwrap().len(), 4);
    // the repeated basis must pick the same ray
    assert_eq!(v["witness"][0]["label"], v["witness"][3]["label"]);

    let single = temp_file(
        "single.json",
        r#"{"format": "contexts/1", "dim": 2, "vectors": {"a": ["1", "0"], "b": ["0", "1"]}, "contexts": [["a", "b"]]}"#,
    );
    assert_eq!(ks(&["ks", single.to_str().unwrap()]).code, EXIT_OK);

    let bad = temp_file(
        "bad.json",
        r#"{"format": "contexts/1", "dim": 2, "vectors": {"a": ["1", "0"], "b": ["1", "1"]}, "contexts": [["a", "b"]]}"#,
    );
    let out = ks(&["ks", bad.to_str().unwrap()]);
    assert_eq!(out.code, EXIT_INPUT);
    assert!(out.stderr.contains("contexts[0]"), "{}", out.stderr);
}

#[test]
fn dot_highlights_the_sieve() {
    let out = ks(&["dot", "bundled:spin_one", "Sx"]);
    assert_eq!(out.stdout.matches("[label=").count(), 5);
    assert!(!out.stdout.contains("filled"));
    let out = ks(&["dot", "bundled:spin_one", "Sx", "--valuation", "vector psi", "--proposition", "Sx=1"]);
    assert_eq!(out.stdout.matches("filled").count(), 2);
    let out = ks(&["dot", "bundled:spin_one", "Nope"]);
    assert_eq!(out.code, EXIT_INPUT);
}

#[test]
fn heyting_operations() {
    let v = json(&["heyting", "--k", "3", "join", "{1,3}{2}", "{1}{2,3}"]);
    assert_eq!(v["sieve"], serde_json::json!(["{1}{2,3}", "{1,2,3}", "{1,3}{2}"]));
    let v = json(&["heyting", "--k", "3", "meet", "{1,3}{2}", "{1}{2,3}"]);
    assert_eq!(v["sieve"], serde_json::json!(["{1,2,3}"]));
    assert_eq!(v["classification"], "MinimallyTrue");
    let v = json(&["heyting", "--k", "3", "not", "{1,2,3}"]);
    assert_eq!(v["classification"], "TotallyFalse");
    let v = json(&["heyting", "--k", "3", "implies", "", ""]);
    assert_eq!(v["classification"], "TotallyTrue");
    let v = json(&["heyting", "--k", "2", "not", "", "--mode", "ostar"]);
    assert_eq!(v["sieve"], serde_json::json!(["{1}{2}"]));
    assert_eq!(ks(&["heyting", "--k", "3", "not", "{1,2,3}", "--mode", "ostar"]).code, EXIT_INPUT);
    assert_eq!(ks(&["heyting", "--k", "3", "meet", "{1,2}"]).code, EXIT_INPUT);
}

#[test]
fn input_errors_exit_two() {
    assert_eq!(ks(&["eval", "/nonexistent.json", "vector psi", "Sx=1"]).code, EXIT_INPUT);
    assert_eq!(ks(&["eval", "bundled:spin_one", "vector psi", "Sx=3"]).code, EXIT_INPUT);
    assert_eq!(ks(&["eval", "bundled:spin_one", "vector psi", "Sx=1", "--tol", "bogus=1"]).code, EXIT_INPUT);
    assert_eq!(ks(&["frobnicate"]).code, EXIT_INPUT);
    let p = temp_file("trailing.json", "{\"format\": \"quantum-system/1\",\n \"dimension\": 2,}");
    let out = ks(&["eval", p.to_str().unwrap(), "vector psi", "A=1"]);
    assert_eq!(out.code, EXIT_INPUT);
    assert!(out.stderr.contains("line 2"), "{}", out.stderr);
}

#[test]
fn tolerance_override_is_applied() {
    let v = json(&["eval", "bundled:spin_one", "vector psi", "Sx=1", "--tol", "one=1e-6"]);
    assert_eq!(v["classification"], "Intermediate");
}

#[test]
fn binary_is_deterministic_and_sets_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_ksieve");
    let go = |args: &[&str]| Command::new(bin).args(args).output().unwrap();
    let a = go(&["axioms", "bundled:spin_one", "vector psi", "--json"]);
    let b = go(&["axioms", "bundled:spin_one", "vector psi", "--json"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(go(&["ks", "bundled:ks18_dim4"]).status.code(), Some(3));
    assert_eq!(go(&["axioms", "bundled:spin_half", "threshold 0.4 mixed"]).status.code(), Some(1));
    let bad = go(&["eval", "bundled:nothing", "x", "y"]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("unknown bundled file"));
    assert_eq!(go(&["--help"]).status.code(), Some(0));
}
